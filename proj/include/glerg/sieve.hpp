#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <type_traits>
#include <vector>

namespace glerg {

constexpr std::int64_t kSieveCache = 10'000'000;

// Eratosthenes table grown on demand up to kSieveCache, segmented above.
class Sieve {
public:
    bool is_prime(std::int64_t n);
    void for_each_prime(std::int64_t N, const std::function<void(std::int64_t)>& f);
    std::int64_t prime_pi(std::int64_t N);

private:
    std::vector<bool> composite_{true, true};
    std::vector<std::int64_t> primes_;
    void grow(std::int64_t limit);
};

Sieve& global_sieve();

enum class WeightKind { Uniform, VonMangoldtModified, PrimeIndicator };

struct WeightSeq {
    WeightKind kind = WeightKind::Uniform;
    double operator()(std::int64_t n) const;
};

template <class F>
auto prime_average(F&& f, std::int64_t N) {
    using V = std::decay_t<decltype(f(std::int64_t{}))>;
    V acc{};
    std::int64_t count = 0;
    global_sieve().for_each_prime(N, [&](std::int64_t p) {
        if (count == 0) acc = f(p);
        else acc += f(p);
        ++count;
    });
    return V(acc / static_cast<double>(count));
}

// (1/N) sum_{n<=N} Λ'(n) f(n), Λ' = 1_P log
template <class F>
auto lambda_prime_average(F&& f, std::int64_t N) {
    using V = std::decay_t<decltype(f(std::int64_t{}))>;
    V acc{};
    bool first = true;
    global_sieve().for_each_prime(N, [&](std::int64_t p) {
        V term = f(p) * std::log(static_cast<double>(p));
        if (first) acc = term;
        else acc += term;
        first = false;
    });
    return V(acc / static_cast<double>(N));
}

} // namespace glerg
