#include "glerg/sieve.hpp"

#include <algorithm>

namespace glerg {

void Sieve::grow(std::int64_t limit) {
    limit = std::min(limit, kSieveCache);
    auto have = static_cast<std::int64_t>(composite_.size()) - 1;
    if (limit <= have) return;
    limit = std::min(std::max({limit, 2 * have, std::int64_t{1} << 16}), kSieveCache);
    composite_.assign(limit + 1, false);
    composite_[0] = composite_[1] = true;
    for (std::int64_t p = 2; p * p <= limit; ++p)
        if (!composite_[p])
            for (std::int64_t m = p * p; m <= limit; m += p) composite_[m] = true;
    primes_.clear();
    for (std::int64_t n = 2; n <= limit; ++n)
        if (!composite_[n]) primes_.push_back(n);
}

bool Sieve::is_prime(std::int64_t n) {
    if (n < 2) return false;
    if (n <= kSieveCache) {
        grow(n);
        return !composite_[n];
    }
    grow(static_cast<std::int64_t>(std::sqrt(static_cast<double>(n))) + 1);
    for (std::int64_t p : primes_) {
        if (p * p > n) break;
        if (n % p == 0) return false;
    }
    return true;
}

void Sieve::for_each_prime(std::int64_t N, const std::function<void(std::int64_t)>& f) {
    grow(N);
    for (std::int64_t p : primes_) {
        if (p > N) return;
        f(p);
    }
    // segmented beyond the cache
    const std::int64_t seg = std::int64_t{1} << 20;
    std::vector<bool> mark;
    for (std::int64_t lo = kSieveCache + 1; lo <= N; lo += seg) {
        std::int64_t hi = std::min(N, lo + seg - 1);
        mark.assign(hi - lo + 1, false);
        for (std::int64_t p : primes_) {
            if (p * p > hi) break;
            std::int64_t start = std::max(p * p, (lo + p - 1) / p * p);
            for (std::int64_t m = start; m <= hi; m += p) mark[m - lo] = true;
        }
        for (std::int64_t n = lo; n <= hi; ++n)
            if (!mark[n - lo]) f(n);
    }
}

std::int64_t Sieve::prime_pi(std::int64_t N) {
    std::int64_t c = 0;
    for_each_prime(N, [&](std::int64_t) { ++c; });
    return c;
}

Sieve& global_sieve() {
    static Sieve s;
    return s;
}

double WeightSeq::operator()(std::int64_t n) const {
    switch (kind) {
    case WeightKind::Uniform: return 1.0;
    case WeightKind::PrimeIndicator: return global_sieve().is_prime(n) ? 1.0 : 0.0;
    case WeightKind::VonMangoldtModified:
        return global_sieve().is_prime(n) ? std::log(static_cast<double>(n)) : 0.0;
    }
    return 0.0;
}

} // namespace glerg
