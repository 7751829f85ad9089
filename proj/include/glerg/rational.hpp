#pragma once

#include <cstdint>
#include <cmath>
#include <functional>
#include <numeric>
#include <ostream>
#include <string>

#include "glerg/errors.hpp"

namespace glerg {

// Rational with int64 numerator/denominator. Every operation is checked;
// anything that does not fit throws ErrorKind::Overflow instead of wrapping.
class Rational {
public:
    Rational() = default;
    Rational(std::int64_t n) : num_(n), den_(1) {}
    Rational(std::int64_t n, std::int64_t d) { assign(n, d); }

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }

    bool is_zero() const { return num_ == 0; }
    bool is_integer() const { return den_ == 1; }
    int sign() const { return (num_ > 0) - (num_ < 0); }

    double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

    std::int64_t floor() const {
        std::int64_t q = num_ / den_;
        if (num_ % den_ != 0 && num_ < 0) --q;
        return q;
    }
    std::int64_t ceil() const { return -Rational(-num_, den_).floor(); }
    Rational frac() const { return *this - Rational(floor()); }
    Rational abs() const { return num_ < 0 ? -*this : *this; }

    Rational operator-() const {
        if (num_ == INT64_MIN) throw Error(ErrorKind::Overflow, "rational negate");
        Rational r;
        r.num_ = -num_;
        r.den_ = den_;
        return r;
    }

    friend Rational operator+(const Rational& a, const Rational& b) {
        if (a.den_ == b.den_) return make(static_cast<__int128>(a.num_) + b.num_, a.den_);
        __int128 n = static_cast<__int128>(a.num_) * b.den_ + static_cast<__int128>(b.num_) * a.den_;
        __int128 d = static_cast<__int128>(a.den_) * b.den_;
        return make(n, d);
    }
    friend Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }
    friend Rational operator*(const Rational& a, const Rational& b) {
        if (a.num_ == 0 || b.num_ == 0) return Rational();
        return make(static_cast<__int128>(a.num_) * b.num_, static_cast<__int128>(a.den_) * b.den_);
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.num_ == 0) throw Error(ErrorKind::InvalidArgument, "rational division by zero");
        return make(static_cast<__int128>(a.num_) * b.den_, static_cast<__int128>(a.den_) * b.num_);
    }

    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    Rational& operator-=(const Rational& o) { return *this = *this - o; }
    Rational& operator*=(const Rational& o) { return *this = *this * o; }
    Rational& operator/=(const Rational& o) { return *this = *this / o; }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
    friend bool operator<(const Rational& a, const Rational& b) {
        return static_cast<__int128>(a.num_) * b.den_ < static_cast<__int128>(b.num_) * a.den_;
    }
    friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
    friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
    friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

    std::string str() const {
        if (den_ == 1) return std::to_string(num_);
        return std::to_string(num_) + "/" + std::to_string(den_);
    }

    // "p", "-p", "p/q"
    static Rational parse(const std::string& s);

    // smallest dyadic k/2^bits >= x (or <= x when down)
    static Rational round_dyadic(const Rational& x, int bits, bool down);

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

private:
    std::int64_t num_ = 0;
    std::int64_t den_ = 1;

    static __int128 gcd128(__int128 a, __int128 b) {
        if (a < 0) a = -a;
        if (b < 0) b = -b;
        while (b != 0) {
            __int128 t = a % b;
            a = b;
            b = t;
        }
        return a;
    }

    static Rational make(__int128 n, __int128 d) {
        if (d < 0) {
            n = -n;
            d = -d;
        }
        __int128 g = gcd128(n, d);
        if (g > 1) {
            n /= g;
            d /= g;
        }
        if (n > INT64_MAX || n < -INT64_MAX || d > INT64_MAX)
            throw Error(ErrorKind::Overflow, "rational overflow");
        Rational r;
        r.num_ = static_cast<std::int64_t>(n);
        r.den_ = static_cast<std::int64_t>(d);
        return r;
    }

    void assign(std::int64_t n, std::int64_t d) {
        if (d == 0) throw Error(ErrorKind::InvalidArgument, "zero denominator");
        *this = make(n, d);
    }
};

inline std::int64_t checked_lcm(std::int64_t a, std::int64_t b) {
    __int128 l = static_cast<__int128>(a / std::gcd(a, b)) * b;
    if (l > INT64_MAX) throw Error(ErrorKind::Overflow, "lcm overflow");
    return static_cast<std::int64_t>(l);
}

} // namespace glerg

template <>
struct std::hash<glerg::Rational> {
    std::size_t operator()(const glerg::Rational& r) const noexcept {
        return std::hash<std::int64_t>()(r.num()) * 1000003u ^ std::hash<std::int64_t>()(r.den());
    }
};
