#include "glerg/interval.hpp"

#include <algorithm>

namespace glerg {

namespace {

constexpr int kGridBits = 30;

// keep denominators small: push endpoints outward to a dyadic grid
Interval tame(Interval r) {
    if (!r.lo_inf && r.lo.den() > (std::int64_t(1) << 40)) {
        Rational x = Rational::round_dyadic(r.lo, kGridBits, true);
        if (x != r.lo) r.lo_open = false;
        r.lo = x;
    }
    if (!r.hi_inf && r.hi.den() > (std::int64_t(1) << 40)) {
        Rational x = Rational::round_dyadic(r.hi, kGridBits, false);
        if (x != r.hi) r.hi_open = false;
        r.hi = x;
    }
    return r;
}

} // namespace

Interval Interval::around(const SymReal& x) {
    auto [a, b] = rational_enclosure(x, kGridBits);
    return Interval::closed(a, b);
}

bool Interval::is_empty() const {
    if (lo_inf || hi_inf) return false;
    if (hi < lo) return true;
    return lo == hi && (lo_open || hi_open);
}

bool Interval::contains(const Rational& x) const {
    if (!lo_inf && (x < lo || (lo_open && x == lo))) return false;
    if (!hi_inf && (x > hi || (hi_open && x == hi))) return false;
    return true;
}

bool Interval::contains(const SymReal& x) const {
    if (x.is_rational()) return contains(x.rational_part());
    // irrational x never equals a rational endpoint
    if (!lo_inf && compare(x, lo) < 0) return false;
    if (!hi_inf && compare(x, hi) > 0) return false;
    return true;
}

Rational Interval::sup_abs() const {
    if (!is_bounded()) throw Error(ErrorKind::InvalidArgument, "sup of an unbounded interval");
    return std::max(lo.abs(), hi.abs());
}

Interval Interval::operator+(const Interval& o) const {
    Interval r;
    r.lo_inf = lo_inf || o.lo_inf;
    r.hi_inf = hi_inf || o.hi_inf;
    if (!r.lo_inf) {
        r.lo = lo + o.lo;
        r.lo_open = lo_open || o.lo_open;
    } else {
        r.lo_open = true;
    }
    if (!r.hi_inf) {
        r.hi = hi + o.hi;
        r.hi_open = hi_open || o.hi_open;
    } else {
        r.hi_open = true;
    }
    return tame(r);
}

Interval Interval::operator-() const {
    Interval r;
    r.lo_inf = hi_inf;
    r.hi_inf = lo_inf;
    r.lo_open = hi_open;
    r.hi_open = lo_open;
    if (!r.lo_inf) r.lo = -hi;
    if (!r.hi_inf) r.hi = -lo;
    return r;
}

Interval Interval::scaled(const Rational& q) const {
    if (q.is_zero()) return point(Rational());
    Interval r = *this;
    if (!r.lo_inf) r.lo = lo * q;
    if (!r.hi_inf) r.hi = hi * q;
    if (q.sign() < 0) {
        std::swap(r.lo, r.hi);
        std::swap(r.lo_inf, r.hi_inf);
        std::swap(r.lo_open, r.hi_open);
    }
    return tame(r);
}

Interval Interval::scaled(const SymReal& c) const {
    if (c.is_rational()) return scaled(c.rational_part());
    if (!is_bounded()) return whole();
    auto [a, b] = rational_enclosure(c, kGridBits);
    Rational p[4] = {a * lo, a * hi, b * lo, b * hi};
    Interval r = closed(*std::min_element(p, p + 4), *std::max_element(p, p + 4));
    return tame(r);
}

Interval Interval::floor() const {
    Interval r;
    r.lo_inf = lo_inf;
    r.hi_inf = hi_inf;
    r.lo_open = lo_inf;
    r.hi_open = hi_inf;
    if (!lo_inf) r.lo = Rational(lo.floor());
    if (!hi_inf) {
        std::int64_t f = hi.floor();
        if (hi_open && hi.is_integer()) --f;
        r.hi = Rational(f);
    }
    return r;
}

std::string Interval::str() const {
    std::string s = lo_open ? "(" : "[";
    s += lo_inf ? "-inf" : lo.str();
    s += ", ";
    s += hi_inf ? "inf" : hi.str();
    s += hi_open ? ")" : "]";
    return s;
}

} // namespace glerg
