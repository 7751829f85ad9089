#pragma once

#include <string>

#include "glerg/number_field.hpp"

namespace glerg {

// Extended-real interval with rational endpoints and per-side openness.
struct Interval {
    Rational lo, hi;
    bool lo_inf = false, hi_inf = false;
    bool lo_open = false, hi_open = false;

    static Interval point(const Rational& x) { return Interval{x, x}; }
    static Interval closed(const Rational& a, const Rational& b) { return Interval{a, b}; }
    static Interval half_open(const Rational& a, const Rational& b) {
        Interval r{a, b};
        r.hi_open = true;
        return r;
    }
    static Interval whole() {
        Interval r;
        r.lo_inf = r.hi_inf = true;
        r.lo_open = r.hi_open = true;
        return r;
    }
    // rational enclosure of an exact real
    static Interval around(const SymReal& x);

    bool is_bounded() const { return !lo_inf && !hi_inf; }
    bool is_empty() const;

    bool contains(const Rational& x) const;
    bool contains(const SymReal& x) const;

    // max |t| over the interval (throws when unbounded)
    Rational sup_abs() const;

    Interval operator+(const Interval& o) const;
    Interval operator-() const;
    Interval scaled(const Rational& q) const;
    Interval scaled(const SymReal& c) const;
    Interval floor() const;

    std::string str() const;
};

} // namespace glerg
