#pragma once

#include <cstdint>
#include <vector>

#include "glerg/glf.hpp"

namespace glerg {

constexpr std::int64_t kDefaultWindow = 10000;

// A bounded GL-function whose exact values on [-window, window] were all
// checked to lie in {0,1}. The check is a sampling certificate, not a proof.
struct UglExpr {
    GlfExpr expr;
    std::int64_t window = kDefaultWindow;

    int operator()(std::int64_t n) const;
};

UglExpr certify_ugl(const GlfExpr& e, std::int64_t window = kDefaultWindow);
UglExpr ugl_constant(bool value, std::int64_t window = kDefaultWindow);

// [phi(n) >= a] as floor((phi - a)/c + 1), c = ceil(sup|phi|) + ceil(|a|) + 1
UglExpr indicator_ge(const GlfExpr& phi, const SymReal& a, std::int64_t window = kDefaultWindow);
UglExpr indicator_gt(const GlfExpr& phi, const SymReal& a, std::int64_t window = kDefaultWindow);
UglExpr indicator_le(const GlfExpr& phi, const SymReal& a, std::int64_t window = kDefaultWindow);
UglExpr indicator_lt(const GlfExpr& phi, const SymReal& a, std::int64_t window = kDefaultWindow);

UglExpr u_not(const UglExpr& p);
UglExpr u_or(const UglExpr& p, const UglExpr& q);
UglExpr u_and(const UglExpr& p, const UglExpr& q);

// [phi_i(n) in box_i for all i]
UglExpr indicator_box(const std::vector<GlfExpr>& phis, const std::vector<Interval>& box,
                      std::int64_t window = kDefaultWindow);

// indicator of the range phi(Z) of an unbounded integer-valued phi
UglExpr range_indicator(const GlfExpr& phi, std::int64_t window = kDefaultWindow);

} // namespace glerg
