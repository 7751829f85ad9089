#include "glerg/indicator.hpp"

#include <set>

namespace glerg {

int UglExpr::operator()(std::int64_t n) const { return static_cast<int>(eval_integer(expr, n)); }

UglExpr certify_ugl(const GlfExpr& e, std::int64_t window) {
    if (!is_bounded(e)) throw Error(ErrorKind::NotIntegerValued, "unbounded expression is not an indicator");
    for (std::int64_t n = -window; n <= window; ++n) {
        SymReal v = eval_exact(e, n);
        if (!(v.is_zero() || v == SymReal(1)))
            throw Error(ErrorKind::NotIntegerValued,
                        to_string(e) + " takes value " + v.str() + " at n=" + std::to_string(n));
    }
    return UglExpr{e, window};
}

UglExpr ugl_constant(bool value, std::int64_t window) {
    return UglExpr{constant(SymReal(value ? 1 : 0)), window};
}

UglExpr indicator_ge(const GlfExpr& phi, const SymReal& a, std::int64_t window) {
    if (!is_bounded(phi)) throw Error(ErrorKind::InvalidArgument, "indicator_ge needs a bounded function");
    Interval I = bound_interval(phi);
    auto [alo, ahi] = rational_enclosure(a);
    Rational amax = std::max(alo.abs(), ahi.abs());
    Rational c(I.sup_abs().ceil() + amax.ceil() + 1);
    GlfExpr e = floor_of(scale(SymReal(Rational(1) / c), phi - constant(a)) + constant(SymReal(1)));
    return certify_ugl(e, window);
}

// phi > a  <=>  not(-phi >= -a)
UglExpr indicator_gt(const GlfExpr& phi, const SymReal& a, std::int64_t window) {
    return u_not(indicator_ge(-phi, -a, window));
}

UglExpr indicator_le(const GlfExpr& phi, const SymReal& a, std::int64_t window) {
    return indicator_ge(-phi, -a, window);
}

UglExpr indicator_lt(const GlfExpr& phi, const SymReal& a, std::int64_t window) {
    return u_not(indicator_ge(phi, a, window));
}

UglExpr u_not(const UglExpr& p) {
    return UglExpr{constant(SymReal(1)) - p.expr, p.window};
}

UglExpr u_or(const UglExpr& p, const UglExpr& q) {
    return indicator_ge(p.expr + q.expr, SymReal(1), std::min(p.window, q.window));
}

UglExpr u_and(const UglExpr& p, const UglExpr& q) { return u_not(u_or(u_not(p), u_not(q))); }

UglExpr indicator_box(const std::vector<GlfExpr>& phis, const std::vector<Interval>& box, std::int64_t window) {
    if (phis.size() != box.size()) throw Error(ErrorKind::InvalidArgument, "box dimension mismatch");
    UglExpr acc = ugl_constant(true, window);
    for (std::size_t i = 0; i < phis.size(); ++i) {
        const Interval& I = box[i];
        if (I.is_empty()) return ugl_constant(false, window);
        if (!I.lo_inf) {
            SymReal lo(I.lo);
            acc = u_and(acc, I.lo_open ? indicator_gt(phis[i], lo, window) : indicator_ge(phis[i], lo, window));
        }
        if (!I.hi_inf) {
            SymReal hi(I.hi);
            acc = u_and(acc, I.hi_open ? indicator_lt(phis[i], hi, window) : indicator_le(phis[i], hi, window));
        }
    }
    return acc;
}

namespace {

std::set<std::int64_t> sample_range(const GlfExpr& psi, std::int64_t N) {
    std::set<std::int64_t> K;
    for (std::int64_t n = -N; n <= N; ++n) K.insert(eval_integer(psi, n));
    return K;
}

} // namespace

UglExpr range_indicator(const GlfExpr& phi_in, std::int64_t window) {
    GlfExpr phi = phi_in;
    SymReal a = linear_part(phi);
    if (a.is_zero()) throw Error(ErrorKind::UnboundedRequired, "range_indicator of a bounded function");
    if (!certify_integer_valued(phi, window))
        throw Error(ErrorKind::NotIntegerValued, to_string(phi) + " on [-" + std::to_string(window) + ", " +
                                                     std::to_string(window) + "]");
    if (sign(a) < 0) {
        // same range, positive slope
        phi = compose(phi, linear(SymReal(-1), SymReal()));
        a = -a;
    }
    // phi(n) = [an] + psi(n), psi integer valued and bounded
    GlfExpr psi = phi - floor_of(linear(a, SymReal()));
    auto K = sample_range(psi, window);
    if (sample_range(psi, 4 * window) != K)
        throw Error(ErrorKind::RangeEstimateUnstable, "range of " + to_string(psi));

    SymReal inv = a.inverse();
    std::int64_t imax = floor_symreal(inv) + 1;
    UglExpr acc = ugl_constant(false, window);
    for (std::int64_t j : K) {
        GlfExpr base = floor_of(linear(inv, -(SymReal(Rational(j)) * inv)));
        for (std::int64_t i = 0; i <= imax; ++i) {
            GlfExpr k = base + constant(SymReal(Rational(i)));
            GlfExpr delta = var() - compose(phi, k);
            UglExpr eq = u_and(indicator_ge(delta, SymReal(), window), indicator_le(delta, SymReal(), window));
            acc = u_or(acc, eq);
        }
    }
    return acc;
}

} // namespace glerg
