#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <type_traits>
#include <vector>

#include <Eigen/Dense>

#include "glerg/errors.hpp"

namespace glerg {

// Indexed finite sets Phi_N. Forward is [1..N]; Window is [M+1..M+N] with
// M = floor(drift * N); Custom wraps a generator.
class FolnerSchedule {
public:
    enum class Kind { Forward, Window, Custom };
    using Generator = std::function<std::vector<std::int64_t>(std::int64_t)>;

    static FolnerSchedule forward();
    static FolnerSchedule window(double drift = 1.0);
    // checks |(Phi - 1) Δ Phi| / |Phi| at three indices unless told otherwise
    static FolnerSchedule custom(Generator gen, std::string name = "custom", bool check = true);
    static FolnerSchedule parse(const std::string& spec); // forward | window[:drift]

    Kind kind() const { return kind_; }
    const std::string& name() const { return name_; }
    std::int64_t size(std::int64_t N) const;
    std::vector<std::int64_t> set(std::int64_t N) const;
    // |(Phi_N - h) Δ Phi_N| / |Phi_N|
    double folner_defect(std::int64_t N, std::int64_t h) const;

    template <class F>
    void for_each(std::int64_t N, F&& f) const {
        if (kind_ == Kind::Custom) {
            for (std::int64_t n : gen_(N)) f(n);
            return;
        }
        std::int64_t lo = first(N);
        for (std::int64_t n = lo; n < lo + N; ++n) f(n);
    }

private:
    Kind kind_ = Kind::Forward;
    double drift_ = 0.0;
    Generator gen_;
    std::string name_ = "forward";

    std::int64_t first(std::int64_t N) const {
        return kind_ == Kind::Window ? static_cast<std::int64_t>(std::floor(drift_ * static_cast<double>(N))) + 1 : 1;
    }
};

inline double value_norm(double x) { return std::abs(x); }
inline double value_norm(const std::complex<double>& x) { return std::abs(x); }
template <class Derived>
double value_norm(const Eigen::MatrixBase<Derived>& x) {
    return x.norm();
}

template <class F>
auto cesaro_avg(F&& f, const FolnerSchedule& s, std::int64_t N) {
    using V = std::decay_t<decltype(f(std::int64_t{}))>;
    V acc{};
    bool first = true;
    std::int64_t count = 0;
    s.for_each(N, [&](std::int64_t n) {
        if (first) {
            acc = f(n);
            first = false;
        } else {
            acc += f(n);
        }
        ++count;
    });
    if (count == 0) throw Error(ErrorKind::InvalidArgument, "empty Folner set");
    return V(acc / static_cast<double>(count));
}

template <class P>
double density_est(P&& pred, const FolnerSchedule& s, std::int64_t N) {
    std::int64_t hit = 0, count = 0;
    s.for_each(N, [&](std::int64_t n) {
        hit += pred(n) ? 1 : 0;
        ++count;
    });
    return count ? static_cast<double>(hit) / static_cast<double>(count) : 0.0;
}

struct DlimResult {
    bool holds = false;
    double defect = 0.0; // density of {n : |f(n) - u| >= eps}
};

template <class F, class V>
DlimResult dlim_test(F&& f, const V& u, double eps, const FolnerSchedule& s, std::int64_t N,
                     double threshold = 0.01) {
    double d = density_est([&](std::int64_t n) { return value_norm(f(n) - u) >= eps; }, s, N);
    return {d < threshold, d};
}

struct VdcBound {
    double lhs = 0.0;
    double rhs = 0.0;
};

// |avg u|^2 <= (2/N) sum_h |sum_n <u_n, u_{n+h}>| + (1/N^2) sum |u_n|^2
template <class Vec>
VdcBound vdc_finitary(const std::vector<Vec>& u) {
    const std::size_t N = u.size();
    VdcBound b;
    if (N == 0) return b;
    Vec total = u[0];
    for (std::size_t n = 1; n < N; ++n) total += u[n];
    b.lhs = total.squaredNorm() / static_cast<double>(N * N);
    double cross = 0.0, diag = 0.0;
    for (std::size_t h = 1; h < N; ++h) {
        std::complex<double> s = 0.0;
        for (std::size_t n = 0; n + h < N; ++n) s += u[n].dot(u[n + h]);
        cross += std::abs(s);
    }
    for (auto& x : u) diag += x.squaredNorm();
    b.rhs = 2.0 / static_cast<double>(N) * cross + diag / static_cast<double>(N * N);
    return b;
}

struct VdcFixedD {
    double lhs = 0.0;      // |avg_{n<=N} u_n|^2
    double rhs = 0.0;      // |D|^-2 sum_{h1,h2} avg_n <u_{n+h1}, u_{n+h2}>
    double boundary = 0.0; // shift error, 2 max|h| sup|u| / N
    bool holds() const { return std::sqrt(lhs) <= std::sqrt(std::max(rhs, 0.0)) + boundary + 1e-12; }
};

template <class Vec>
VdcFixedD vdc_fixed_d(const std::function<Vec(std::int64_t)>& u, const std::vector<std::int64_t>& D, std::int64_t N) {
    VdcFixedD r;
    std::int64_t hmin = 0, hmax = 0;
    for (auto h : D) {
        hmin = std::min(hmin, h);
        hmax = std::max(hmax, h);
    }
    std::vector<Vec> vals;
    for (std::int64_t n = 1 + hmin; n <= N + hmax; ++n) vals.push_back(u(n));
    auto at = [&](std::int64_t n) -> const Vec& { return vals[n - 1 - hmin]; };
    Vec total = at(1);
    double sup = 0.0;
    for (auto& v : vals) sup = std::max(sup, value_norm(v));
    for (std::int64_t n = 2; n <= N; ++n) total += at(n);
    r.lhs = std::pow(value_norm(total) / static_cast<double>(N), 2);
    double s = 0.0;
    for (auto h1 : D)
        for (auto h2 : D) {
            std::complex<double> acc = 0.0;
            for (std::int64_t n = 1; n <= N; ++n) acc += at(n + h2).dot(at(n + h1));
            s += acc.real() / static_cast<double>(N);
        }
    r.rhs = s / static_cast<double>(D.size() * D.size());
    double hspan = static_cast<double>(std::max(std::abs(hmin), std::abs(hmax)));
    r.boundary = 2.0 * hspan * sup / static_cast<double>(N);
    return r;
}

// b[0] is b(1); N = b.size(). Sums with an empty range are 0.
double gowers_norm(const std::vector<double>& b, int k);

// (int f w) / (int w) on [a, b] by the composite trapezoid rule
double weighted_uniform_cesaro(const std::function<double(double)>& f, const std::function<double(double)>& omega,
                               double a, double b, double step);

// plain average of f(sigma(t)) over [t0, t1] against the omega-weighted
// average of f over [sigma(t0), sigma(t1)], omega = (sigma^-1)'
struct SubstitutionCheck {
    double plain = 0.0;
    double weighted = 0.0;
    double difference() const { return std::abs(plain - weighted); }
};

SubstitutionCheck substitution_check(const std::function<double(double)>& f,
                                     const std::function<double(double)>& sigma,
                                     const std::function<double(double)>& omega, double t0, double t1,
                                     double step_t, double step_s);

struct TracePoint {
    std::int64_t N = 0;
    std::complex<double> estimate;
    double error_proxy = 0.0; // |A_N - A_{N/2}|, or a reported standard error
};

// estimate at each N, with the halving difference as the error proxy
std::vector<TracePoint> convergence_trace(const std::function<std::complex<double>(std::int64_t)>& estimate,
                                          const std::vector<std::int64_t>& Ns);
std::string trace_csv(const std::vector<TracePoint>& trace);

} // namespace glerg
