#include <cmath>
#include <numbers>

#include "glerg/torus.hpp"

namespace glerg {

namespace {

std::complex<double> e(double x) {
    double t = 2.0 * std::numbers::pi * (x - std::floor(x));
    return {std::cos(t), std::sin(t)};
}

struct Sample {
    std::int64_t j;
    Eigen::VectorXd s;
    double F;
};

} // namespace

std::complex<double> TrigPolynomial::operator()(std::int64_t n) const {
    std::complex<double> v = 0.0;
    for (const TrigTerm& t : terms) {
        double x = static_cast<double>(n) * t.freq_d;
        v += t.coeff * e(x);
    }
    return v;
}

TrigPolynomial besicovitch_approx(const GlfExpr& phi, double eps, const BesicovitchOptions& opt) {
    TorusRep rep = build_rep(phi);
    ClosureGroup Z = closure_group(rep);
    const int K = Z.subtorus_dim();

    std::vector<Sample> samples;
    if (K == 0) {
        for (std::int64_t j = 0; j < Z.D; ++j) samples.push_back({j, Eigen::VectorXd(), eval_rep(rep, j)});
    } else {
        for (int i = 1; i <= opt.sample_points; ++i) {
            Eigen::VectorXd s = halton(static_cast<std::uint64_t>(i), K);
            for (std::int64_t j = 0; j < Z.D; ++j) samples.push_back({j, s, eval_point(rep, Z.point(j, s))});
        }
    }

    std::vector<double> target(opt.check_n);
    for (std::int64_t n = 0; n < opt.check_n; ++n) target[n] = eval_float(phi, n);

    std::vector<double> theta_d(K);
    for (int k = 0; k < K; ++k) theta_d[k] = Z.theta[k].to_double();

    for (int cutoff = 0;; cutoff = cutoff ? 2 * cutoff : 1) {
        std::size_t count = static_cast<std::size_t>(Z.D);
        for (int k = 0; k < K; ++k) count *= static_cast<std::size_t>(2 * cutoff + 1);
        if (count > opt.max_terms)
            throw Error(ErrorKind::CutoffExceeded, "eps=" + std::to_string(eps) + " not reached within " +
                                                       std::to_string(opt.max_terms) + " characters");
        TrigPolynomial q;
        q.cutoff = cutoff;
        // odometer over a in Z/D and m in [-cutoff, cutoff]^K
        std::vector<int> m(K, -cutoff);
        for (std::size_t idx = 0; idx < count; ++idx) {
            std::int64_t a = static_cast<std::int64_t>(idx % static_cast<std::size_t>(Z.D));
            std::size_t rest = idx / static_cast<std::size_t>(Z.D);
            for (int k = 0; k < K; ++k) {
                m[k] = static_cast<int>(rest % (2 * cutoff + 1)) - cutoff;
                rest /= (2 * cutoff + 1);
            }
            std::complex<double> c = 0.0;
            for (const Sample& sm : samples) {
                double x = static_cast<double>(a * sm.j % Z.D) / static_cast<double>(Z.D);
                for (int k = 0; k < K; ++k) x += m[k] * sm.s(k);
                c += sm.F * std::conj(e(x));
            }
            c /= static_cast<double>(samples.size());
            if (std::abs(c) < 1e-12) continue;
            SymReal freq(Rational(a, Z.D));
            double fd = static_cast<double>(a) / static_cast<double>(Z.D);
            for (int k = 0; k < K; ++k) {
                if (m[k] == 0) continue;
                freq += Rational(m[k]) * Z.theta[k];
                fd += m[k] * theta_d[k];
            }
            q.terms.push_back({c, freq, fd - std::floor(fd)});
        }
        double err = 0.0;
        for (std::int64_t n = 0; n < opt.check_n; ++n) err += std::abs(target[n] - q(n).real());
        q.l1_error = err / static_cast<double>(opt.check_n);
        if (q.l1_error < eps) return q;
        if (K == 0)
            throw Error(ErrorKind::CutoffExceeded, "finite orbit interpolation misses eps=" + std::to_string(eps));
    }
}

} // namespace glerg
