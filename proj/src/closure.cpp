#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "glerg/torus.hpp"

namespace glerg {

namespace {

constexpr int kPrimes[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31,  37,  41,  43,  47,  53,
                           59, 61, 67, 71, 73, 79, 83, 89, 97, 101, 103, 107, 109, 113, 127, 131};

double radical_inverse(std::uint64_t i, int base) {
    double f = 1.0, r = 0.0;
    while (i > 0) {
        f /= base;
        r += f * static_cast<double>(i % base);
        i /= base;
    }
    return r;
}

double frac_d(double x) { return x - std::floor(x); }

std::complex<double> e(double x) {
    double t = 2.0 * std::numbers::pi * frac_d(x);
    return {std::cos(t), std::sin(t)};
}

} // namespace

Eigen::VectorXd halton(std::uint64_t i, int K) {
    if (K > static_cast<int>(std::size(kPrimes)))
        throw Error(ErrorKind::InvalidArgument, "subtorus of dimension " + std::to_string(K) + " is too large");
    Eigen::VectorXd p(K);
    for (int k = 0; k < K; ++k) p(k) = radical_inverse(i, kPrimes[k]);
    return p;
}

ClosureGroup closure_group(const std::vector<SymReal>& u) {
    ClosureGroup Z;
    Z.u = u;
    Z.lattice = relation_lattice(u);
    std::vector<Monomial> mons;
    const IrrationalBasis* basis = nullptr;
    std::int64_t dc = 1;
    for (auto& x : u) {
        Z.r.push_back(x.rational_part());
        Z.D = checked_lcm(Z.D, x.rational_part().den());
        for (auto& [m, c] : x.terms()) {
            basis = x.basis();
            dc = checked_lcm(dc, c.den());
            if (std::find(mons.begin(), mons.end(), m) == mons.end()) mons.push_back(m);
        }
    }
    std::sort(mons.begin(), mons.end());
    const int d = static_cast<int>(u.size()), K = static_cast<int>(mons.size());
    Z.C = Eigen::MatrixXd::Zero(d, K);
    for (int k = 0; k < K; ++k) {
        Z.theta.push_back(SymReal::monomial(*basis, mons[k], Rational(1, dc)));
        for (int i = 0; i < d; ++i) Z.C(i, k) = (u[i].coeff(mons[k]) * Rational(dc)).to_double();
    }
    Z.r_d.resize(d);
    for (int i = 0; i < d; ++i) Z.r_d(i) = Z.r[i].to_double();
    return Z;
}

Eigen::VectorXd ClosureGroup::point(std::int64_t j, const Eigen::VectorXd& s) const {
    Eigen::VectorXd w(dim());
    for (int i = 0; i < dim(); ++i) {
        double base = (Rational(j % r[i].den()) * r[i]).frac().to_double();
        w(i) = frac_d(base + (subtorus_dim() ? C.row(i).dot(s) : 0.0));
    }
    return w;
}

bool ClosureGroup::satisfies_relations(const Eigen::VectorXd& w, double tol) const {
    for (std::size_t b = 0; b < lattice.basis.size(); ++b) {
        double x = 0.0;
        for (int i = 0; i < dim(); ++i) x += static_cast<double>(lattice.basis[b][i]) * w(i);
        x *= static_cast<double>(lattice.values[b].den());
        if (std::abs(x - std::nearbyint(x)) > tol) return false;
    }
    return true;
}

Estimate integrate(const ClosureGroup& Z, const std::function<std::complex<double>(const Eigen::VectorXd&)>& f,
                   const SamplerOptions& opt) {
    Estimate out;
    const int K = Z.subtorus_dim();
    if (K == 0) {
        for (std::int64_t j = 0; j < Z.D; ++j) out.value += f(Z.point(j, Eigen::VectorXd()));
        out.value /= static_cast<double>(Z.D);
        out.method = "enumeration";
        return out;
    }
    const std::int64_t n = std::max<std::int64_t>(opt.points / Z.D, 1024);
    std::mt19937_64 rng(opt.seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<std::complex<double>> est;
    for (int s = 0; s < std::max(opt.shifts, 1); ++s) {
        Eigen::VectorXd shift(K);
        for (int k = 0; k < K; ++k) shift(k) = unif(rng);
        std::complex<double> acc = 0.0;
        for (std::int64_t i = 1; i <= n; ++i) {
            Eigen::VectorXd p = halton(static_cast<std::uint64_t>(i), K) + shift;
            for (int k = 0; k < K; ++k) p(k) = frac_d(p(k));
            for (std::int64_t j = 0; j < Z.D; ++j) acc += f(Z.point(j, p));
        }
        est.push_back(acc / static_cast<double>(n * Z.D));
    }
    for (auto& x : est) out.value += x;
    out.value /= static_cast<double>(est.size());
    if (est.size() > 1) {
        double var = 0.0;
        for (auto& x : est) var += std::norm(x - out.value);
        out.std_error = std::sqrt(var / static_cast<double>(est.size() - 1) / static_cast<double>(est.size()));
    }
    out.method = "qmc";
    return out;
}

Estimate mean_value(const TorusRep& rep, const SamplerOptions& opt) {
    ClosureGroup Z = closure_group(rep);
    if (Z.subtorus_dim() == 0) {
        // periodic orbit: average over one period exactly
        SymReal s;
        for (std::int64_t n = 0; n < Z.D; ++n) s += eval_rep_exact(rep, n);
        Estimate out;
        out.value = (Rational(1, Z.D) * s).to_double();
        out.exact = true;
        out.method = "enumeration";
        return out;
    }
    return integrate(Z, [&](const Eigen::VectorXd& w) { return std::complex<double>(eval_point(rep, w)); }, opt);
}

namespace {

using Pt = Eigen::Vector2d;

std::vector<Pt> clip(const std::vector<Pt>& poly, const Eigen::Vector2d& n, double o) {
    std::vector<Pt> out;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const Pt& a = poly[i];
        const Pt& b = poly[(i + 1) % poly.size()];
        double fa = n.dot(a) + o, fb = n.dot(b) + o;
        if (fa >= 0) out.push_back(a);
        if ((fa >= 0) != (fb >= 0)) out.push_back(a + (b - a) * (fa / (fa - fb)));
    }
    return out;
}

} // namespace

double mean_value_polygonal(const TorusRep& rep) {
    const int d = rep.dim();
    if (d > 2) throw Error(ErrorKind::InvalidArgument, "polygon integration needs d <= 2");
    if (!closure_group(rep).lattice.basis.empty())
        throw Error(ErrorKind::InvalidArgument, "polygon integration needs a dense orbit");
    double total = 0.0;
    for (std::size_t p = 0; p < rep.pieces.size(); ++p) {
        double c = rep.constant_d(p, 0);
        if (d == 0) {
            total += c;
        } else if (d == 1) {
            double lo = 0.0, hi = 1.0, L = rep.slope_d(0, 0);
            for (int h : rep.pieces[p].constraints) {
                double a = rep.hs_normal(h, 0), o = rep.hs_offset(h);
                if (a > 0) lo = std::max(lo, -o / a);
                else if (a < 0) hi = std::min(hi, -o / a);
                else if (o < 0) hi = lo;
            }
            if (hi > lo) total += (hi - lo) * (c + L * (lo + hi) / 2);
        } else {
            std::vector<Pt> poly{Pt(0, 0), Pt(1, 0), Pt(1, 1), Pt(0, 1)};
            for (int h : rep.pieces[p].constraints) {
                poly = clip(poly, rep.hs_normal.row(h).transpose(), rep.hs_offset(h));
                if (poly.size() < 3) break;
            }
            if (poly.size() < 3) continue;
            double area = 0.0;
            Pt cen(0, 0);
            for (std::size_t i = 0; i < poly.size(); ++i) {
                const Pt& a = poly[i];
                const Pt& b = poly[(i + 1) % poly.size()];
                double cr = a.x() * b.y() - b.x() * a.y();
                area += cr;
                cen += (a + b) * cr;
            }
            area /= 2;
            if (std::abs(area) < 1e-300) continue;
            cen /= (6 * area);
            total += std::abs(area) * (c + rep.slope_d.row(0).dot(cen));
        }
    }
    return total;
}

Estimate char_limit(const GlfExpr& phi, const SymReal& beta, const SamplerOptions& opt) {
    Estimate out;
    out.exact = true;
    try {
        if (phi->kind == NodeKind::Linear) {
            // average of e(beta a n) e(beta b)
            SymReal ba = beta * phi->a;
            out.value = ba.is_integer() ? e((beta * phi->b).to_double()) : 0.0;
            out.method = "linear";
            return out;
        }
        if (phi->kind == NodeKind::Floor && phi->children[0]->kind == NodeKind::Linear &&
            phi->children[0]->b.is_zero() && !phi->children[0]->a.is_rational()) {
            const SymReal& alpha = phi->children[0]->a;
            auto s = split_alpha_beta(alpha, beta);
            if (s && s->m.is_integer() && s->q.is_integer()) {
                // e(beta[an]) = e((m - beta){an}) and {an} is equidistributed
                double x = (SymReal(s->m) - beta).to_double();
                out.value = std::abs(x) < 1e-15 ? std::complex<double>(1.0)
                                                 : (e(x) - 1.0) / std::complex<double>(0.0, 2.0 * std::numbers::pi * x);
                out.method = "alfbet:in";
            } else {
                out.value = 0.0;
                out.method = "alfbet:out";
            }
            return out;
        }
    } catch (const Error& err) {
        if (err.kind() != ErrorKind::UnsupportedProduct) throw;
    }
    TorusRep rep = build_rep(frac_of(scale(beta, phi)));
    ClosureGroup Z = closure_group(rep);
    if (Z.subtorus_dim() == 0) {
        out.value = 0.0;
        for (std::int64_t n = 0; n < Z.D; ++n) out.value += e(eval_rep_exact(rep, n).to_double());
        out.value /= static_cast<double>(Z.D);
        out.method = "enumeration";
        return out;
    }
    out = integrate(Z, [&](const Eigen::VectorXd& w) { return e(eval_point(rep, w)); }, opt);
    return out;
}

} // namespace glerg
