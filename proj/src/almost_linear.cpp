#include <cmath>
#include <map>

#include "glerg/torus.hpp"

namespace glerg {

namespace {

// signed representative in (-1/2, 1/2]
double signed_rep(const SymReal& w) {
    double x = w.to_double();
    return x > 0.5 ? x - 1.0 : x;
}

std::vector<int> carry_of(const std::vector<SymReal>& w) {
    std::vector<int> c;
    for (auto& x : w) c.push_back(signed_rep(x) < 0 ? 1 : 0);
    return c;
}

bool small(const std::vector<SymReal>& w, double delta) {
    for (auto& x : w)
        if (std::abs(signed_rep(x)) >= delta) return false;
    return true;
}

} // namespace

bool BohrWindow::contains(const TorusRep& rep, std::int64_t h) const {
    auto w = orbit_point(rep, h);
    return small(w, delta) && carry_of(w) == carry && locate(rep, w) == piece;
}

AlmostLinearity almost_linearity_witness(const std::vector<GlfExpr>& phis, double eps,
                                         const AlmostLinearityOptions& opt) {
    std::vector<GlfExpr> bounded;
    for (auto& phi : phis) bounded.push_back(bounded_part(phi));
    AlmostLinearity out;
    out.rep = build_joint_rep(bounded);
    const TorusRep& rep = out.rep;
    const int d = rep.dim();

    // the orbit point of every candidate h, computed once
    std::vector<std::vector<SymReal>> orbit;
    if (d > 0) {
        orbit.reserve(opt.h_search + 1);
        for (std::int64_t h = 0; h <= opt.h_search; ++h) orbit.push_back(orbit_point(rep, h));
    }

    std::vector<std::vector<double>> values;
    std::int64_t span = -1;
    auto ensure_values = [&](std::int64_t upto) {
        if (upto <= span) return;
        values.assign(phis.size(), {});
        for (std::size_t i = 0; i < phis.size(); ++i) {
            values[i].resize(upto + 1);
            for (std::int64_t n = 0; n <= upto; ++n) values[i][n] = eval_float(phis[i], n);
        }
        span = upto;
    };

    for (double delta = 0.05; delta >= opt.min_delta; delta /= 2) {
        BohrWindow W;
        W.delta = d > 0 ? delta : 1.0;
        std::vector<std::int64_t> hs;
        if (d == 0) {
            for (std::int64_t h = 1; h <= opt.samples; ++h) hs.push_back(h);
        } else {
            std::map<std::pair<int, std::vector<int>>, std::vector<std::int64_t>> cells;
            for (std::int64_t h = 1; h <= opt.h_search; ++h) {
                if (!small(orbit[h], delta)) continue;
                Eigen::VectorXd wd(d);
                for (int k = 0; k < d; ++k) wd(k) = orbit[h][k].to_double();
                auto& v = cells[{locate_point(rep, wd), carry_of(orbit[h])}];
                if (v.size() < 4 * static_cast<std::size_t>(opt.samples)) v.push_back(h);
            }
            if (cells.empty()) {
                if (delta == 0.05) throw Error(ErrorKind::NoInteriorPiece, "no return of the orbit near 0");
                break;
            }
            // most populated cell near 0
            auto best = cells.begin();
            for (auto it = cells.begin(); it != cells.end(); ++it)
                if (it->second.size() > best->second.size()) best = it;
            W.piece = best->first.first;
            W.carry = best->first.second;
            for (std::int64_t h : best->second) {
                if (static_cast<int>(hs.size()) == opt.samples) break;
                if (W.contains(rep, h)) hs.push_back(h);
            }
            if (hs.empty()) continue;
        }
        if (d == 0) W.carry.clear();

        std::vector<SymReal> C;
        for (int i = 0; i < rep.outputs(); ++i) {
            SymReal c = -rep.pieces[W.piece].constant[i];
            for (int k = 0; k < d; ++k)
                if (W.carry[k]) c -= rep.slope[i][k];
            C.push_back(c);
        }

        std::int64_t hmax = 0;
        for (auto h : hs) hmax = std::max(hmax, h);
        ensure_values(opt.count_n + hmax);
        std::vector<double> Cd;
        for (auto& c : C) Cd.push_back(c.to_double());
        std::vector<double> dens;
        bool ok = true;
        for (std::int64_t h : hs) {
            std::int64_t good = 0;
            for (std::int64_t n = 0; n < opt.count_n; ++n) {
                bool all = true;
                for (std::size_t i = 0; i < phis.size() && all; ++i)
                    all = std::abs(values[i][n + h] - values[i][n] - values[i][h] - Cd[i]) < 1e-6;
                good += all;
            }
            dens.push_back(static_cast<double>(good) / static_cast<double>(opt.count_n));
            if (dens.back() <= 1.0 - eps) ok = false;
        }
        out.window = W;
        out.C = C;
        out.hs = hs;
        out.density = dens;
        out.ok = ok;
        if (ok || d == 0) return out;
    }
    if (out.hs.empty()) throw Error(ErrorKind::NoInteriorPiece, "no piece with 0 as a limit point qualified");
    return out;
}

} // namespace glerg
