#include "glerg/torus.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "glerg/lp.hpp"

namespace glerg {

namespace {

constexpr double kLevelTol = 1e-9;
constexpr double kInteriorTol = 1e-10;

struct PPiece {
    std::vector<int> cons;
    SymReal c;
};

// e(n) = A n + L·w + c on each piece
struct Partial {
    SymReal A;
    std::vector<SymReal> L;
    std::vector<PPiece> pieces;
};

std::vector<SymReal> padded(std::vector<SymReal> v, std::size_t d) {
    v.resize(std::max(v.size(), d));
    return v;
}

bool all_zero(const std::vector<SymReal>& v) {
    return std::all_of(v.begin(), v.end(), [](const SymReal& x) { return x.is_zero(); });
}

std::vector<int> merged(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> out;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

class Builder {
public:
    explicit Builder(const RepOptions& opt) : opt_(opt) {}

    std::vector<SymReal> u;
    std::vector<HalfSpace> hs;

    Partial build(const GlfExpr& e) {
        switch (e->kind) {
        case NodeKind::Linear:
            return Partial{e->a, {}, {PPiece{{}, e->b}}};
        case NodeKind::Sum: {
            Partial acc = build(e->children[0]);
            for (std::size_t i = 1; i < e->children.size(); ++i) {
                Partial next = build(e->children[i]);
                acc = add(acc, next);
            }
            return acc;
        }
        case NodeKind::Scale: {
            Partial p = build(e->children[0]);
            p.A = e->a * p.A;
            for (auto& x : p.L) x = e->a * x;
            for (auto& q : p.pieces) q.c = e->a * q.c;
            return p;
        }
        case NodeKind::Floor:
            return split(build(e->children[0]), false);
        case NodeKind::Frac:
            return split(build(e->children[0]), true);
        }
        return {};
    }

    // common refinement; `join` combines the two piece constants
    template <class Join>
    std::vector<std::pair<std::vector<int>, std::pair<int, int>>> refine(const std::vector<std::vector<int>>& a,
                                                                         const std::vector<std::vector<int>>& b,
                                                                         Join&&) {
        std::vector<std::pair<std::vector<int>, std::pair<int, int>>> out;
        for (std::size_t i = 0; i < a.size(); ++i)
            for (std::size_t j = 0; j < b.size(); ++j) {
                std::vector<int> cons = merged(a[i], b[j]);
                bool trivial = a[i].empty() || b[j].empty() || cons.size() == a[i].size() || cons.size() == b[j].size();
                if (!trivial && !viable(cons)) continue;
                out.push_back({std::move(cons), {static_cast<int>(i), static_cast<int>(j)}});
                check_cap(out.size());
            }
        return out;
    }

    Partial add(const Partial& a, const Partial& b) {
        Partial r;
        r.A = a.A + b.A;
        std::size_t d = std::max(a.L.size(), b.L.size());
        auto la = padded(a.L, d), lb = padded(b.L, d);
        r.L.resize(d);
        for (std::size_t k = 0; k < d; ++k) r.L[k] = la[k] + lb[k];
        std::vector<std::vector<int>> ca, cb;
        for (auto& p : a.pieces) ca.push_back(p.cons);
        for (auto& p : b.pieces) cb.push_back(p.cons);
        for (auto& [cons, ij] : refine(ca, cb, 0)) r.pieces.push_back(PPiece{cons, a.pieces[ij.first].c + b.pieces[ij.second].c});
        return r;
    }

    bool viable(const std::vector<int>& cons) {
        // maximise the slack t of strict constraints and of the open upper faces
        const int d = static_cast<int>(u.size());
        const int m = static_cast<int>(cons.size());
        Eigen::MatrixXd N = Eigen::MatrixXd::Zero(m + d, d + 1);
        Eigen::VectorXd off(m + d), obj = Eigen::VectorXd::Zero(d + 1);
        for (int i = 0; i < m; ++i) {
            const HalfSpace& h = hs[cons[i]];
            for (std::size_t k = 0; k < h.normal.size(); ++k) N(i, k) = h.normal[k].to_double();
            if (h.strict) N(i, d) = -1.0;
            off(i) = h.offset.to_double();
        }
        for (int k = 0; k < d; ++k) {
            N(m + k, k) = -1.0;
            N(m + k, d) = -1.0;
            off(m + k) = 1.0;
        }
        obj(d) = 1.0;
        lp::Result r = lp::maximize(N, off, obj, 1e-12);
        return r.feasible && r.value > kInteriorTol;
    }

    std::pair<double, double> range(const std::vector<int>& cons, const std::vector<SymReal>& L) {
        const int d = static_cast<int>(u.size());
        Eigen::MatrixXd N = Eigen::MatrixXd::Zero(cons.size(), d);
        Eigen::VectorXd off(cons.size()), obj(d);
        for (std::size_t i = 0; i < cons.size(); ++i) {
            const HalfSpace& h = hs[cons[i]];
            for (std::size_t k = 0; k < h.normal.size(); ++k) N(i, k) = h.normal[k].to_double();
            off(i) = h.offset.to_double();
        }
        for (int k = 0; k < d; ++k) obj(k) = k < static_cast<int>(L.size()) ? L[k].to_double() : 0.0;
        lp::Result hi = lp::maximize(N, off, obj, 1e-9);
        lp::Result lo = lp::maximize(N, off, -obj, 1e-9);
        if (!hi.feasible || !lo.feasible) return {1.0, 0.0};
        return {-lo.value, hi.value};
    }

    int coordinate(const SymReal& A) {
        SymReal a = A - SymReal(Rational(floor_symreal(A)));
        for (std::size_t i = 0; i < u.size(); ++i)
            if (u[i] == a) return static_cast<int>(i);
        u.push_back(a);
        return static_cast<int>(u.size()) - 1;
    }

    int halfspace(std::vector<SymReal> normal, SymReal offset, bool strict) {
        while (!normal.empty() && normal.back().is_zero()) normal.pop_back();
        std::string key = strict ? ">" : ">=";
        for (auto& x : normal) key += x.str() + ",";
        key += "|" + offset.str();
        auto [it, fresh] = index_.try_emplace(key, static_cast<int>(hs.size()));
        if (fresh) hs.push_back(HalfSpace{std::move(normal), std::move(offset), strict});
        return it->second;
    }

    // frac (want_frac) or floor of a partial, splitting pieces at integer levels
    Partial split(const Partial& f, bool want_frac) {
        int j = f.A.is_integer() ? -1 : coordinate(f.A);
        std::vector<SymReal> G = padded(f.L, u.size());
        if (j >= 0) G[j] += SymReal(1);
        Partial r;
        if (want_frac) {
            r.L = G;
        } else {
            r.A = f.A;
            r.L.assign(u.size(), SymReal());
            if (j >= 0) r.L[j] = SymReal(-1);
        }
        auto emit = [&](std::vector<int> cons, const SymReal& c, std::int64_t k) {
            SymReal kk{Rational(k)};
            r.pieces.push_back(PPiece{std::move(cons), want_frac ? c - kk : kk});
            check_cap(r.pieces.size());
        };
        bool flat = all_zero(G);
        for (const PPiece& p : f.pieces) {
            if (flat) {
                emit(p.cons, p.c, floor_symreal(p.c));
                continue;
            }
            auto [lo, hi] = range(p.cons, G);
            if (lo > hi) continue;
            double cd = p.c.to_double();
            lo += cd;
            hi += cd;
            auto klo = static_cast<std::int64_t>(std::floor(lo - kLevelTol));
            auto khi = static_cast<std::int64_t>(std::floor(hi + kLevelTol));
            if (klo == khi && lo - klo > kLevelTol && klo + 1 - hi > kLevelTol) {
                emit(p.cons, p.c, klo);
                continue;
            }
            std::vector<SymReal> neg(G.size());
            for (std::size_t k = 0; k < G.size(); ++k) neg[k] = -G[k];
            for (std::int64_t k = klo; k <= khi; ++k) {
                SymReal kk{Rational(k)};
                int ge = halfspace(G, p.c - kk, false);
                int lt = halfspace(neg, kk + SymReal(1) - p.c, true);
                std::vector<int> cons = merged(p.cons, ge < lt ? std::vector<int>{ge, lt} : std::vector<int>{lt, ge});
                if (!viable(cons)) continue;
                emit(std::move(cons), p.c, k);
            }
        }
        return r;
    }

    void check_cap(std::size_t n) const {
        if (n > opt_.max_pieces)
            throw Error(ErrorKind::PieceExplosion, "more than " + std::to_string(opt_.max_pieces) + " pieces");
    }

    TorusRep finish(const std::vector<Partial>& parts) {
        TorusRep rep;
        const std::size_t d = u.size();
        rep.u = u;
        // common refinement across outputs
        std::vector<std::vector<int>> cons{{}};
        std::vector<std::vector<SymReal>> consts{{}};
        for (const Partial& p : parts) {
            std::vector<std::vector<int>> cb;
            for (auto& q : p.pieces) cb.push_back(q.cons);
            std::vector<std::vector<int>> ncons;
            std::vector<std::vector<SymReal>> nconsts;
            for (auto& [c, ij] : refine(cons, cb, 0)) {
                ncons.push_back(c);
                auto v = consts[ij.first];
                v.push_back(p.pieces[ij.second].c);
                nconsts.push_back(std::move(v));
            }
            cons = std::move(ncons);
            consts = std::move(nconsts);
            rep.slope.push_back(padded(p.L, d));
        }
        // keep only used half-spaces
        std::map<int, int> remap;
        for (auto& c : cons)
            for (int i : c)
                if (!remap.count(i)) {
                    int k = static_cast<int>(rep.halfspaces.size());
                    remap[i] = k;
                    HalfSpace h = hs[i];
                    h.normal = padded(h.normal, d);
                    rep.halfspaces.push_back(std::move(h));
                }
        for (std::size_t i = 0; i < cons.size(); ++i) {
            Piece pc;
            for (int c : cons[i]) pc.constraints.push_back(remap[c]);
            std::sort(pc.constraints.begin(), pc.constraints.end());
            pc.constant = consts[i];
            rep.pieces.push_back(std::move(pc));
        }
        const int m = static_cast<int>(rep.halfspaces.size());
        rep.hs_normal.resize(m, d);
        rep.hs_offset.resize(m);
        for (int i = 0; i < m; ++i) {
            for (std::size_t k = 0; k < d; ++k) rep.hs_normal(i, k) = rep.halfspaces[i].normal[k].to_double();
            rep.hs_offset(i) = rep.halfspaces[i].offset.to_double();
        }
        rep.slope_d.resize(rep.slope.size(), d);
        for (std::size_t o = 0; o < rep.slope.size(); ++o)
            for (std::size_t k = 0; k < d; ++k) rep.slope_d(o, k) = rep.slope[o][k].to_double();
        rep.u_d.resize(d);
        for (std::size_t k = 0; k < d; ++k) rep.u_d(k) = u[k].to_double();
        rep.constant_d.resize(rep.pieces.size(), rep.slope.size());
        for (std::size_t i = 0; i < rep.pieces.size(); ++i)
            for (std::size_t o = 0; o < rep.slope.size(); ++o) rep.constant_d(i, o) = rep.pieces[i].constant[o].to_double();
        return rep;
    }

private:
    RepOptions opt_;
    std::map<std::string, int> index_;
};

} // namespace

Polygon TorusRep::polygon(int piece) const {
    Polygon p;
    for (int c : pieces.at(piece).constraints) p.constraints.push_back(halfspaces[c]);
    return p;
}

TorusRep build_joint_rep(const std::vector<GlfExpr>& phis, const RepOptions& opt) {
    Builder b(opt);
    std::vector<Partial> parts;
    for (auto& phi : phis) {
        if (!is_bounded(phi)) throw Error(ErrorKind::InvalidArgument, "torus rep of unbounded " + to_string(phi));
        parts.push_back(b.build(phi));
        if (!parts.back().A.is_zero())
            throw Error(ErrorKind::InvalidArgument, "nonzero slope left in " + to_string(phi));
    }
    return b.finish(parts);
}

TorusRep build_rep(const GlfExpr& phi, const RepOptions& opt) { return build_joint_rep({phi}, opt); }

std::vector<SymReal> orbit_point(const TorusRep& rep, std::int64_t n) {
    std::vector<SymReal> w;
    w.reserve(rep.u.size());
    for (auto& x : rep.u) w.push_back(frac_symreal(Rational(n) * x));
    return w;
}

namespace {

bool holds(const HalfSpace& h, const std::vector<SymReal>& w) {
    SymReal v = h.offset;
    for (std::size_t k = 0; k < w.size(); ++k)
        if (!h.normal[k].is_zero() && !w[k].is_zero()) v += h.normal[k] * w[k];
    int s = sign(v);
    return h.strict ? s > 0 : s >= 0;
}

Eigen::VectorXd to_eigen(const std::vector<SymReal>& w) {
    Eigen::VectorXd v(w.size());
    for (std::size_t k = 0; k < w.size(); ++k) v(k) = w[k].to_double();
    return v;
}

struct ExactTester {
    const TorusRep& rep;
    const std::vector<SymReal>& w;
    std::vector<signed char> known;

    ExactTester(const TorusRep& r, const std::vector<SymReal>& p) : rep(r), w(p), known(r.halfspaces.size(), -1) {}

    bool in(int piece) {
        for (int c : rep.pieces[piece].constraints) {
            if (known[c] < 0) known[c] = holds(rep.halfspaces[c], w) ? 1 : 0;
            if (!known[c]) return false;
        }
        return true;
    }
};

} // namespace

std::vector<int> locate_all(const TorusRep& rep, const std::vector<SymReal>& w) {
    ExactTester t(rep, w);
    std::vector<int> out;
    for (int i = 0; i < static_cast<int>(rep.pieces.size()); ++i)
        if (t.in(i)) out.push_back(i);
    return out;
}

int locate(const TorusRep& rep, const std::vector<SymReal>& w) {
    ExactTester t(rep, w);
    const int P = static_cast<int>(rep.pieces.size());
    Eigen::VectorXd hv = rep.hs_normal * to_eigen(w) + rep.hs_offset;
    std::vector<char> tried(P, 0);
    for (int i = 0; i < P; ++i) {
        bool plausible = true;
        for (int c : rep.pieces[i].constraints)
            if (hv(c) < -1e-7) {
                plausible = false;
                break;
            }
        if (!plausible) continue;
        tried[i] = 1;
        if (t.in(i)) return i;
    }
    for (int i = 0; i < P; ++i)
        if (!tried[i] && t.in(i)) return i;
    std::string s;
    for (auto& x : w) s += x.str() + " ";
    throw Error(ErrorKind::PointOnNoPiece, "no piece contains (" + s + ")");
}

SymReal eval_rep_exact(const TorusRep& rep, std::int64_t n, int output) {
    auto w = orbit_point(rep, n);
    const Piece& p = rep.pieces[locate(rep, w)];
    SymReal v = p.constant.at(output);
    const auto& L = rep.slope.at(output);
    for (std::size_t k = 0; k < w.size(); ++k)
        if (!L[k].is_zero()) v += L[k] * w[k];
    return v;
}

double eval_rep(const TorusRep& rep, std::int64_t n, int output) { return eval_rep_exact(rep, n, output).to_double(); }

int locate_point(const TorusRep& rep, const Eigen::VectorXd& w) {
    Eigen::VectorXd hv = rep.hs_normal * w + rep.hs_offset;
    int best = -1;
    double best_slack = -1e300;
    for (int i = 0; i < static_cast<int>(rep.pieces.size()); ++i) {
        double slack = 1e300;
        for (int c : rep.pieces[i].constraints) slack = std::min(slack, hv(c) - (rep.halfspaces[c].strict ? 1e-15 : 0.0));
        if (slack >= 0) return i;
        if (slack > best_slack) {
            best_slack = slack;
            best = i;
        }
    }
    return best;
}

double eval_point(const TorusRep& rep, const Eigen::VectorXd& w, int output) {
    int p = locate_point(rep, w);
    return rep.slope_d.row(output).dot(w) + rep.constant_d(p, output);
}

nlohmann::json rep_to_json(const TorusRep& rep) {
    using nlohmann::json;
    auto strs = [](const std::vector<SymReal>& v) {
        json a = json::array();
        for (auto& x : v) a.push_back(x.str());
        return a;
    };
    json j;
    j["dim"] = rep.dim();
    j["u"] = json::array();
    for (auto& x : rep.u) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.17g", x.to_double());
        j["u"].push_back({{"value", buf}, {"symbolic", x.str()}});
    }
    j["slope"] = json::array();
    for (auto& L : rep.slope) j["slope"].push_back(strs(L));
    j["pieces"] = json::array();
    for (auto& p : rep.pieces) {
        json pc;
        pc["constraints"] = json::array();
        for (int c : p.constraints) {
            const HalfSpace& h = rep.halfspaces[c];
            pc["constraints"].push_back({{"normal", strs(h.normal)}, {"offset", h.offset.str()}, {"strict", h.strict}});
        }
        pc["constant"] = strs(p.constant);
        j["pieces"].push_back(std::move(pc));
    }
    return j;
}

} // namespace glerg
