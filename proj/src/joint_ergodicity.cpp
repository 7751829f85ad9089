#include "glerg/joint_ergodicity.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <set>

namespace glerg {

const char* decision_name(Decision d) {
    switch (d) {
    case Decision::Ergodic: return "Ergodic";
    case Decision::NotErgodic: return "NotErgodic";
    case Decision::JointlyErgodic: return "JointlyErgodic";
    case Decision::NotJointlyErgodic: return "NotJointlyErgodic";
    case Decision::Inconclusive: return "Inconclusive";
    }
    return "?";
}

const char* classification_name(Classification c) {
    switch (c) {
    case Classification::Pass: return "pass";
    case Classification::Fail: return "fail";
    case Classification::Gray: return "gray";
    }
    return "?";
}

namespace {

std::vector<int> offsets(const SystemSpec& sys) {
    std::vector<int> off;
    int at = 0;
    for (auto& b : sys.blocks) {
        off.push_back(at);
        at += b.dim;
    }
    return off;
}

std::int64_t pmod(std::int64_t x, std::int64_t m) {
    std::int64_t r = x % m;
    return r < 0 ? r + m : r;
}

SymReal block_frequency(const SystemBlock& B, int handle, const std::int64_t* k) {
    if (B.kind == SystemKind::CyclicShift) return SymReal(Rational(pmod(k[0] * B.shift[handle], B.modulus), B.modulus));
    SymReal s;
    for (int j = 0; j < B.dim; ++j)
        if (k[j]) s += Rational(k[j]) * B.alpha[handle][j];
    return frac_symreal(s);
}

// nonzero k and m <= 12 with (A^T)^m k = k, for a non-ergodic automorphism
std::pair<std::vector<std::int64_t>, int> finite_orbit(const Mat2& A) {
    for (int m = 1; m <= 12; ++m) {
        auto P = transpose_power(A, m);
        mpz_class a = P[0] - 1, b = P[1], c = P[2], d = P[3] - 1;
        if (a * d - b * c != 0) continue;
        mpz_class x = 1, y = 0;
        if (a != 0 || b != 0) {
            x = b;
            y = -a;
        } else if (c != 0 || d != 0) {
            x = d;
            y = -c;
        }
        mpz_class g = gcd(x, y);
        x /= g;
        y /= g;
        return {{x.get_si(), y.get_si()}, m};
    }
    throw Error(ErrorKind::InvalidArgument, "automorphism is ergodic");
}

struct Tally {
    const CheckOptions& opt;
    Verdict& v;

    // returns true when the limit is certified or estimated nonzero
    bool record(const Estimate& est, Witness w) {
        ++v.tested;
        double a = std::abs(est.value);
        w.value = a;
        w.exact = est.exact;
        w.method = est.method;
        if (est.exact) {
            if (a < 1e-12) return false;
        } else if (a < opt.eps_zero) {
            return false;
        } else if (a <= opt.eps_nonzero) {
            ++v.gray;
            return false;
        }
        v.witnesses.push_back(std::move(w));
        return true;
    }
};

Decision fold(Verdict& v, bool joint) {
    std::stable_sort(v.witnesses.begin(), v.witnesses.end(),
                     [](const Witness& a, const Witness& b) { return a.value > b.value; });
    if (!v.witnesses.empty()) return joint ? Decision::NotJointlyErgodic : Decision::NotErgodic;
    if (v.gray) return Decision::Inconclusive;
    return joint ? Decision::JointlyErgodic : Decision::Ergodic;
}

std::vector<std::int64_t> unit_on(const SystemSpec& sys, int block, const std::vector<std::int64_t>& local) {
    std::vector<std::int64_t> k(sys.coords(), 0);
    auto off = offsets(sys);
    for (std::size_t j = 0; j < local.size(); ++j) k[off[block] + j] = local[j];
    return k;
}

} // namespace

Verdict check_sequence(const SystemSpec& sys, const GlSeq& seq, const CheckOptions& opt) {
    Verdict v;
    v.label = seq.str();
    Tally tally{opt, v};
    GlSeq s = merged(seq);
    auto off = offsets(sys);

    struct Active {
        HandleRef ref;
        GlfExpr e;
    };
    std::vector<std::vector<Active>> by_block(sys.blocks.size());
    for (auto& [h, e] : s.factors) {
        auto ref = sys.find(h);
        by_block[ref.block].push_back({ref, e});
    }

    // automorphism blocks: nonzero frequencies escape iff A is hyperbolic and
    // the exponent is unbounded, otherwise some orbit is finite
    for (std::size_t b = 0; b < sys.blocks.size(); ++b) {
        auto& B = sys.blocks[b];
        if (B.kind != SystemKind::ToralAutomorphism) continue;
        auto& act = by_block[b];
        Witness w;
        w.where = B.name;
        w.exact = true;
        if (act.empty()) {
            w.k = unit_on(sys, static_cast<int>(b), {1, 0});
            w.value = 1.0;
            w.method = "invariant";
        } else if (act.size() > 1) {
            throw Error(ErrorKind::InvalidArgument, "more than one automorphism handle of " + B.name + " in " + v.label);
        } else if (auto& A = B.matrix[act[0].ref.index]; !automorphism_ergodic(A)) {
            auto [k, m] = finite_orbit(A);
            w.k = unit_on(sys, static_cast<int>(b), k);
            w.value = 1.0 / std::sqrt(static_cast<double>(m));
            w.method = "finite-orbit";
        } else if (linear_part(act[0].e).is_zero()) {
            Interval I = bound_interval(act[0].e);
            double count = static_cast<double>(I.hi.floor() - I.lo.ceil() + 1);
            w.k = unit_on(sys, static_cast<int>(b), {1, 0});
            w.value = 1.0 / std::sqrt(std::max(count, 1.0));
            w.method = "bounded-exponent";
        } else {
            continue;
        }
        w.frequency = "automorphism";
        ++v.tested;
        v.witnesses.push_back(std::move(w));
    }

    // rotation and cyclic coordinates
    struct Coord {
        int block, lo, hi;
    };
    std::vector<Coord> coords;
    double total = 1.0;
    for (std::size_t b = 0; b < sys.blocks.size(); ++b) {
        auto& B = sys.blocks[b];
        if (B.kind == SystemKind::ToralAutomorphism) continue;
        for (int j = 0; j < B.dim; ++j) {
            Coord c{static_cast<int>(b), -opt.freq_cutoff, opt.freq_cutoff};
            if (B.kind == SystemKind::CyclicShift) c = {static_cast<int>(b), 0, static_cast<int>(B.modulus - 1)};
            coords.push_back(c);
            total *= c.hi - c.lo + 1;
        }
    }
    if (total > static_cast<double>(opt.max_frequencies))
        throw Error(ErrorKind::ComplexityRefusal, std::to_string(total) + " frequencies for " + v.label);

    std::map<std::string, Estimate> cache;
    std::vector<int> cur(coords.size());
    for (std::size_t i = 0; i < coords.size(); ++i) cur[i] = coords[i].lo;
    std::vector<std::int64_t> k(sys.coords(), 0);
    auto flat = [&](const std::vector<int>& c) {
        std::vector<std::int64_t> r(sys.coords(), 0);
        std::size_t at = 0;
        for (std::size_t b = 0; b < sys.blocks.size(); ++b) {
            if (sys.blocks[b].kind == SystemKind::ToralAutomorphism) continue;
            for (int j = 0; j < sys.blocks[b].dim; ++j) r[off[b] + j] = c[at++];
        }
        return r;
    };
    while (!coords.empty()) {
        k = flat(cur);
        std::vector<std::int64_t> neg(k.size());
        bool nonzero = false;
        for (std::size_t b = 0; b < sys.blocks.size(); ++b)
            for (int j = 0; j < sys.blocks[b].dim; ++j) {
                auto x = k[off[b] + j];
                nonzero = nonzero || x != 0;
                neg[off[b] + j] = sys.blocks[b].kind == SystemKind::CyclicShift ? pmod(-x, sys.blocks[b].modulus) : -x;
            }
        // the conjugate character has the conjugate limit
        if (nonzero && !(k < neg)) {
            std::vector<std::pair<GlfExpr, SymReal>> groups;
            for (std::size_t b = 0; b < sys.blocks.size(); ++b)
                for (auto& a : by_block[b]) {
                    if (sys.blocks[b].kind == SystemKind::ToralAutomorphism) continue;
                    SymReal beta = block_frequency(sys.blocks[b], a.ref.index, k.data() + off[b]);
                    if (beta.is_zero()) continue;
                    bool found = false;
                    for (auto& [e, bsum] : groups)
                        if (structurally_equal(e, a.e)) {
                            bsum = frac_symreal(bsum + beta);
                            found = true;
                        }
                    if (!found) groups.emplace_back(a.e, beta);
                }
            std::erase_if(groups, [](auto& g) { return g.second.is_zero(); });

            Witness w;
            w.where = v.label;
            w.k = k;
            Estimate est;
            try {
                if (groups.empty()) {
                    est.value = 1.0;
                    est.exact = true;
                    est.method = "invariant";
                    w.frequency = "0";
                } else if (groups.size() == 1) {
                    w.frequency = groups[0].second.str() + " on " + to_string(groups[0].first);
                    auto key = groups[0].first->key + "|" + groups[0].second.str();
                    auto it = cache.find(key);
                    if (it == cache.end()) it = cache.emplace(key, char_limit(groups[0].first, groups[0].second, opt.sampler)).first;
                    est = it->second;
                } else {
                    std::vector<GlfExpr> terms;
                    for (auto& [e, b] : groups) terms.push_back(scale(b, e));
                    GlfExpr psi = sum(terms);
                    w.frequency = "1 on " + to_string(psi);
                    auto it = cache.find(psi->key);
                    if (it == cache.end()) it = cache.emplace(psi->key, char_limit(psi, SymReal(1), opt.sampler)).first;
                    est = it->second;
                }
                tally.record(est, std::move(w));
            } catch (const Error&) {
                // a limit we cannot evaluate is neither zero nor a witness
                ++v.tested;
                ++v.gray;
            }
        }
        std::size_t i = 0;
        while (i < coords.size() && cur[i] == coords[i].hi) {
            cur[i] = coords[i].lo;
            ++i;
        }
        if (i == coords.size()) break;
        ++cur[i];
    }
    v.decision = fold(v, false);
    return v;
}

Verdict check_single(const SystemSpec& sys, const GlSeq& seq, const CheckOptions& opt) {
    GlSeq s = merged(seq);
    if (s.factors.size() != 1)
        throw Error(ErrorKind::InvalidArgument, "check_single needs one handle, got " + seq.str());
    auto& [h, phi] = s.factors[0];
    if (linear_part(phi).is_zero())
        throw Error(ErrorKind::UnboundedRequired, "exponent " + to_string(phi) + " is bounded");
    auto ref = sys.find(h);
    auto& B = sys.blocks[ref.block];

    Verdict v;
    v.label = seq.str();
    Witness w;
    w.where = "base " + h;
    w.exact = true;
    w.value = 1.0;
    w.method = "invariant";
    bool base_ok = true;
    switch (B.kind) {
    case SystemKind::TorusRotation: {
        auto rel = relation_lattice(B.alpha[ref.index]);
        if (!rel.basis.empty()) {
            std::vector<std::int64_t> local;
            for (auto x : rel.basis[0]) local.push_back(x * rel.values[0].den());
            w.k = unit_on(sys, ref.block, local);
            base_ok = false;
        }
        break;
    }
    case SystemKind::CyclicShift: {
        std::int64_t g = std::gcd(B.shift[ref.index], B.modulus);
        if (g != 1) {
            w.k = unit_on(sys, ref.block, {B.modulus / g});
            base_ok = false;
        }
        break;
    }
    case SystemKind::ToralAutomorphism:
        if (!automorphism_ergodic(B.matrix[ref.index])) {
            auto [k, m] = finite_orbit(B.matrix[ref.index]);
            w.k = unit_on(sys, ref.block, k);
            w.value = 1.0 / std::sqrt(static_cast<double>(m));
            w.method = "finite-orbit";
            base_ok = false;
        }
        break;
    }
    if (!base_ok) {
        w.frequency = "invariant character";
        v.witnesses.push_back(w);
    }
    Verdict sub = check_sequence(sys, seq, opt);
    v.tested = sub.tested;
    v.gray = sub.gray;
    for (auto& x : sub.witnesses) v.witnesses.push_back(x);
    v.sub.push_back(std::move(sub));
    v.decision = fold(v, false);
    return v;
}

Verdict check_joint(const SystemSpec& sys, const std::vector<GlSeq>& seqs, const CheckOptions& opt) {
    Verdict v;
    for (std::size_t i = 0; i < seqs.size(); ++i) v.label += (i ? ", " : "") + seqs[i].str();
    v.label = "(" + v.label + ")";
    const std::size_t k = seqs.size();
    auto absorb = [&](Verdict sub, const std::function<std::vector<std::vector<std::int64_t>>(const Witness&)>& map) {
        for (auto& w : sub.witnesses) {
            w.where = sub.label;
            w.fns = map(w);
            v.witnesses.push_back(w);
        }
        v.tested += sub.tested;
        v.gray += sub.gray;
        v.sub.push_back(std::move(sub));
    };
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j) {
            Verdict q = check_sequence(sys, inverse_times(seqs[i], seqs[j]), opt);
            q.label = "T" + std::to_string(i + 1) + "^-1 T" + std::to_string(j + 1) + " = " + q.label;
            absorb(std::move(q), [&](const Witness& w) {
                std::vector<std::vector<std::int64_t>> f(k, std::vector<std::int64_t>(sys.coords(), 0));
                std::vector<std::int64_t> neg(w.k);
                for (auto& x : neg) x = -x;
                f[i] = character(sys, neg).k;
                f[j] = character(sys, w.k).k;
                return f;
            });
        }
    if (k > 0) {
        auto [ps, pseq] = product_sequence(sys, seqs);
        Verdict p = check_sequence(ps, pseq, opt);
        p.label = "product " + p.label;
        const int d = sys.coords();
        absorb(std::move(p), [&](const Witness& w) {
            std::vector<std::vector<std::int64_t>> f;
            for (std::size_t i = 0; i < k; ++i) f.emplace_back(w.k.begin() + i * d, w.k.begin() + (i + 1) * d);
            return f;
        });
    }
    v.decision = fold(v, true);
    return v;
}

Verdict spec_criterion(const SystemSpec& sys, const std::vector<std::string>& handles, const GlfExpr& phi,
                       const CheckOptions& opt) {
    if (linear_part(phi).is_zero())
        throw Error(ErrorKind::UnboundedRequired, "exponent " + to_string(phi) + " is bounded");
    std::vector<GlSeq> lin;
    for (auto& h : handles) lin.push_back(power(h, var()));
    Verdict hyp = check_joint(sys, lin, opt);
    if (hyp.decision != Decision::JointlyErgodic)
        throw Error(ErrorKind::HypothesisFailed,
                    "T_i^n are not jointly ergodic (" + std::string(decision_name(hyp.decision)) + ")");

    Verdict v;
    v.label = "spec " + to_string(phi);
    Tally tally{opt, v};
    auto off = offsets(sys);
    struct Coord {
        std::size_t h;
        int j, lo, hi;
    };
    std::vector<Coord> coords;
    std::vector<HandleRef> refs;
    for (std::size_t i = 0; i < handles.size(); ++i) {
        auto ref = sys.find(handles[i]);
        refs.push_back(ref);
        auto& B = sys.blocks[ref.block];
        if (B.kind == SystemKind::ToralAutomorphism) continue; // Eig = {1}
        for (int j = 0; j < B.dim; ++j)
            coords.push_back(B.kind == SystemKind::CyclicShift
                                 ? Coord{i, j, 0, static_cast<int>(B.modulus - 1)}
                                 : Coord{i, j, -opt.freq_cutoff, opt.freq_cutoff});
    }
    std::optional<SymReal> alpha;
    if (phi->kind == NodeKind::Floor && phi->children[0]->kind == NodeKind::Linear && phi->children[0]->b.is_zero() &&
        !phi->children[0]->a.is_rational())
        alpha = phi->children[0]->a;

    std::set<std::string> seen;
    std::vector<int> cur(coords.size());
    for (std::size_t i = 0; i < coords.size(); ++i) cur[i] = coords[i].lo;
    while (!coords.empty()) {
        std::vector<std::vector<std::int64_t>> fns(handles.size(), std::vector<std::int64_t>(sys.coords(), 0));
        SymReal beta;
        for (std::size_t c = 0; c < coords.size(); ++c)
            fns[coords[c].h][off[refs[coords[c].h].block] + coords[c].j] = cur[c];
        for (std::size_t i = 0; i < handles.size(); ++i) {
            auto& B = sys.blocks[refs[i].block];
            if (B.kind != SystemKind::ToralAutomorphism)
                beta += block_frequency(B, refs[i].index, fns[i].data() + off[refs[i].block]);
        }
        beta = frac_symreal(beta);
        std::string key = beta.str();
        if (!beta.is_zero() && !seen.count(key)) {
            seen.insert(key);
            seen.insert(frac_symreal(-beta).str());
            Witness w;
            w.where = v.label;
            w.frequency = key;
            w.fns = fns;
            bool hit = tally.record(char_limit(phi, beta, opt.sampler), w);
            // alpha*beta in Z alpha + Q: some power lands in Z alpha + Z
            if (!hit && alpha) {
                auto s = split_alpha_beta(*alpha, beta);
                if (s && s->m.is_integer() && !s->q.is_integer()) {
                    std::int64_t den = s->q.den();
                    SymReal pb = frac_symreal(Rational(den) * beta);
                    Witness pw = w;
                    pw.frequency = pb.str() + " = " + std::to_string(den) + " * (" + key + ")";
                    for (auto& f : pw.fns)
                        for (auto& x : f) x *= den;
                    pw.method = "power";
                    tally.record(char_limit(phi, pb, opt.sampler), pw);
                }
            }
        }
        std::size_t i = 0;
        while (i < coords.size() && cur[i] == coords[i].hi) {
            cur[i] = coords[i].lo;
            ++i;
        }
        if (i == coords.size()) break;
        ++cur[i];
    }
    v.sub.push_back(std::move(hyp));
    v.decision = fold(v, true);
    return v;
}

FnBank default_bank(const SystemSpec& sys, std::size_t k, int radius) {
    std::vector<std::vector<int>> ranges;
    for (auto& B : sys.blocks)
        for (int j = 0; j < B.dim; ++j) {
            std::vector<int> r;
            if (B.kind == SystemKind::CyclicShift)
                for (int x = 0; x < std::min<std::int64_t>(B.modulus, 2 * radius + 1); ++x) r.push_back(x);
            else
                for (int x = -radius; x <= radius; ++x) r.push_back(x);
            ranges.push_back(r);
        }
    std::vector<CharacterFn> chars;
    std::vector<std::size_t> pick(ranges.size(), 0);
    for (;;) {
        std::vector<std::int64_t> kv;
        for (std::size_t c = 0; c < ranges.size(); ++c) kv.push_back(ranges[c][pick[c]]);
        chars.push_back(character(sys, kv));
        std::size_t c = 0;
        while (c < ranges.size() && ++pick[c] == ranges[c].size()) pick[c++] = 0;
        if (c == ranges.size()) break;
    }
    FnBank bank;
    if (k == 0) return bank;
    std::vector<std::size_t> t(k, 0);
    for (;;) {
        std::vector<CharacterSum> tuple;
        bool any = false;
        for (auto i : t) {
            tuple.push_back(single(chars[i]));
            any = any || chars[i].mean_zero();
        }
        if (any) bank.push_back(std::move(tuple));
        std::size_t i = 0;
        while (i < k && ++t[i] == chars.size()) t[i++] = 0;
        if (i == k) break;
    }
    return bank;
}

FnBank witness_bank(const SystemSpec& sys, const Verdict& v) {
    FnBank bank;
    std::set<std::vector<std::vector<std::int64_t>>> seen;
    for (auto& w : v.witnesses) {
        if (w.fns.empty() || !seen.insert(w.fns).second) continue;
        std::vector<CharacterSum> tuple;
        for (auto& f : w.fns) tuple.push_back(single(character(sys, f)));
        bank.push_back(std::move(tuple));
    }
    return bank;
}

EmpiricalReport empirical_validate(const SystemSpec& sys, const std::vector<GlSeq>& seqs, const FnBank& bank,
                                   const Verdict& verdict, const FolnerSchedule& s, std::int64_t N, double eps_pass,
                                   double eps_fail) {
    EmpiricalReport r;
    if (bank.empty()) return r;
    r.defects = bank_defects(sys, seqs, bank, schedule_domain(s, N));
    for (double d : r.defects) r.max_defect = std::max(r.max_defect, d);
    r.cls = r.max_defect < eps_pass ? Classification::Pass
            : r.max_defect > eps_fail ? Classification::Fail
                                      : Classification::Gray;
    if (verdict.definite()) {
        bool pos = verdict.positive();
        r.agrees = (pos && r.cls == Classification::Pass) || (!pos && r.cls == Classification::Fail);
        r.discrepancy = (pos && r.cls == Classification::Fail) || (!pos && r.cls == Classification::Pass);
    } else {
        r.agrees = false;
    }
    return r;
}

PrimeReport prime_joint_check(const SystemSpec& sys, const std::vector<GlSeq>& seqs, const FnBank& bank,
                              std::int64_t N, const std::vector<std::int64_t>& W_samples, int r_samples, double eps,
                              const CheckOptions& opt) {
    PrimeReport rep;
    for (auto W : W_samples) {
        int taken = 0;
        for (std::int64_t r = 0; r < W && taken < r_samples; ++r) {
            if (std::gcd(r, W) != 1) continue;
            ++taken;
            std::vector<GlSeq> sub;
            for (auto& s : seqs) sub.push_back(compose_seq(s, linear(SymReal(W), SymReal(r))));
            Verdict v = check_joint(sys, sub, opt);
            rep.hypothesis_ok = rep.hypothesis_ok && v.decision == Decision::JointlyErgodic;
            rep.hypotheses.emplace_back("W=" + std::to_string(W) + ", r=" + std::to_string(r), std::move(v));
        }
    }
    if (!bank.empty()) rep.defects = bank_defects(sys, seqs, bank, prime_domain(N));
    for (double d : rep.defects) rep.max_defect = std::max(rep.max_defect, d);
    rep.consistent = !rep.hypothesis_ok || rep.max_defect < eps;
    return rep;
}

} // namespace glerg
