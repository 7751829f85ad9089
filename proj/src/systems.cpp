#include "glerg/systems.hpp"

#include <cmath>
#include <numeric>
#include <set>

#include "glerg/sieve.hpp"

namespace glerg {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr std::uint64_t kPrimes[2] = {(std::uint64_t{1} << 61) - 1, (std::uint64_t{1} << 62) - 57};

using ModMat = std::array<std::uint64_t, 4>;

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % p);
}

std::uint64_t to_mod(std::int64_t x, std::uint64_t p) {
    auto r = static_cast<std::int64_t>(static_cast<__int128>(x) % static_cast<__int128>(p));
    return r < 0 ? static_cast<std::uint64_t>(r + static_cast<__int128>(p)) : static_cast<std::uint64_t>(r);
}

ModMat mat_mul(const ModMat& x, const ModMat& y, std::uint64_t p) {
    auto dot = [&](std::uint64_t a, std::uint64_t b, std::uint64_t c, std::uint64_t d) {
        return (mulmod(a, b, p) + mulmod(c, d, p)) % p;
    };
    return {dot(x[0], y[0], x[1], y[2]), dot(x[0], y[1], x[1], y[3]), dot(x[2], y[0], x[3], y[2]),
            dot(x[2], y[1], x[3], y[3])};
}

Mat2 transpose(const Mat2& A) { return {A[0], A[2], A[1], A[3]}; }

std::int64_t det(const Mat2& A) { return A[0] * A[3] - A[1] * A[2]; }

// exact inverse of a unimodular matrix
Mat2 inverse(const Mat2& A) {
    std::int64_t d = det(A);
    return {d * A[3], -d * A[1], -d * A[2], d * A[0]};
}

ModMat mod_power(const Mat2& B, std::int64_t e, std::uint64_t p) {
    Mat2 base = e < 0 ? inverse(B) : B;
    std::uint64_t m = e < 0 ? static_cast<std::uint64_t>(-(e + 1)) + 1 : static_cast<std::uint64_t>(e);
    ModMat b{to_mod(base[0], p), to_mod(base[1], p), to_mod(base[2], p), to_mod(base[3], p)};
    ModMat r{1, 0, 0, 1};
    while (m) {
        if (m & 1) r = mat_mul(r, b, p);
        b = mat_mul(b, b, p);
        m >>= 1;
    }
    return r;
}

std::int64_t pos_mod(std::int64_t x, std::int64_t m) {
    std::int64_t r = x % m;
    return r < 0 ? r + m : r;
}

std::vector<int> block_offsets(const SystemSpec& sys) {
    std::vector<int> off;
    int at = 0;
    for (auto& b : sys.blocks) {
        off.push_back(at);
        at += b.dim;
    }
    return off;
}

// k·alpha reduced mod 1
SymReal rotation_frequency(const SystemBlock& b, int h, const std::int64_t* k) {
    SymReal s;
    for (int j = 0; j < b.dim; ++j)
        if (k[j]) s += Rational(k[j]) * b.alpha[h][j];
    return frac_symreal(s);
}

void check_unique_handles(const SystemSpec& sys) {
    std::set<std::string> seen;
    for (auto& b : sys.blocks)
        for (auto& h : b.handles)
            if (!seen.insert(h).second) throw Error(ErrorKind::InvalidArgument, "duplicate handle '" + h + "'");
}

bool is_zero_expr(const GlfExpr& e) { return e->kind == NodeKind::Linear && e->a.is_zero() && e->b.is_zero(); }

} // namespace

HandleRef SystemSpec::find(const std::string& handle) const {
    for (int b = 0; b < static_cast<int>(blocks.size()); ++b)
        for (int i = 0; i < static_cast<int>(blocks[b].handles.size()); ++i)
            if (blocks[b].handles[i] == handle) return {b, i};
    throw Error(ErrorKind::UnknownName, "no transformation named '" + handle + "'");
}

int SystemSpec::coords() const {
    int n = 0;
    for (auto& b : blocks) n += b.dim;
    return n;
}

std::string SystemSpec::str() const {
    std::string s;
    for (auto& b : blocks) {
        if (!s.empty()) s += " x ";
        switch (b.kind) {
        case SystemKind::TorusRotation:
            s += b.name + "[torus " + std::to_string(b.dim) + ";";
            for (std::size_t i = 0; i < b.handles.size(); ++i) {
                s += " " + b.handles[i] + "=(";
                for (int j = 0; j < b.dim; ++j) s += (j ? "," : "") + b.alpha[i][j].str();
                s += ")";
            }
            break;
        case SystemKind::CyclicShift:
            s += b.name + "[cyclic " + std::to_string(b.modulus) + ";";
            for (std::size_t i = 0; i < b.handles.size(); ++i)
                s += " " + b.handles[i] + "=" + std::to_string(b.shift[i]);
            break;
        case SystemKind::ToralAutomorphism:
            s += b.name + "[automorphism;";
            for (std::size_t i = 0; i < b.handles.size(); ++i) {
                auto& A = b.matrix[i];
                s += " " + b.handles[i] + "=[[" + std::to_string(A[0]) + "," + std::to_string(A[1]) + "],[" +
                     std::to_string(A[2]) + "," + std::to_string(A[3]) + "]]";
            }
            break;
        }
        s += "]";
    }
    return s;
}

SystemSpec torus_rotation(const std::string& name, int dim,
                          const std::vector<std::pair<std::string, std::vector<SymReal>>>& handles) {
    if (dim < 1) throw Error(ErrorKind::InvalidArgument, "torus dimension must be >= 1");
    SystemBlock b;
    b.kind = SystemKind::TorusRotation;
    b.name = name;
    b.dim = dim;
    for (auto& [h, a] : handles) {
        if (static_cast<int>(a.size()) != dim)
            throw Error(ErrorKind::InvalidArgument, "rotation '" + h + "' has the wrong dimension");
        b.handles.push_back(h);
        b.alpha.push_back(a);
    }
    SystemSpec s{{b}};
    check_unique_handles(s);
    return s;
}

SystemSpec cyclic_shift(const std::string& name, std::int64_t m,
                        const std::vector<std::pair<std::string, std::int64_t>>& handles) {
    if (m < 1) throw Error(ErrorKind::InvalidArgument, "cyclic modulus must be >= 1");
    SystemBlock b;
    b.kind = SystemKind::CyclicShift;
    b.name = name;
    b.modulus = m;
    for (auto& [h, s] : handles) {
        b.handles.push_back(h);
        b.shift.push_back(pos_mod(s, m));
    }
    SystemSpec s{{b}};
    check_unique_handles(s);
    return s;
}

SystemSpec toral_automorphism(const std::string& name, const std::vector<std::pair<std::string, Mat2>>& handles) {
    SystemBlock b;
    b.kind = SystemKind::ToralAutomorphism;
    b.name = name;
    b.dim = 2;
    for (auto& [h, A] : handles) {
        for (auto x : A)
            if (std::abs(x) > (std::int64_t{1} << 30))
                throw Error(ErrorKind::InvalidArgument, "matrix entries too large for '" + h + "'");
        if (std::abs(det(A)) != 1) throw Error(ErrorKind::InvalidArgument, "'" + h + "' is not invertible over Z");
        for (auto& B : b.matrix) {
            Mat2 AB{A[0] * B[0] + A[1] * B[2], A[0] * B[1] + A[1] * B[3], A[2] * B[0] + A[3] * B[2],
                    A[2] * B[1] + A[3] * B[3]};
            Mat2 BA{B[0] * A[0] + B[1] * A[2], B[0] * A[1] + B[1] * A[3], B[2] * A[0] + B[3] * A[2],
                    B[2] * A[1] + B[3] * A[3]};
            if (AB != BA) throw Error(ErrorKind::NonCommuting, "'" + h + "' does not commute with the other handles");
        }
        b.handles.push_back(h);
        b.matrix.push_back(A);
    }
    SystemSpec s{{b}};
    check_unique_handles(s);
    return s;
}

SystemSpec product_system(const std::vector<SystemSpec>& systems) {
    SystemSpec out;
    for (std::size_t i = 0; i < systems.size(); ++i)
        for (auto b : systems[i].blocks) {
            b.name += "@" + std::to_string(i);
            for (auto& h : b.handles) h += "@" + std::to_string(i);
            out.blocks.push_back(std::move(b));
        }
    check_unique_handles(out);
    return out;
}

bool automorphism_ergodic(const Mat2& A) {
    std::int64_t tr = A[0] + A[3];
    return det(A) == 1 ? std::abs(tr) > 2 : tr != 0;
}

bool CharacterFn::mean_zero() const {
    for (auto x : k)
        if (x) return true;
    return false;
}

CharacterFn character(const SystemSpec& sys, std::vector<std::int64_t> k) {
    if (static_cast<int>(k.size()) != sys.coords())
        throw Error(ErrorKind::InvalidArgument, "character needs " + std::to_string(sys.coords()) + " coordinates");
    auto off = block_offsets(sys);
    for (std::size_t b = 0; b < sys.blocks.size(); ++b)
        if (sys.blocks[b].kind == SystemKind::CyclicShift) k[off[b]] = pos_mod(k[off[b]], sys.blocks[b].modulus);
    return {std::move(k)};
}

CharacterFn trivial_character(const SystemSpec& sys) { return {std::vector<std::int64_t>(sys.coords(), 0)}; }

std::complex<double> eval_character(const SystemSpec& sys, const CharacterFn& f, const std::vector<double>& x) {
    auto off = block_offsets(sys);
    double t = 0.0;
    for (std::size_t b = 0; b < sys.blocks.size(); ++b) {
        auto& B = sys.blocks[b];
        for (int j = 0; j < B.dim; ++j) {
            double v = static_cast<double>(f.k[off[b] + j]) * x[off[b] + j];
            t += B.kind == SystemKind::CyclicShift ? v / static_cast<double>(B.modulus) : v;
        }
    }
    return std::polar(1.0, kTwoPi * (t - std::floor(t)));
}

std::complex<double> CharacterSum::integral() const {
    std::complex<double> s = 0.0;
    for (auto& [c, f] : terms)
        if (!f.mean_zero()) s += c;
    return s;
}

CharacterSum single(const CharacterFn& f, std::complex<double> c) { return {{{c, f}}}; }

CharacterSum constant_sum(const SystemSpec& sys, std::complex<double> c) { return single(trivial_character(sys), c); }

CharacterSum operator+(const CharacterSum& x, const CharacterSum& y) {
    CharacterSum r = x;
    r.terms.insert(r.terms.end(), y.terms.begin(), y.terms.end());
    return r;
}

std::string GlSeq::str() const {
    if (factors.empty()) return "id";
    std::string s;
    for (auto& [h, e] : factors) {
        if (!s.empty()) s += " ";
        s += h + "^(" + to_string(e) + ")";
    }
    return s;
}

GlSeq power(const std::string& handle, const GlfExpr& exponent) { return {{{handle, exponent}}}; }

GlSeq operator*(const GlSeq& x, const GlSeq& y) {
    GlSeq r = x;
    r.factors.insert(r.factors.end(), y.factors.begin(), y.factors.end());
    return r;
}

GlSeq merged(const GlSeq& s) {
    GlSeq r;
    for (auto& [h, e] : s.factors) {
        bool found = false;
        for (auto& [h2, e2] : r.factors)
            if (h2 == h) {
                e2 = e2 + e;
                found = true;
                break;
            }
        if (!found) r.factors.emplace_back(h, e);
    }
    std::erase_if(r.factors, [](auto& f) { return is_zero_expr(f.second); });
    return r;
}

GlSeq inverse_times(const GlSeq& si, const GlSeq& sj) {
    GlSeq neg;
    for (auto& [h, e] : si.factors) neg.factors.emplace_back(h, -e);
    return merged(neg * sj);
}

GlSeq compose_seq(const GlSeq& s, const GlfExpr& inner) {
    GlSeq r;
    for (auto& [h, e] : s.factors) r.factors.emplace_back(h, compose(e, inner));
    return r;
}

GlSeq rename(const GlSeq& s, const std::string& suffix) {
    GlSeq r;
    for (auto& [h, e] : s.factors) r.factors.emplace_back(h + suffix, e);
    return r;
}

void validate_glseq(const SystemSpec& sys, const GlSeq& s, std::int64_t window) {
    for (auto& [h, e] : s.factors) {
        sys.find(h);
        if (!certify_integer_valued(e, window))
            throw Error(ErrorKind::NotIntegerValued, "exponent of " + h + " is " + to_string(e));
    }
}

std::pair<SystemSpec, GlSeq> product_sequence(const SystemSpec& sys, const std::vector<GlSeq>& seqs) {
    std::vector<SystemSpec> copies(seqs.size(), sys);
    GlSeq prod;
    for (std::size_t i = 0; i < seqs.size(); ++i) prod = prod * rename(seqs[i], "@" + std::to_string(i));
    return {product_system(copies), prod};
}

std::string EigSet::str() const {
    if (trivial) return "{1}";
    std::string g;
    for (std::size_t i = 0; i < generators.size(); ++i) g += (i ? ", " : "") + generators[i].str();
    if (kind == SystemKind::CyclicShift) return "{e(j*" + g + ") : j in Z}";
    return "{e(k.(" + g + ")) : k in Z^" + std::to_string(generators.size()) + "}";
}

EigSet eig_description(const SystemSpec& sys, const std::string& handle) {
    auto ref = sys.find(handle);
    auto& b = sys.blocks[ref.block];
    EigSet e;
    e.kind = b.kind;
    switch (b.kind) {
    case SystemKind::TorusRotation: e.generators = b.alpha[ref.index]; break;
    case SystemKind::CyclicShift: e.generators = {SymReal(Rational(b.shift[ref.index], b.modulus))}; break;
    case SystemKind::ToralAutomorphism: e.trivial = true; break;
    }
    return e;
}

std::array<mpz_class, 4> transpose_power(const Mat2& A, std::int64_t e) {
    Mat2 B = transpose(A);
    if (e < 0) B = inverse(B);
    std::uint64_t m = e < 0 ? static_cast<std::uint64_t>(-(e + 1)) + 1 : static_cast<std::uint64_t>(e);
    std::array<mpz_class, 4> b{B[0], B[1], B[2], B[3]}, r{1, 0, 0, 1};
    auto mul = [](const std::array<mpz_class, 4>& x, const std::array<mpz_class, 4>& y) {
        return std::array<mpz_class, 4>{x[0] * y[0] + x[1] * y[2], x[0] * y[1] + x[1] * y[3],
                                        x[2] * y[0] + x[3] * y[2], x[2] * y[1] + x[3] * y[3]};
    };
    while (m) {
        if (m & 1) r = mul(r, b);
        b = mul(b, b);
        m >>= 1;
    }
    return r;
}

CharacterImage apply_glseq_to_character(const SystemSpec& sys, const GlSeq& seq, const CharacterFn& f,
                                        std::int64_t n) {
    auto off = block_offsets(sys);
    CharacterImage img;
    for (std::size_t b = 0; b < sys.blocks.size(); ++b) {
        std::vector<mpz_class> k;
        for (int j = 0; j < sys.blocks[b].dim; ++j) k.emplace_back(static_cast<long>(f.k[off[b] + j]));
        img.k.push_back(std::move(k));
    }
    SymReal phase;
    for (auto& [h, e] : seq.factors) {
        auto ref = sys.find(h);
        auto& B = sys.blocks[ref.block];
        std::int64_t p = eval_integer(e, n);
        const std::int64_t* k = f.k.data() + off[ref.block];
        switch (B.kind) {
        case SystemKind::TorusRotation: phase += Rational(p) * rotation_frequency(B, ref.index, k); break;
        case SystemKind::CyclicShift:
            phase += Rational(pos_mod(p, B.modulus)) * Rational(pos_mod(k[0] * B.shift[ref.index], B.modulus), B.modulus);
            break;
        case SystemKind::ToralAutomorphism: {
            auto M = transpose_power(B.matrix[ref.index], p);
            auto& v = img.k[ref.block];
            mpz_class x = M[0] * v[0] + M[1] * v[1], y = M[2] * v[0] + M[3] * v[1];
            v = {x, y};
            break;
        }
        }
    }
    img.phase = frac_symreal(phase);
    return img;
}

bool FreqKey::is_zero() const {
    for (auto x : fixed)
        if (x) return false;
    for (auto x : fp)
        if (x) return false;
    return true;
}

std::size_t FreqKeyHash::operator()(const FreqKey& k) const {
    std::size_t h = 0x9e3779b97f4a7c15ULL;
    auto mix = [&](std::uint64_t v) { h ^= std::hash<std::uint64_t>()(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2); };
    for (auto x : k.fixed) mix(static_cast<std::uint64_t>(x));
    for (auto x : k.fp) mix(x);
    return h;
}

namespace {

// fixed part: rotation and cyclic coordinates; fp: automorphism coordinates
FreqKey key_of(const SystemSpec& sys, const std::vector<std::int64_t>& k) {
    FreqKey key;
    auto off = block_offsets(sys);
    for (std::size_t b = 0; b < sys.blocks.size(); ++b) {
        auto& B = sys.blocks[b];
        if (B.kind == SystemKind::ToralAutomorphism) {
            for (auto p : kPrimes)
                for (int j = 0; j < 2; ++j) key.fp.push_back(to_mod(k[off[b] + j], p));
        } else {
            for (int j = 0; j < B.dim; ++j) key.fixed.push_back(k[off[b] + j]);
        }
    }
    return key;
}

} // namespace

std::vector<Combination> average_bank(const SystemSpec& sys, const std::vector<GlSeq>& seqs,
                                      const std::vector<std::vector<CharacterSum>>& bank, const Domain& domain) {
    const std::size_t k = seqs.size();
    auto off = block_offsets(sys);

    struct Factor {
        int block, handle;
        GlfExpr e;
    };
    std::vector<Factor> factors; // all sequences, flattened
    std::vector<std::vector<int>> of_seq(k);
    for (std::size_t i = 0; i < k; ++i)
        for (auto& [h, e] : seqs[i].factors) {
            auto ref = sys.find(h);
            of_seq[i].push_back(static_cast<int>(factors.size()));
            factors.push_back({ref.block, ref.index, e});
        }
    std::vector<int> autob;
    for (std::size_t b = 0; b < sys.blocks.size(); ++b)
        if (sys.blocks[b].kind == SystemKind::ToralAutomorphism) autob.push_back(static_cast<int>(b));
    const std::size_t A = autob.size();

    // exponents and automorphism pushforwards, once per n
    std::vector<std::int64_t> ns;
    domain([&](std::int64_t n) { ns.push_back(n); });
    if (ns.empty()) throw Error(ErrorKind::InvalidArgument, "empty averaging domain");
    const std::size_t F = factors.size(), per_n = k * A * 2;
    std::vector<std::int64_t> ex(ns.size() * F);
    std::vector<ModMat> M(ns.size() * per_n);
    for (std::size_t t = 0; t < ns.size(); ++t) {
        for (std::size_t f = 0; f < F; ++f) ex[t * F + f] = std::llround(eval_float(factors[f].e, ns[t]));
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t a = 0; a < A; ++a)
                for (int p = 0; p < 2; ++p) {
                    ModMat m{1, 0, 0, 1};
                    for (int fi : of_seq[i])
                        if (factors[fi].block == autob[a])
                            m = mat_mul(m,
                                        mod_power(transpose(sys.blocks[autob[a]].matrix[factors[fi].handle]),
                                                  ex[t * F + fi], kPrimes[p]),
                                        kPrimes[p]);
                    M[t * per_n + (i * A + a) * 2 + p] = m;
                }
    }

    struct Combo {
        std::complex<double> c;
        std::vector<double> coef;        // per factor
        std::vector<std::int64_t> ksum;  // flat, rotation/cyclic coordinates summed
        std::vector<std::uint64_t> autok; // [i][a][p][2] residues
    };
    std::vector<Combination> out;
    for (auto& fns : bank) {
        if (fns.size() != k) throw Error(ErrorKind::InvalidArgument, "need one function per sequence");
        Combination acc;
        bool empty = false;
        for (auto& f : fns) empty = empty || f.terms.empty();
        if (empty) {
            out.push_back(std::move(acc));
            continue;
        }
        std::vector<Combo> combos;
        std::vector<std::size_t> pick(k, 0);
        for (;;) {
            Combo cb;
            cb.c = 1.0;
            cb.coef.assign(F, 0.0);
            cb.ksum.assign(sys.coords(), 0);
            cb.autok.assign(k * A * 4, 0);
            for (std::size_t i = 0; i < k; ++i) {
                auto& [c, ch] = fns[i].terms[pick[i]];
                if (static_cast<int>(ch.k.size()) != sys.coords())
                    throw Error(ErrorKind::InvalidArgument, "character has the wrong number of coordinates");
                cb.c *= c;
                for (std::size_t b = 0; b < sys.blocks.size(); ++b) {
                    auto& B = sys.blocks[b];
                    if (B.kind == SystemKind::ToralAutomorphism) continue;
                    for (int j = 0; j < B.dim; ++j) cb.ksum[off[b] + j] += ch.k[off[b] + j];
                    if (B.kind == SystemKind::CyclicShift) cb.ksum[off[b]] = pos_mod(cb.ksum[off[b]], B.modulus);
                }
                for (std::size_t a = 0; a < A; ++a)
                    for (int p = 0; p < 2; ++p)
                        for (int j = 0; j < 2; ++j)
                            cb.autok[((i * A + a) * 2 + p) * 2 + j] = to_mod(ch.k[off[autob[a]] + j], kPrimes[p]);
                for (int fi : of_seq[i]) {
                    auto& Fa = factors[fi];
                    auto& B = sys.blocks[Fa.block];
                    const std::int64_t* kk = ch.k.data() + off[Fa.block];
                    if (B.kind == SystemKind::TorusRotation)
                        cb.coef[fi] = rotation_frequency(B, Fa.handle, kk).to_double();
                    else if (B.kind == SystemKind::CyclicShift)
                        cb.coef[fi] = static_cast<double>(pos_mod(kk[0] * B.shift[Fa.handle], B.modulus)) /
                                      static_cast<double>(B.modulus);
                }
            }
            combos.push_back(std::move(cb));
            std::size_t i = 0;
            while (i < k && ++pick[i] == fns[i].terms.size()) pick[i++] = 0;
            if (i == k) break;
        }

        std::vector<std::complex<double>> fast(combos.size(), 0.0);
        FreqKey key = key_of(sys, std::vector<std::int64_t>(sys.coords(), 0));
        for (std::size_t t = 0; t < ns.size(); ++t) {
            const std::int64_t* e = ex.data() + t * F;
            for (std::size_t ci = 0; ci < combos.size(); ++ci) {
                auto& cb = combos[ci];
                double th = 0.0;
                for (std::size_t f = 0; f < F; ++f)
                    if (cb.coef[f] != 0.0) th += static_cast<double>(e[f]) * cb.coef[f];
                auto z = cb.c * std::polar(1.0, kTwoPi * (th - std::floor(th)));
                if (A == 0) {
                    fast[ci] += z;
                    continue;
                }
                std::size_t at = 0;
                for (std::size_t a = 0; a < A; ++a)
                    for (int p = 0; p < 2; ++p) {
                        std::uint64_t P = kPrimes[p], v0 = 0, v1 = 0;
                        for (std::size_t i = 0; i < k; ++i) {
                            auto& m = M[t * per_n + (i * A + a) * 2 + p];
                            std::uint64_t k0 = cb.autok[((i * A + a) * 2 + p) * 2];
                            std::uint64_t k1 = cb.autok[((i * A + a) * 2 + p) * 2 + 1];
                            v0 = (v0 + mulmod(m[0], k0, P) + mulmod(m[1], k1, P)) % P;
                            v1 = (v1 + mulmod(m[2], k0, P) + mulmod(m[3], k1, P)) % P;
                        }
                        key.fp[at++] = v0;
                        key.fp[at++] = v1;
                    }
                key.fixed = key_of(sys, cb.ksum).fixed;
                acc[key] += z;
            }
        }
        if (A == 0)
            for (std::size_t ci = 0; ci < combos.size(); ++ci) acc[key_of(sys, combos[ci].ksum)] += fast[ci];
        for (auto& [kk, v] : acc) v /= static_cast<double>(ns.size());
        out.push_back(std::move(acc));
    }
    return out;
}

Combination average_combination(const SystemSpec& sys, const std::vector<GlSeq>& seqs,
                                const std::vector<CharacterSum>& fns, const Domain& domain) {
    if (seqs.size() != fns.size()) throw Error(ErrorKind::InvalidArgument, "need one function per sequence");
    return average_bank(sys, seqs, {fns}, domain)[0];
}

std::vector<double> bank_defects(const SystemSpec& sys, const std::vector<GlSeq>& seqs,
                                 const std::vector<std::vector<CharacterSum>>& bank, const Domain& domain) {
    auto avgs = average_bank(sys, seqs, bank, domain);
    std::vector<double> d;
    for (std::size_t i = 0; i < bank.size(); ++i) d.push_back(l2_distance(avgs[i], product_of_integrals(sys, bank[i])));
    return d;
}

Combination combination_of(const SystemSpec& sys, const CharacterSum& f) {
    Combination c;
    for (auto& [coef, ch] : f.terms) c[key_of(sys, character(sys, ch.k).k)] += coef;
    return c;
}

Combination product_of_integrals(const SystemSpec& sys, const std::vector<CharacterSum>& fns) {
    std::complex<double> p = 1.0;
    for (auto& f : fns) p *= f.integral();
    Combination c;
    c[key_of(sys, std::vector<std::int64_t>(sys.coords(), 0))] = p;
    return c;
}

double l2_distance(const Combination& x, const Combination& y) {
    double s = 0.0;
    for (auto& [k, v] : x) {
        auto it = y.find(k);
        s += std::norm(v - (it == y.end() ? 0.0 : it->second));
    }
    for (auto& [k, v] : y)
        if (!x.count(k)) s += std::norm(v);
    return std::sqrt(s);
}

Domain schedule_domain(const FolnerSchedule& s, std::int64_t N) {
    return [s, N](const std::function<void(std::int64_t)>& f) { s.for_each(N, f); };
}

Domain prime_domain(std::int64_t N) {
    return [N](const std::function<void(std::int64_t)>& f) { global_sieve().for_each_prime(N, f); };
}

double multi_average_l2(const SystemSpec& sys, const std::vector<GlSeq>& seqs, const std::vector<CharacterSum>& fns,
                        const FolnerSchedule& s, std::int64_t N) {
    return l2_distance(average_combination(sys, seqs, fns, schedule_domain(s, N)), product_of_integrals(sys, fns));
}

double multi_average_l2(const SystemSpec& sys, const std::vector<GlSeq>& seqs, const std::vector<CharacterFn>& fns,
                        const FolnerSchedule& s, std::int64_t N) {
    std::vector<CharacterSum> sums;
    for (auto& f : fns) sums.push_back(single(f));
    return multi_average_l2(sys, seqs, sums, s, N);
}

double prime_average_l2(const SystemSpec& sys, const std::vector<GlSeq>& seqs, const std::vector<CharacterSum>& fns,
                        std::int64_t N) {
    return l2_distance(average_combination(sys, seqs, fns, prime_domain(N)), product_of_integrals(sys, fns));
}

} // namespace glerg
