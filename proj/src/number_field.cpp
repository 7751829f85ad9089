#include "glerg/number_field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace glerg {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

mpq_class to_mpq(const Rational& r) {
    mpq_class q(mpz_class(static_cast<long>(r.num())), mpz_class(static_cast<long>(r.den())));
    q.canonicalize();
    return q;
}

mpz_class mpq_floor(const mpq_class& q) {
    mpz_class f;
    mpz_fdiv_q(f.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return f;
}

std::int64_t mpz_to_i64(const mpz_class& z) {
    if (!z.fits_slong_p()) throw Error(ErrorKind::Overflow, "integer does not fit in 64 bits");
    return z.get_si();
}

// atan(1/x) * 2^P, error at most the returned count of ulps
mpz_class atan_inv(long x, unsigned P, long& err) {
    mpz_class term = (mpz_class(1) << P) / x;
    mpz_class sum = term;
    long x2 = x * x;
    long k = 1;
    int sgn = -1;
    long count = 1;
    while (term != 0) {
        term /= x2;
        mpz_class t = term / (2 * k + 1);
        if (sgn < 0)
            sum -= t;
        else
            sum += t;
        sgn = -sgn;
        ++k;
        ++count;
    }
    err = 2 * count + 4;
    return sum;
}

void pi_enclosure(int bits, mpq_class& lo, mpq_class& hi) {
    unsigned P = static_cast<unsigned>(bits) + 40;
    long e5 = 0, e239 = 0;
    mpz_class a = atan_inv(5, P, e5);
    mpz_class b = atan_inv(239, P, e239);
    mpz_class pi = 16 * a - 4 * b;
    mpz_class err = 16 * e5 + 4 * e239;
    mpz_class den = mpz_class(1) << P;
    lo = mpq_class(pi - err, den);
    hi = mpq_class(pi + err, den);
    lo.canonicalize();
    hi.canonicalize();
}

} // namespace

// ---- basis ----

int IrrationalBasis::add(Generator g) {
    if (find(g.name)) throw Error(ErrorKind::InvalidArgument, "generator '" + g.name + "' already declared");
    gens_.push_back(std::move(g));
    return static_cast<int>(gens_.size()) - 1;
}

int IrrationalBasis::add_quadratic(const std::string& name, std::int64_t n) {
    if (n <= 1) throw Error(ErrorKind::InvalidArgument, "quadratic(" + std::to_string(n) + ")");
    auto r = static_cast<std::int64_t>(std::llround(std::sqrt(static_cast<double>(n))));
    if (r * r == n) throw Error(ErrorKind::InvalidArgument, "quadratic of a perfect square");
    Generator g;
    g.name = name;
    g.source = "quadratic(" + std::to_string(n) + ")";
    g.oracle = [n](int bits, mpq_class& lo, mpq_class& hi) {
        mpz_class N = mpz_class(static_cast<long>(n)) << (2 * bits);
        mpz_class s = sqrt(N);
        mpz_class den = mpz_class(1) << bits;
        lo = mpq_class(s, den);
        hi = mpq_class(s + 1, den);
        lo.canonicalize();
        hi.canonicalize();
    };
    g.approx = std::sqrt(static_cast<double>(n));
    g.approx_err = kEps * g.approx;
    int idx = add(std::move(g));
    add_rule(idx, idx, SymReal(Rational(n)));
    return idx;
}

int IrrationalBasis::add_pi(const std::string& name) {
    Generator g;
    g.name = name;
    g.source = "pi";
    g.oracle = pi_enclosure;
    g.approx = M_PI;
    g.approx_err = kEps * 4.0;
    return add(std::move(g));
}

int IrrationalBasis::add_custom(const std::string& name, const std::string& decimal) {
    std::string s = decimal;
    bool neg = false;
    if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
        neg = s[0] == '-';
        s = s.substr(1);
    }
    auto dot = s.find('.');
    std::string ip = dot == std::string::npos ? s : s.substr(0, dot);
    std::string fp = dot == std::string::npos ? "" : s.substr(dot + 1);
    if ((ip + fp).empty() || (ip + fp).find_first_not_of("0123456789") != std::string::npos)
        throw Error(ErrorKind::InvalidArgument, "custom(\"" + decimal + "\") is not a decimal");
    mpz_class num(ip + fp, 10);
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, fp.size());
    if (neg) num = -num;
    mpq_class center(num, den);
    center.canonicalize();
    mpq_class width(1, den);
    width.canonicalize();
    Generator g;
    g.name = name;
    g.source = "custom(\"" + decimal + "\")";
    g.oracle = [center, width](int, mpq_class& lo, mpq_class& hi) {
        lo = center - width;
        hi = center + width;
    };
    g.approx = std::strtod(decimal.c_str(), nullptr);
    g.approx_err = width.get_d() * 1.01 + kEps * std::abs(g.approx);
    return add(std::move(g));
}

void IrrationalBasis::add_rule(int a, int b, const SymReal& value) {
    for (auto& [m, c] : value.terms())
        if (m.degree() != 1) throw Error(ErrorKind::InvalidArgument, "rule values must be degree 1");
    if (a > b) std::swap(a, b);
    SymReal v = value;
    if (!v.is_rational()) v.basis_ = this;
    rules_[{a, b}] = v;
}

const SymReal* IrrationalBasis::rule(int a, int b) const {
    if (a > b) std::swap(a, b);
    auto it = rules_.find({a, b});
    return it == rules_.end() ? nullptr : &it->second;
}

std::optional<int> IrrationalBasis::find(const std::string& name) const {
    for (int i = 0; i < size(); ++i)
        if (gens_[i].name == name) return i;
    return std::nullopt;
}

SymReal IrrationalBasis::operator()(const std::string& name) const {
    auto i = find(name);
    if (!i) throw Error(ErrorKind::UnknownName, name);
    return SymReal::generator(*this, *i);
}

std::string IrrationalBasis::monomial_name(Monomial m) const {
    if (m.degree() == 1) return gen(m.a).name;
    return gen(m.a).name + "*" + gen(m.b).name;
}

double IrrationalBasis::monomial_approx(Monomial m) const {
    if (m.degree() == 1) return gen(m.a).approx;
    return gen(m.a).approx * gen(m.b).approx;
}

double IrrationalBasis::monomial_err(Monomial m) const {
    if (m.degree() == 1) return gen(m.a).approx_err;
    const auto& x = gen(m.a);
    const auto& y = gen(m.b);
    return std::abs(x.approx) * y.approx_err + std::abs(y.approx) * x.approx_err +
           x.approx_err * y.approx_err + kEps * std::abs(x.approx * y.approx);
}

void IrrationalBasis::monomial_enclosure(Monomial m, int bits, mpq_class& lo, mpq_class& hi) const {
    gen(m.a).oracle(bits, lo, hi);
    if (m.degree() == 1) return;
    mpq_class l2, h2;
    gen(m.b).oracle(bits, l2, h2);
    mpq_class c[4] = {lo * l2, lo * h2, hi * l2, hi * h2};
    lo = *std::min_element(c, c + 4);
    hi = *std::max_element(c, c + 4);
}

void add_standard_generators(IrrationalBasis& b) {
    int s2 = b.add_quadratic("sqrt2", 2);
    int s3 = b.add_quadratic("sqrt3", 3);
    int s6 = b.add_quadratic("sqrt6", 6);
    b.add_rule(s2, s3, SymReal::generator(b, s6));
    b.add_rule(s2, s6, Rational(2) * SymReal::generator(b, s3));
    b.add_rule(s3, s6, Rational(3) * SymReal::generator(b, s2));
}

const IrrationalBasis& standard_basis() {
    static const IrrationalBasis* b = [] {
        auto* p = new IrrationalBasis();
        add_standard_generators(*p);
        return p;
    }();
    return *b;
}

// ---- SymReal ----

SymReal SymReal::generator(const IrrationalBasis& b, int idx) {
    return monomial(b, Monomial{idx, -1}, Rational(1));
}

SymReal SymReal::monomial(const IrrationalBasis& b, Monomial m, const Rational& c) {
    SymReal s;
    s.basis_ = &b;
    s.add_term(m, c);
    return s;
}

void SymReal::add_term(Monomial m, const Rational& c) {
    if (c.is_zero()) return;
    auto it = std::lower_bound(terms_.begin(), terms_.end(), m,
                               [](const Term& t, Monomial x) { return t.first < x; });
    if (it != terms_.end() && it->first == m) {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    } else {
        terms_.insert(it, Term{m, c});
    }
}

Rational SymReal::coeff(Monomial m) const {
    for (auto& [k, c] : terms_)
        if (k == m) return c;
    return Rational();
}

SymReal SymReal::irrational_part() const {
    SymReal s = *this;
    s.c0_ = Rational();
    return s;
}

static const IrrationalBasis* join_basis(const SymReal& x, const SymReal& y) {
    const IrrationalBasis* a = x.is_rational() ? nullptr : x.basis();
    const IrrationalBasis* b = y.is_rational() ? nullptr : y.basis();
    if (a && b && a != b) throw Error(ErrorKind::BasisMismatch, x.str() + " vs " + y.str());
    return a ? a : b;
}

SymReal SymReal::operator-() const {
    SymReal s = *this;
    s.c0_ = -s.c0_;
    for (auto& t : s.terms_) t.second = -t.second;
    return s;
}

SymReal operator+(const SymReal& x, const SymReal& y) {
    const IrrationalBasis* b = join_basis(x, y);
    if (y.terms_.empty()) {
        SymReal s = x;
        s.c0_ += y.c0_;
        return s;
    }
    if (x.terms_.empty()) {
        SymReal s = y;
        s.c0_ += x.c0_;
        return s;
    }
    SymReal s;
    s.basis_ = b;
    s.c0_ = x.c0_ + y.c0_;
    auto i = x.terms_.begin();
    auto j = y.terms_.begin();
    while (i != x.terms_.end() || j != y.terms_.end()) {
        if (j == y.terms_.end() || (i != x.terms_.end() && i->first < j->first)) {
            s.terms_.push_back(*i++);
        } else if (i == x.terms_.end() || j->first < i->first) {
            s.terms_.push_back(*j++);
        } else {
            Rational c = i->second + j->second;
            if (!c.is_zero()) s.terms_.push_back({i->first, c});
            ++i;
            ++j;
        }
    }
    return s;
}

SymReal operator*(const Rational& q, const SymReal& x) {
    if (q.is_zero()) return SymReal();
    SymReal s = x;
    s.c0_ *= q;
    for (auto& t : s.terms_) t.second *= q;
    return s;
}

SymReal operator*(const SymReal& x, const SymReal& y) {
    if (x.is_rational()) return x.c0_ * y;
    if (y.is_rational()) return y.c0_ * x;
    const IrrationalBasis* b = join_basis(x, y);
    SymReal s;
    s.basis_ = b;
    s.c0_ = x.c0_ * y.c0_;
    for (auto& [m, c] : y.terms_) s.add_term(m, x.c0_ * c);
    for (auto& [m, c] : x.terms_) s.add_term(m, y.c0_ * c);
    for (auto& [m1, c1] : x.terms_) {
        for (auto& [m2, c2] : y.terms_) {
            if (m1.degree() != 1 || m2.degree() != 1)
                throw Error(ErrorKind::UnsupportedProduct, "degree cap 2 exceeded in " + x.str() + " * " + y.str());
            Rational c = c1 * c2;
            if (const SymReal* r = b->rule(m1.a, m2.a)) {
                s.c0_ += c * r->c0_;
                for (auto& [rm, rc] : r->terms_) s.add_term(rm, c * rc);
            } else if (b->allow_formal) {
                s.add_term(Monomial{std::min(m1.a, m2.a), std::max(m1.a, m2.a)}, c);
            } else {
                throw Error(ErrorKind::UnsupportedProduct,
                            "no rule for " + b->gen(m1.a).name + "*" + b->gen(m2.a).name);
            }
        }
    }
    return s;
}

bool operator==(const SymReal& x, const SymReal& y) {
    if (x.c0_ != y.c0_ || x.terms_.size() != y.terms_.size()) return false;
    if (!x.terms_.empty() && x.basis_ != y.basis_) return false;
    for (std::size_t i = 0; i < x.terms_.size(); ++i)
        if (x.terms_[i].first != y.terms_[i].first || x.terms_[i].second != y.terms_[i].second) return false;
    return true;
}

double SymReal::to_double() const {
    double v = c0_.to_double();
    for (auto& [m, c] : terms_) v += c.to_double() * basis_->monomial_approx(m);
    return v;
}

double SymReal::double_error() const {
    double mag = std::abs(c0_.to_double());
    double err = 0.0;
    for (auto& [m, c] : terms_) {
        double cd = std::abs(c.to_double());
        mag += cd * std::abs(basis_->monomial_approx(m));
        err += cd * basis_->monomial_err(m);
    }
    return err * 1.01 + 8.0 * kEps * mag * static_cast<double>(terms_.size() + 2);
}

void SymReal::enclosure(int bits, mpq_class& lo, mpq_class& hi) const {
    lo = to_mpq(c0_);
    hi = lo;
    for (auto& [m, c] : terms_) {
        mpq_class ml, mh;
        basis_->monomial_enclosure(m, bits + 8, ml, mh);
        mpq_class cq = to_mpq(c);
        if (c.sign() > 0) {
            lo += cq * ml;
            hi += cq * mh;
        } else {
            lo += cq * mh;
            hi += cq * ml;
        }
    }
}

SymReal SymReal::inverse() const {
    if (is_rational()) {
        if (c0_.is_zero()) throw Error(ErrorKind::InvalidArgument, "inverse of zero");
        return SymReal(Rational(1) / c0_);
    }
    const IrrationalBasis& b = *basis_;
    for (auto& [m, c] : terms_)
        if (m.degree() != 1) throw Error(ErrorKind::UnsupportedProduct, "inverse of formal monomial");
    int n = b.size() + 1;
    // column j holds the coordinates of x * e_j in (1, g_0, ..., g_{n-2})
    std::vector<std::vector<Rational>> M(n, std::vector<Rational>(n + 1));
    for (int j = 0; j < n; ++j) {
        SymReal e = j == 0 ? SymReal(1) : SymReal::generator(b, j - 1);
        SymReal p = *this * e;
        M[0][j] = p.c0_;
        for (auto& [m, c] : p.terms_) {
            if (m.degree() != 1) throw Error(ErrorKind::UnsupportedProduct, "inverse leaves the linear span");
            M[m.a + 1][j] = c;
        }
    }
    M[0][n] = Rational(1);
    for (int col = 0; col < n; ++col) {
        int piv = -1;
        for (int r = col; r < n; ++r)
            if (!M[r][col].is_zero()) {
                piv = r;
                break;
            }
        if (piv < 0) throw Error(ErrorKind::UnsupportedProduct, "no inverse in the linear span of " + str());
        std::swap(M[piv], M[col]);
        for (int r = 0; r < n; ++r) {
            if (r == col || M[r][col].is_zero()) continue;
            Rational f = M[r][col] / M[col][col];
            for (int k = col; k <= n; ++k) M[r][k] -= f * M[col][k];
        }
    }
    SymReal y(M[0][n] / M[0][0]);
    for (int j = 1; j < n; ++j) y += SymReal::monomial(b, Monomial{j - 1, -1}, M[j][n] / M[j][j]);
    return y;
}

std::string SymReal::str() const {
    std::ostringstream os;
    bool first = true;
    if (!c0_.is_zero() || terms_.empty()) {
        os << c0_.str();
        first = false;
    }
    for (auto& [m, c] : terms_) {
        Rational a = c;
        if (!first) {
            os << (c.sign() < 0 ? " - " : " + ");
            a = c.abs();
        } else if (c.sign() < 0) {
            os << "-";
            a = c.abs();
        }
        if (a != Rational(1)) os << a.str() << "*";
        os << basis_->monomial_name(m);
        first = false;
    }
    return os.str();
}

SymReal add(const SymReal& x, const SymReal& y) { return x + y; }
SymReal scale(const Rational& q, const SymReal& x) { return q * x; }
SymReal mul(const SymReal& x, const SymReal& y) { return x * y; }

std::int64_t floor_symreal(const SymReal& x, int budget) {
    if (x.is_rational()) return x.rational_part().floor();
    double v = x.to_double();
    double e = x.double_error();
    if (std::abs(v) > 4.0e18) throw Error(ErrorKind::Overflow, "floor of " + x.str());
    double fl = std::floor(v - e);
    if (fl == std::floor(v + e)) return static_cast<std::int64_t>(fl);
    for (int bits = 64; bits <= budget; bits *= 2) {
        mpq_class lo, hi;
        x.enclosure(bits, lo, hi);
        mpz_class a = mpq_floor(lo);
        if (a == mpq_floor(hi)) return mpz_to_i64(a);
    }
    throw Error(ErrorKind::RefinementBudgetExceeded, "floor of " + x.str());
}

SymReal frac_symreal(const SymReal& x, int budget) {
    return x - SymReal(Rational(floor_symreal(x, budget)));
}

int sign(const SymReal& x, int budget) {
    if (x.is_rational()) return x.rational_part().sign();
    double v = x.to_double();
    double e = x.double_error();
    if (v > e) return 1;
    if (v < -e) return -1;
    for (int bits = 64; bits <= budget; bits *= 2) {
        mpq_class lo, hi;
        x.enclosure(bits, lo, hi);
        if (lo > 0) return 1;
        if (hi < 0) return -1;
    }
    throw Error(ErrorKind::RefinementBudgetExceeded, "sign of " + x.str());
}

int compare(const SymReal& x, const Rational& q, int budget) { return sign(x - SymReal(q), budget); }
int compare(const SymReal& x, const SymReal& y, int budget) { return sign(x - y, budget); }

std::pair<Rational, Rational> rational_enclosure(const SymReal& x, int bits) {
    if (x.is_rational()) return {x.rational_part(), x.rational_part()};
    double v = x.to_double();
    double e = x.double_error();
    while (bits > 0 && std::abs(v) * std::ldexp(1.0, bits) > 1e18) --bits;
    double scale = std::ldexp(1.0, bits);
    auto lo = static_cast<std::int64_t>(std::floor((v - e) * scale)) - 1;
    auto hi = static_cast<std::int64_t>(std::ceil((v + e) * scale)) + 1;
    std::int64_t den = std::int64_t(1) << bits;
    return {Rational(lo, den), Rational(hi, den)};
}

std::optional<AlphaBetaSplit> split_alpha_beta(const SymReal& alpha, const SymReal& beta) {
    if (alpha.is_rational()) throw Error(ErrorKind::InvalidArgument, "alpha must be irrational");
    SymReal p = alpha * beta;
    const auto& [m0, c0] = alpha.terms().front();
    Rational m = p.coeff(m0) / c0;
    if (p.irrational_part() != m * alpha.irrational_part()) return std::nullopt;
    return AlphaBetaSplit{p, m, p.rational_part() - m * alpha.rational_part()};
}

bool in_z_alpha_plus_q(const SymReal& alpha, const SymReal& beta) {
    auto s = split_alpha_beta(alpha, beta);
    return s && s->m.is_integer();
}

bool in_z_alpha_plus_z(const SymReal& alpha, const SymReal& beta) {
    auto s = split_alpha_beta(alpha, beta);
    return s && s->m.is_integer() && s->q.is_integer();
}

std::vector<std::vector<mpz_class>> integer_left_kernel(std::vector<std::vector<mpz_class>> A) {
    std::size_t n = A.size();
    if (n == 0) return {};
    std::size_t c = A[0].size();
    for (std::size_t i = 0; i < n; ++i) {
        A[i].resize(c + n);
        for (std::size_t j = 0; j < n; ++j) A[i][c + j] = i == j ? 1 : 0;
    }
    std::size_t r = 0;
    for (std::size_t col = 0; col < c && r < n; ++col) {
        while (true) {
            std::size_t piv = n;
            for (std::size_t i = r; i < n; ++i)
                if (A[i][col] != 0 && (piv == n || abs(A[i][col]) < abs(A[piv][col]))) piv = i;
            if (piv == n) break;
            std::swap(A[piv], A[r]);
            bool done = true;
            for (std::size_t i = r + 1; i < n; ++i) {
                if (A[i][col] == 0) continue;
                mpz_class q;
                mpz_tdiv_q(q.get_mpz_t(), A[i][col].get_mpz_t(), A[r][col].get_mpz_t());
                for (std::size_t k = col; k < c + n; ++k) A[i][k] -= q * A[r][k];
                if (A[i][col] != 0) done = false;
            }
            if (done) {
                ++r;
                break;
            }
        }
    }
    std::vector<std::vector<mpz_class>> out;
    for (std::size_t i = r; i < n; ++i) {
        std::vector<mpz_class> v(A[i].begin() + c, A[i].end());
        for (auto& x : v) {
            if (x == 0) continue;
            if (x < 0)
                for (auto& y : v) y = -y;
            break;
        }
        out.push_back(std::move(v));
    }
    return out;
}

RelationLattice relation_lattice(const std::vector<SymReal>& v) {
    std::vector<Monomial> cols;
    for (auto& x : v)
        for (auto& [m, c] : x.terms())
            if (std::find(cols.begin(), cols.end(), m) == cols.end()) cols.push_back(m);
    std::sort(cols.begin(), cols.end());
    std::vector<std::int64_t> colden(cols.size(), 1);
    for (std::size_t j = 0; j < cols.size(); ++j)
        for (auto& x : v) colden[j] = checked_lcm(colden[j], x.coeff(cols[j]).den());
    std::vector<std::vector<mpz_class>> A(v.size(), std::vector<mpz_class>(cols.size()));
    for (std::size_t i = 0; i < v.size(); ++i)
        for (std::size_t j = 0; j < cols.size(); ++j) {
            Rational c = v[i].coeff(cols[j]);
            A[i][j] = mpz_class(static_cast<long>(c.num())) * (colden[j] / c.den());
        }
    RelationLattice out;
    for (auto& row : integer_left_kernel(A)) {
        std::vector<std::int64_t> m;
        Rational val;
        for (std::size_t i = 0; i < row.size(); ++i) {
            m.push_back(mpz_to_i64(row[i]));
            val += Rational(m.back()) * v[i].rational_part();
        }
        out.basis.push_back(std::move(m));
        out.values.push_back(val);
    }
    return out;
}

} // namespace glerg
