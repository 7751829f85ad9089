#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <boost/container/small_vector.hpp>
#include <gmpxx.h>

#include "glerg/rational.hpp"

namespace glerg {

// Generator index pair. b < 0 marks a degree-1 monomial; otherwise a <= b.
struct Monomial {
    int a = 0;
    int b = -1;

    int degree() const { return b < 0 ? 1 : 2; }
    friend bool operator==(Monomial x, Monomial y) { return x.a == y.a && x.b == y.b; }
    friend bool operator!=(Monomial x, Monomial y) { return !(x == y); }
    friend bool operator<(Monomial x, Monomial y) {
        if (x.degree() != y.degree()) return x.degree() < y.degree();
        return x.a != y.a ? x.a < y.a : x.b < y.b;
    }
};

// Nested rational enclosure of a real: width <= 2^-bits unless the oracle
// has a fixed precision (custom decimals).
using EnclosureOracle = std::function<void(int bits, mpq_class& lo, mpq_class& hi)>;

class SymReal;

class IrrationalBasis {
public:
    struct Generator {
        std::string name;
        std::string source; // quadratic(2), pi, custom("...")
        EnclosureOracle oracle;
        double approx = 0.0;
        double approx_err = 0.0;
    };

    IrrationalBasis() = default;
    IrrationalBasis(const IrrationalBasis&) = delete;
    IrrationalBasis& operator=(const IrrationalBasis&) = delete;

    int add_quadratic(const std::string& name, std::int64_t n);
    int add_pi(const std::string& name);
    int add_custom(const std::string& name, const std::string& decimal);

    // symmetric rule a*b = value
    void add_rule(int a, int b, const SymReal& value);
    const SymReal* rule(int a, int b) const;

    int size() const { return static_cast<int>(gens_.size()); }
    const Generator& gen(int i) const { return gens_.at(i); }
    std::optional<int> find(const std::string& name) const;

    bool allow_formal = true;

    SymReal operator()(const std::string& name) const;

    std::string monomial_name(Monomial m) const;
    double monomial_approx(Monomial m) const;
    double monomial_err(Monomial m) const;
    void monomial_enclosure(Monomial m, int bits, mpq_class& lo, mpq_class& hi) const;

    const std::map<std::pair<int, int>, SymReal>& rules() const { return rules_; }

private:
    int add(Generator g);
    std::vector<Generator> gens_;
    std::map<std::pair<int, int>, SymReal> rules_;
};

// sqrt2, sqrt3, sqrt6 with the full multiplication table; ℚ(√2,√3) is closed
// under it so every product and inverse stays degree 1.
const IrrationalBasis& standard_basis();
void add_standard_generators(IrrationalBasis& b);

constexpr int kDefaultRefinementBudget = 256;

class SymReal {
public:
    using Term = std::pair<Monomial, Rational>;
    using Terms = boost::container::small_vector<Term, 3>;

    SymReal() = default;
    SymReal(const Rational& q) : c0_(q) {}
    SymReal(std::int64_t n) : c0_(n) {}
    SymReal(int n) : c0_(n) {}

    static SymReal generator(const IrrationalBasis& b, int idx);
    static SymReal monomial(const IrrationalBasis& b, Monomial m, const Rational& c);

    const Rational& rational_part() const { return c0_; }
    const Terms& terms() const { return terms_; }
    const IrrationalBasis* basis() const { return basis_; }

    bool is_rational() const { return terms_.empty(); }
    bool is_zero() const { return terms_.empty() && c0_.is_zero(); }
    bool is_integer() const { return terms_.empty() && c0_.is_integer(); }
    Rational coeff(Monomial m) const;

    SymReal irrational_part() const;

    double to_double() const;
    // bound on |to_double() - value|
    double double_error() const;

    SymReal operator-() const;
    friend SymReal operator+(const SymReal& x, const SymReal& y);
    friend SymReal operator-(const SymReal& x, const SymReal& y) { return x + (-y); }
    friend SymReal operator*(const SymReal& x, const SymReal& y);
    friend SymReal operator*(const Rational& q, const SymReal& x);
    friend SymReal operator*(const SymReal& x, const Rational& q) { return q * x; }
    SymReal& operator+=(const SymReal& o) { return *this = *this + o; }
    SymReal& operator-=(const SymReal& o) { return *this = *this - o; }
    SymReal& operator*=(const SymReal& o) { return *this = *this * o; }

    friend bool operator==(const SymReal& x, const SymReal& y);
    friend bool operator!=(const SymReal& x, const SymReal& y) { return !(x == y); }

    // 1/x within the span of 1 and the degree-1 generators
    SymReal inverse() const;

    std::string str() const;

    void enclosure(int bits, mpq_class& lo, mpq_class& hi) const;

private:
    Rational c0_;
    Terms terms_;
    const IrrationalBasis* basis_ = nullptr;

    void add_term(Monomial m, const Rational& c);
    friend class IrrationalBasis;
};

SymReal add(const SymReal& x, const SymReal& y);
SymReal scale(const Rational& q, const SymReal& x);
SymReal mul(const SymReal& x, const SymReal& y);

std::int64_t floor_symreal(const SymReal& x, int budget = kDefaultRefinementBudget);
SymReal frac_symreal(const SymReal& x, int budget = kDefaultRefinementBudget);
int sign(const SymReal& x, int budget = kDefaultRefinementBudget);
// sign(x - q)
int compare(const SymReal& x, const Rational& q, int budget = kDefaultRefinementBudget);
int compare(const SymReal& x, const SymReal& y, int budget = kDefaultRefinementBudget);

// rational [lo, hi] with hi - lo <= 2^-bits (outward, dyadic endpoints)
std::pair<Rational, Rational> rational_enclosure(const SymReal& x, int bits = 30);

// αβ = mα + q with m, q rational, when such a split exists
struct AlphaBetaSplit {
    SymReal product;
    Rational m;
    Rational q;
};
std::optional<AlphaBetaSplit> split_alpha_beta(const SymReal& alpha, const SymReal& beta);

bool in_z_alpha_plus_q(const SymReal& alpha, const SymReal& beta);
bool in_z_alpha_plus_z(const SymReal& alpha, const SymReal& beta);

struct RelationLattice {
    std::vector<std::vector<std::int64_t>> basis;
    std::vector<Rational> values; // m·v for each basis row
};

RelationLattice relation_lattice(const std::vector<SymReal>& v);

// basis of {m in Z^rows : m·A = 0}; rows of A are integer vectors
std::vector<std::vector<mpz_class>> integer_left_kernel(std::vector<std::vector<mpz_class>> A);

} // namespace glerg
