#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "glerg/averaging.hpp"
#include "glerg/glf.hpp"
#include "glerg/number_field.hpp"

namespace glerg {

enum class SystemKind { TorusRotation, CyclicShift, ToralAutomorphism };

// row-major {a, b, c, d}
using Mat2 = std::array<std::int64_t, 4>;

// One factor space with its commuting transformations. A SystemSpec is a
// product of blocks; a handle acts on its own block only.
struct SystemBlock {
    SystemKind kind = SystemKind::TorusRotation;
    std::string name;
    int dim = 1; // torus dimension; 1 for cyclic, 2 for automorphisms
    std::int64_t modulus = 0;
    std::vector<std::string> handles;
    std::vector<std::vector<SymReal>> alpha; // rotation vector per handle
    std::vector<std::int64_t> shift;         // cyclic shift per handle
    std::vector<Mat2> matrix;                // automorphism per handle
};

struct HandleRef {
    int block = -1;
    int index = -1;
};

struct SystemSpec {
    std::vector<SystemBlock> blocks;

    HandleRef find(const std::string& handle) const; // UnknownName
    int coords() const; // length of a flat frequency vector
    std::string str() const;
};

SystemSpec torus_rotation(const std::string& name, int dim,
                          const std::vector<std::pair<std::string, std::vector<SymReal>>>& handles);
SystemSpec cyclic_shift(const std::string& name, std::int64_t m,
                        const std::vector<std::pair<std::string, std::int64_t>>& handles);
// |det| = 1 and pairwise commuting, else InvalidArgument / NonCommuting
SystemSpec toral_automorphism(const std::string& name, const std::vector<std::pair<std::string, Mat2>>& handles);

// blocks side by side, handle h of the i-th system renamed h@i
SystemSpec product_system(const std::vector<SystemSpec>& systems);

bool automorphism_ergodic(const Mat2& A);

// k is a flat frequency vector over all blocks in order; cyclic entries
// are reduced mod m
struct CharacterFn {
    std::vector<std::int64_t> k;
    bool mean_zero() const;
};

CharacterFn character(const SystemSpec& sys, std::vector<std::int64_t> k);
CharacterFn trivial_character(const SystemSpec& sys);
std::complex<double> eval_character(const SystemSpec& sys, const CharacterFn& f, const std::vector<double>& x);

struct CharacterSum {
    std::vector<std::pair<std::complex<double>, CharacterFn>> terms;
    std::complex<double> integral() const;
};

CharacterSum single(const CharacterFn& f, std::complex<double> c = 1.0);
CharacterSum constant_sum(const SystemSpec& sys, std::complex<double> c = 1.0);
CharacterSum operator+(const CharacterSum& x, const CharacterSum& y);

struct GlSeq {
    std::vector<std::pair<std::string, GlfExpr>> factors;
    std::string str() const;
};

GlSeq power(const std::string& handle, const GlfExpr& exponent);
GlSeq operator*(const GlSeq& x, const GlSeq& y); // concatenation
// equal handles merged, identically-zero exponents dropped
GlSeq merged(const GlSeq& s);
GlSeq inverse_times(const GlSeq& si, const GlSeq& sj);
GlSeq compose_seq(const GlSeq& s, const GlfExpr& inner);
GlSeq rename(const GlSeq& s, const std::string& suffix);
// handles exist and exponents are integer-valued on [-window, window]
void validate_glseq(const SystemSpec& sys, const GlSeq& s, std::int64_t window = 200);

// sys^k with seq_i acting on copy i
std::pair<SystemSpec, GlSeq> product_sequence(const SystemSpec& sys, const std::vector<GlSeq>& seqs);

struct EigSet {
    SystemKind kind = SystemKind::TorusRotation;
    std::vector<SymReal> generators; // frequencies k·generators, mod 1
    bool trivial = false;
    std::string str() const;
};

EigSet eig_description(const SystemSpec& sys, const std::string& handle);

struct CharacterImage {
    SymReal phase;                             // in [0, 1)
    std::vector<std::vector<mpz_class>> k;     // per block
};

CharacterImage apply_glseq_to_character(const SystemSpec& sys, const GlSeq& seq, const CharacterFn& f,
                                        std::int64_t n);

// exact integer power of A^T, negative exponents through the inverse
std::array<mpz_class, 4> transpose_power(const Mat2& A, std::int64_t e);

// Frequency of a product character. Rotation and cyclic coordinates are
// kept exactly; automorphism coordinates by residues mod two primes.
struct FreqKey {
    std::vector<std::int64_t> fixed;
    std::vector<std::uint64_t> fp;
    bool operator==(const FreqKey& o) const { return fixed == o.fixed && fp == o.fp; }
    bool is_zero() const;
};

struct FreqKeyHash {
    std::size_t operator()(const FreqKey& k) const;
};

using Combination = std::unordered_map<FreqKey, std::complex<double>, FreqKeyHash>;

using Domain = std::function<void(const std::function<void(std::int64_t)>&)>;

// (1/|D|) sum_{n in D} prod_i T_i(n) f_i as a character combination
Combination average_combination(const SystemSpec& sys, const std::vector<GlSeq>& seqs,
                                const std::vector<CharacterSum>& fns, const Domain& domain);
// one combination per bank entry; exponents and pushforwards shared
std::vector<Combination> average_bank(const SystemSpec& sys, const std::vector<GlSeq>& seqs,
                                      const std::vector<std::vector<CharacterSum>>& bank, const Domain& domain);
// L2 distance of each bank average from the product of integrals
std::vector<double> bank_defects(const SystemSpec& sys, const std::vector<GlSeq>& seqs,
                                 const std::vector<std::vector<CharacterSum>>& bank, const Domain& domain);
Combination combination_of(const SystemSpec& sys, const CharacterSum& f);
Combination product_of_integrals(const SystemSpec& sys, const std::vector<CharacterSum>& fns);
double l2_distance(const Combination& x, const Combination& y);

double multi_average_l2(const SystemSpec& sys, const std::vector<GlSeq>& seqs, const std::vector<CharacterSum>& fns,
                        const FolnerSchedule& s, std::int64_t N);
double multi_average_l2(const SystemSpec& sys, const std::vector<GlSeq>& seqs, const std::vector<CharacterFn>& fns,
                        const FolnerSchedule& s, std::int64_t N);
// same defect with the average taken over primes p <= N
double prime_average_l2(const SystemSpec& sys, const std::vector<GlSeq>& seqs, const std::vector<CharacterSum>& fns,
                        std::int64_t N);

Domain schedule_domain(const FolnerSchedule& s, std::int64_t N);
Domain prime_domain(std::int64_t N);

} // namespace glerg
