#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "glerg/systems.hpp"
#include "glerg/torus.hpp"

namespace glerg {

enum class Decision { Ergodic, NotErgodic, JointlyErgodic, NotJointlyErgodic, Inconclusive };

const char* decision_name(Decision d);

struct Witness {
    std::string where;                     // which condition produced it
    std::vector<std::int64_t> k;           // frequency on the system that was checked
    std::vector<std::vector<std::int64_t>> fns; // one character per sequence on the base system
    std::string frequency;                 // eigenvalue frequency beta, e(beta)
    double value = 0.0;                    // |limit|, or a lower bound for it
    bool exact = false;
    std::string method;
};

struct Verdict {
    Decision decision = Decision::Inconclusive;
    std::string label;
    std::vector<Witness> witnesses;
    std::vector<Verdict> sub;
    int tested = 0;   // frequencies examined
    int gray = 0;     // numeric limits between the two thresholds
    std::vector<std::pair<std::int64_t, double>> trace; // empirical defects, filled by callers

    bool definite() const { return decision != Decision::Inconclusive; }
    bool positive() const { return decision == Decision::Ergodic || decision == Decision::JointlyErgodic; }
};

struct CheckOptions {
    int freq_cutoff = 8;
    double eps_zero = 0.01;
    double eps_nonzero = 0.05;
    SamplerOptions sampler{1 << 14, 8, 1};
    std::int64_t max_frequencies = 20000;
};

// T(n) = prod T_j^{phi_j(n)} against every character up to the cutoff
Verdict check_sequence(const SystemSpec& sys, const GlSeq& seq, const CheckOptions& opt = {});
// one handle; base ergodicity tested in closed form first
Verdict check_single(const SystemSpec& sys, const GlSeq& seq, const CheckOptions& opt = {});
// pairwise quotients and the product sequence
Verdict check_joint(const SystemSpec& sys, const std::vector<GlSeq>& seqs, const CheckOptions& opt = {});
// T_1^phi, ..., T_k^phi through Eig(T_1)...Eig(T_k); HypothesisFailed unless
// T_1^n, ..., T_k^n are jointly ergodic
Verdict spec_criterion(const SystemSpec& sys, const std::vector<std::string>& handles, const GlfExpr& phi,
                       const CheckOptions& opt = {});

using FnBank = std::vector<std::vector<CharacterSum>>;

// every tuple of characters with coordinates in [-radius, radius] (cyclic
// coordinates in [0, m)), the all-trivial tuple excluded
FnBank default_bank(const SystemSpec& sys, std::size_t k, int radius = 1);
// one tuple per witness that carries base-system characters
FnBank witness_bank(const SystemSpec& sys, const Verdict& v);

enum class Classification { Pass, Fail, Gray };
const char* classification_name(Classification c);

struct EmpiricalReport {
    std::vector<double> defects;
    double max_defect = 0.0;
    Classification cls = Classification::Pass;
    bool agrees = true;      // definite verdict matches the classification
    bool discrepancy = false; // definite verdict contradicts it
};

EmpiricalReport empirical_validate(const SystemSpec& sys, const std::vector<GlSeq>& seqs, const FnBank& bank,
                                   const Verdict& verdict, const FolnerSchedule& s, std::int64_t N,
                                   double eps_pass = 0.05, double eps_fail = 0.15);

struct PrimeReport {
    std::vector<std::pair<std::string, Verdict>> hypotheses; // "W=.., r=.." -> check_joint
    bool hypothesis_ok = true;
    std::vector<double> defects; // prime-average defects over the bank
    double max_defect = 0.0;
    bool consistent = true; // hypothesis_ok implies max_defect < eps
};

// R(W) is sampled as the first r_samples residues coprime to W
PrimeReport prime_joint_check(const SystemSpec& sys, const std::vector<GlSeq>& seqs, const FnBank& bank,
                              std::int64_t N, const std::vector<std::int64_t>& W_samples = {1, 2, 6, 30},
                              int r_samples = 2, double eps = 0.05, const CheckOptions& opt = {});

} // namespace glerg
