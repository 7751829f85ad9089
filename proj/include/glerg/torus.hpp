#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "glerg/glf.hpp"

namespace glerg {

// normal·w + offset >= 0, or > 0 when strict. Missing trailing normal
// entries count as zero.
struct HalfSpace {
    std::vector<SymReal> normal;
    SymReal offset;
    bool strict = false;
};

struct Polygon {
    std::vector<HalfSpace> constraints;
};

struct Piece {
    std::vector<int> constraints; // indices into TorusRep::halfspaces
    std::vector<SymReal> constant; // one per output
};

// phi_k(n) = F_k(nu mod 1) with F_k(w) = slope[k]·w + piece.constant[k] on each piece.
// The pieces partition [0,1)^d.
struct TorusRep {
    std::vector<SymReal> u;
    std::vector<std::vector<SymReal>> slope;
    std::vector<HalfSpace> halfspaces;
    std::vector<Piece> pieces;

    // double copies, filled by the builder
    Eigen::MatrixXd hs_normal;
    Eigen::VectorXd hs_offset;
    Eigen::MatrixXd slope_d;
    Eigen::VectorXd u_d;
    Eigen::MatrixXd constant_d; // pieces x outputs

    int dim() const { return static_cast<int>(u.size()); }
    int outputs() const { return static_cast<int>(slope.size()); }
    Polygon polygon(int piece) const;
};

struct RepOptions {
    std::size_t max_pieces = 10000;
};

TorusRep build_rep(const GlfExpr& phi, const RepOptions& opt = {});
// shared coordinates and a common refinement, one output per function
TorusRep build_joint_rep(const std::vector<GlfExpr>& phis, const RepOptions& opt = {});

std::vector<SymReal> orbit_point(const TorusRep& rep, std::int64_t n);
// every piece containing the exact point; a sound rep gives exactly one
std::vector<int> locate_all(const TorusRep& rep, const std::vector<SymReal>& w);
int locate(const TorusRep& rep, const std::vector<SymReal>& w);

SymReal eval_rep_exact(const TorusRep& rep, std::int64_t n, int output = 0);
double eval_rep(const TorusRep& rep, std::int64_t n, int output = 0);

// double location for sample points; boundary ties go to the first piece
int locate_point(const TorusRep& rep, const Eigen::VectorXd& w);
double eval_point(const TorusRep& rep, const Eigen::VectorXd& w, int output = 0);

nlohmann::json rep_to_json(const TorusRep& rep);

// Closure of Zu, parametrised as {frac(j r + C s) : j in Z/D, s in T^K}.
// u_i = r_i + sum_k C_ik/dc * theta_k with theta the distinct monomials of u
// (taken to be independent over Q together with 1).
struct ClosureGroup {
    std::vector<SymReal> u;
    RelationLattice lattice;
    std::int64_t D = 1;
    std::vector<Rational> r;
    std::vector<SymReal> theta; // theta_k / dc, the frequencies of the subtorus
    Eigen::MatrixXd C;          // d x K, integer entries
    Eigen::VectorXd r_d;

    int dim() const { return static_cast<int>(u.size()); }
    int subtorus_dim() const { return static_cast<int>(theta.size()); }
    Eigen::VectorXd point(std::int64_t j, const Eigen::VectorXd& s) const;
    // |m·w - value| small mod 1/den(value) for every lattice relation
    bool satisfies_relations(const Eigen::VectorXd& w, double tol = 1e-9) const;
};

ClosureGroup closure_group(const std::vector<SymReal>& u);
inline ClosureGroup closure_group(const TorusRep& rep) { return closure_group(rep.u); }

struct SamplerOptions {
    int points = 1 << 16;
    int shifts = 8;
    std::uint64_t seed = 1;
};

struct Estimate {
    std::complex<double> value;
    double std_error = 0.0;
    bool exact = false;
    std::string method;
};

// Halton points on T^K with Cranley-Patterson shifts, all of Z/D at each point
Estimate integrate(const ClosureGroup& Z, const std::function<std::complex<double>(const Eigen::VectorXd&)>& f,
                   const SamplerOptions& opt = {});
// Halton point i in [0,1)^K (prime bases, i starting at 1)
Eigen::VectorXd halton(std::uint64_t i, int K);

Estimate mean_value(const TorusRep& rep, const SamplerOptions& opt = {});
// polygon integration of F over [0,1)^d; only for d <= 2 with dense orbit
double mean_value_polygonal(const TorusRep& rep);

// C-lim e(beta phi(n))
Estimate char_limit(const GlfExpr& phi, const SymReal& beta, const SamplerOptions& opt = {});

struct TrigTerm {
    std::complex<double> coeff;
    SymReal freq;
    double freq_d = 0.0;
};

struct TrigPolynomial {
    std::vector<TrigTerm> terms;
    int cutoff = 0;
    double l1_error = 0.0; // (1/N) sum |phi(n) - q(n)| over 0 <= n < N

    std::complex<double> operator()(std::int64_t n) const;
};

struct BesicovitchOptions {
    int sample_points = 1 << 14;
    std::int64_t check_n = 100000;
    std::size_t max_terms = 4096;
};

TrigPolynomial besicovitch_approx(const GlfExpr& phi, double eps, const BesicovitchOptions& opt = {});

// h is in the window when frac(hu) lies in piece j0 and its signed
// representative v in (-1/2,1/2]^d has |v| < delta with carry pattern `carry`
struct BohrWindow {
    double delta = 0.0;
    int piece = 0;
    std::vector<int> carry; // 1 where v_k < 0
    bool contains(const TorusRep& rep, std::int64_t h) const;
};

struct AlmostLinearity {
    TorusRep rep;
    BohrWindow window;
    std::vector<SymReal> C;
    std::vector<std::int64_t> hs;
    std::vector<double> density;
    bool ok = false;
};

struct AlmostLinearityOptions {
    std::int64_t count_n = 100000;
    int samples = 8;
    std::int64_t h_search = 200000;
    double min_delta = 1e-4;
};

AlmostLinearity almost_linearity_witness(const std::vector<GlfExpr>& phis, double eps,
                                         const AlmostLinearityOptions& opt = {});

} // namespace glerg
