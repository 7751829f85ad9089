#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "glerg/interval.hpp"
#include "glerg/number_field.hpp"

namespace glerg {

enum class NodeKind { Linear, Sum, Scale, Floor, Frac };

struct GlfNode;
using GlfExpr = std::shared_ptr<const GlfNode>;

// Immutable node. Build through the factories below; they normalise
// (flatten sums, fuse scales, fold constant floors) so that structurally
// equal expressions have identical keys.
struct GlfNode {
    NodeKind kind;
    SymReal a; // Linear slope, Scale coefficient
    SymReal b; // Linear intercept
    std::vector<GlfExpr> children;

    int weight = 0;
    SymReal lin; // linear part
    double ad = 0.0, bd = 0.0;
    std::string key; // canonical text, same as the DSL printer
};

GlfExpr linear(const SymReal& a, const SymReal& b);
GlfExpr constant(const SymReal& b);
GlfExpr var();
GlfExpr sum(std::vector<GlfExpr> terms);
GlfExpr scale(const SymReal& c, const GlfExpr& e);
GlfExpr floor_of(const GlfExpr& e);
GlfExpr frac_of(const GlfExpr& e);

GlfExpr operator+(const GlfExpr& x, const GlfExpr& y);
GlfExpr operator-(const GlfExpr& x, const GlfExpr& y);
GlfExpr operator-(const GlfExpr& x);
GlfExpr operator*(const SymReal& c, const GlfExpr& e);

int weight(const GlfExpr& e);
SymReal linear_part(const GlfExpr& e);
GlfExpr bounded_part(const GlfExpr& e);
bool is_bounded(const GlfExpr& e);
Interval bound_interval(const GlfExpr& e);

GlfExpr diff_derivative(const GlfExpr& e, const SymReal& h);
GlfExpr compose(const GlfExpr& outer, const GlfExpr& inner);
// Frac(f) rewritten as f - Floor(f), recursively
GlfExpr lower_frac(const GlfExpr& e);

SymReal eval_exact(const GlfExpr& e, std::int64_t n);
double eval_float(const GlfExpr& e, std::int64_t n);
// eval_exact that must land on an integer (exponents, indicator values)
std::int64_t eval_integer(const GlfExpr& e, std::int64_t n);

std::string to_string(const GlfExpr& e);
inline bool structurally_equal(const GlfExpr& x, const GlfExpr& y) { return x->key == y->key; }

// integer-valuedness certificate by exact sampling on [-window, window]
bool certify_integer_valued(const GlfExpr& e, std::int64_t window);

} // namespace glerg
