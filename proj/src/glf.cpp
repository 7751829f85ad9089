#include "glerg/glf.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace glerg {

namespace {

bool single_token(const SymReal& c) {
    return c.is_rational() || (c.rational_part().is_zero() && c.terms().size() == 1);
}

// text to put in front of "*factor"
std::string coef_prefix(const SymReal& c) {
    if (c == SymReal(1)) return "";
    if (c == SymReal(-1)) return "-";
    if (single_token(c)) return c.str() + "*";
    return "(" + c.str() + ")*";
}

std::string join_terms(const std::vector<std::string>& parts) {
    std::string s;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        const std::string& p = parts[i];
        if (i == 0) {
            s = p;
        } else if (!p.empty() && p[0] == '-') {
            s += " - " + p.substr(1);
        } else {
            s += " + " + p;
        }
    }
    return s;
}

std::string linear_text(const SymReal& a, const SymReal& b) {
    std::vector<std::string> parts;
    if (!a.is_zero()) parts.push_back(coef_prefix(a) + "x");
    if (!b.is_zero() || a.is_zero()) {
        // split the constant so that "x - sqrt2 + 1/3" style output reparses
        if (!b.rational_part().is_zero() || b.terms().empty()) parts.push_back(b.rational_part().str());
        for (auto& [m, c] : b.terms()) parts.push_back(SymReal::monomial(*b.basis(), m, c).str());
    }
    return join_terms(parts);
}

std::shared_ptr<GlfNode> make(NodeKind k) {
    auto n = std::make_shared<GlfNode>();
    n->kind = k;
    return n;
}

void finish(GlfNode& n) {
    switch (n.kind) {
    case NodeKind::Linear:
        n.weight = 0;
        n.lin = n.a;
        n.ad = n.a.to_double();
        n.bd = n.b.to_double();
        n.key = linear_text(n.a, n.b);
        break;
    case NodeKind::Sum: {
        n.weight = 0;
        std::vector<std::string> parts;
        for (auto& c : n.children) {
            n.weight = std::max(n.weight, c->weight);
            n.lin += c->lin;
            parts.push_back(c->key);
        }
        n.key = join_terms(parts);
        break;
    }
    case NodeKind::Scale:
        n.weight = n.children[0]->weight;
        n.lin = n.a * n.children[0]->lin;
        n.ad = n.a.to_double();
        n.key = coef_prefix(n.a) + n.children[0]->key;
        break;
    case NodeKind::Floor:
        n.weight = n.children[0]->weight + 1;
        n.lin = n.children[0]->lin;
        n.key = "floor(" + n.children[0]->key + ")";
        break;
    case NodeKind::Frac:
        n.weight = n.children[0]->weight + 1;
        n.lin = SymReal();
        n.key = "frac(" + n.children[0]->key + ")";
        break;
    }
}

bool is_integer_linear(const GlfNode& n) {
    return n.kind == NodeKind::Linear && n.a.is_integer() && n.b.is_integer();
}

} // namespace

GlfExpr linear(const SymReal& a, const SymReal& b) {
    auto n = make(NodeKind::Linear);
    n->a = a;
    n->b = b;
    finish(*n);
    return n;
}

GlfExpr constant(const SymReal& b) { return linear(SymReal(), b); }
GlfExpr var() { return linear(SymReal(1), SymReal()); }

GlfExpr sum(std::vector<GlfExpr> terms) {
    std::vector<GlfExpr> flat;
    for (auto& t : terms) {
        if (t->kind == NodeKind::Sum)
            flat.insert(flat.end(), t->children.begin(), t->children.end());
        else
            flat.push_back(t);
    }
    SymReal la, lb;
    // core key -> (core, coefficient), ordered by key
    std::map<std::string, std::pair<GlfExpr, SymReal>> grouped;
    for (auto& t : flat) {
        if (t->kind == NodeKind::Linear) {
            la += t->a;
            lb += t->b;
            continue;
        }
        GlfExpr core = t;
        SymReal c(1);
        if (t->kind == NodeKind::Scale) {
            core = t->children[0];
            c = t->a;
        }
        auto it = grouped.find(core->key);
        if (it == grouped.end())
            grouped.emplace(core->key, std::make_pair(core, c));
        else
            it->second.second += c;
    }
    std::vector<GlfExpr> out;
    if (!la.is_zero() || !lb.is_zero()) out.push_back(linear(la, lb));
    for (auto& [k, pc] : grouped)
        if (!pc.second.is_zero()) out.push_back(scale(pc.second, pc.first));
    if (out.empty()) return constant(SymReal());
    if (out.size() == 1) return out[0];
    auto n = make(NodeKind::Sum);
    n->children = std::move(out);
    finish(*n);
    return n;
}

GlfExpr scale(const SymReal& c, const GlfExpr& e) {
    if (c.is_zero()) return constant(SymReal());
    if (c == SymReal(1)) return e;
    switch (e->kind) {
    case NodeKind::Linear:
        return linear(c * e->a, c * e->b);
    case NodeKind::Scale:
        return scale(c * e->a, e->children[0]);
    case NodeKind::Sum: {
        std::vector<GlfExpr> t;
        for (auto& ch : e->children) t.push_back(scale(c, ch));
        return sum(std::move(t));
    }
    default:
        break;
    }
    auto n = make(NodeKind::Scale);
    n->a = c;
    n->children = {e};
    finish(*n);
    return n;
}

GlfExpr floor_of(const GlfExpr& e) {
    if (e->kind == NodeKind::Linear && e->a.is_zero())
        return constant(SymReal(Rational(floor_symreal(e->b))));
    if (is_integer_linear(*e) || e->kind == NodeKind::Floor) return e;
    auto n = make(NodeKind::Floor);
    n->children = {e};
    finish(*n);
    return n;
}

GlfExpr frac_of(const GlfExpr& e) {
    if (e->kind == NodeKind::Linear && e->a.is_zero()) return constant(frac_symreal(e->b));
    if (is_integer_linear(*e) || e->kind == NodeKind::Floor) return constant(SymReal());
    if (e->kind == NodeKind::Frac) return e;
    auto n = make(NodeKind::Frac);
    n->children = {e};
    finish(*n);
    return n;
}

GlfExpr operator+(const GlfExpr& x, const GlfExpr& y) { return sum({x, y}); }
GlfExpr operator-(const GlfExpr& x, const GlfExpr& y) { return sum({x, scale(SymReal(-1), y)}); }
GlfExpr operator-(const GlfExpr& x) { return scale(SymReal(-1), x); }
GlfExpr operator*(const SymReal& c, const GlfExpr& e) { return scale(c, e); }

int weight(const GlfExpr& e) { return e->weight; }
SymReal linear_part(const GlfExpr& e) { return e->lin; }
bool is_bounded(const GlfExpr& e) { return e->lin.is_zero(); }

GlfExpr bounded_part(const GlfExpr& e) {
    switch (e->kind) {
    case NodeKind::Linear:
        return constant(e->b);
    case NodeKind::Sum: {
        std::vector<GlfExpr> t;
        for (auto& c : e->children) t.push_back(bounded_part(c));
        return sum(std::move(t));
    }
    case NodeKind::Scale:
        return scale(e->a, bounded_part(e->children[0]));
    case NodeKind::Floor:
        // [f] = f - {f}
        return bounded_part(e->children[0]) - frac_of(e->children[0]);
    case NodeKind::Frac:
        return e;
    }
    return e;
}

Interval bound_interval(const GlfExpr& e) {
    if (!e->lin.is_zero()) return Interval::whole();
    switch (e->kind) {
    case NodeKind::Linear:
        return Interval::around(e->b);
    case NodeKind::Frac:
        return Interval::half_open(Rational(0), Rational(1));
    case NodeKind::Floor:
        return bound_interval(e->children[0]).floor();
    case NodeKind::Scale:
        return bound_interval(e->children[0]).scaled(e->a);
    case NodeKind::Sum: {
        bool all = std::all_of(e->children.begin(), e->children.end(),
                               [](const GlfExpr& c) { return c->lin.is_zero(); });
        Interval r = Interval::point(Rational());
        for (auto& c : e->children) r = r + bound_interval(all ? c : bounded_part(c));
        return r;
    }
    }
    return Interval::whole();
}

GlfExpr compose(const GlfExpr& outer, const GlfExpr& inner) {
    switch (outer->kind) {
    case NodeKind::Linear:
        return sum({scale(outer->a, inner), constant(outer->b)});
    case NodeKind::Sum: {
        std::vector<GlfExpr> t;
        for (auto& c : outer->children) t.push_back(compose(c, inner));
        return sum(std::move(t));
    }
    case NodeKind::Scale:
        return scale(outer->a, compose(outer->children[0], inner));
    case NodeKind::Floor:
        return floor_of(compose(outer->children[0], inner));
    case NodeKind::Frac:
        return frac_of(compose(outer->children[0], inner));
    }
    return outer;
}

GlfExpr diff_derivative(const GlfExpr& e, const SymReal& h) {
    return compose(e, linear(SymReal(1), h)) - e;
}

GlfExpr lower_frac(const GlfExpr& e) {
    switch (e->kind) {
    case NodeKind::Linear:
        return e;
    case NodeKind::Sum: {
        std::vector<GlfExpr> t;
        for (auto& c : e->children) t.push_back(lower_frac(c));
        return sum(std::move(t));
    }
    case NodeKind::Scale:
        return scale(e->a, lower_frac(e->children[0]));
    case NodeKind::Floor:
        return floor_of(lower_frac(e->children[0]));
    case NodeKind::Frac: {
        GlfExpr f = lower_frac(e->children[0]);
        return f - floor_of(f);
    }
    }
    return e;
}

SymReal eval_exact(const GlfExpr& e, std::int64_t n) {
    switch (e->kind) {
    case NodeKind::Linear:
        return Rational(n) * e->a + e->b;
    case NodeKind::Sum: {
        SymReal s;
        for (auto& c : e->children) s += eval_exact(c, n);
        return s;
    }
    case NodeKind::Scale:
        return e->a * eval_exact(e->children[0], n);
    case NodeKind::Floor:
        return SymReal(Rational(floor_symreal(eval_exact(e->children[0], n))));
    case NodeKind::Frac:
        return frac_symreal(eval_exact(e->children[0], n));
    }
    return SymReal();
}

double eval_float(const GlfExpr& e, std::int64_t n) {
    switch (e->kind) {
    case NodeKind::Linear:
        return e->ad * static_cast<double>(n) + e->bd;
    case NodeKind::Sum: {
        double s = 0.0;
        for (auto& c : e->children) s += eval_float(c, n);
        return s;
    }
    case NodeKind::Scale:
        return e->ad * eval_float(e->children[0], n);
    case NodeKind::Floor:
    case NodeKind::Frac: {
        double v = eval_float(e->children[0], n);
        if (std::abs(v - std::nearbyint(v)) < 1e-6) {
            // too close to a jump for doubles
            SymReal x = eval_exact(e->children[0], n);
            auto f = floor_symreal(x);
            if (e->kind == NodeKind::Floor) return static_cast<double>(f);
            return (x - SymReal(Rational(f))).to_double();
        }
        double f = std::floor(v);
        return e->kind == NodeKind::Floor ? f : v - f;
    }
    }
    return 0.0;
}

std::int64_t eval_integer(const GlfExpr& e, std::int64_t n) {
    SymReal v = eval_exact(e, n);
    if (!v.is_integer())
        throw Error(ErrorKind::NotIntegerValued, to_string(e) + " at n=" + std::to_string(n) + " is " + v.str());
    return v.rational_part().num();
}

std::string to_string(const GlfExpr& e) { return e->key; }

bool certify_integer_valued(const GlfExpr& e, std::int64_t window) {
    for (std::int64_t n = -window; n <= window; ++n)
        if (!eval_exact(e, n).is_integer()) return false;
    return true;
}

} // namespace glerg
