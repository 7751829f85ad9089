#pragma once

// Random GL expressions over {sqrt2, sqrt3, rationals} for property tests.

#include <random>

#include "glerg/glf.hpp"

namespace glerg::testing {

class RandomGlf {
public:
    explicit RandomGlf(std::uint64_t seed) : rng_(seed) {}

    SymReal coef() {
        const auto& B = standard_basis();
        std::uniform_int_distribution<int> p(-5, 5), q(1, 4), kind(0, 3);
        Rational r(p(rng_), q(rng_));
        switch (kind(rng_)) {
        case 0: return SymReal(r);
        case 1: return r * B("sqrt2");
        case 2: return r * B("sqrt3");
        default: return SymReal(Rational(p(rng_), q(rng_))) + r * B("sqrt2");
        }
    }

    SymReal nonzero_coef() {
        for (;;) {
            SymReal c = coef();
            if (!c.is_zero()) return c;
        }
    }

    // weight <= depth
    GlfExpr expr(int depth) {
        std::uniform_int_distribution<int> pick(0, depth == 0 ? 0 : 5);
        switch (pick(rng_)) {
        case 0: return linear(coef(), coef());
        case 1: return expr(depth) + expr(depth - 1);
        case 2: return nonzero_coef() * expr(depth);
        case 3: return floor_of(expr(depth - 1));
        case 4: return frac_of(expr(depth - 1));
        default: return nonzero_coef() * frac_of(expr(depth - 1)) + linear(coef(), coef());
        }
    }

    GlfExpr bounded(int depth) {
        GlfExpr e = expr(depth);
        return bounded_part(e);
    }

    std::mt19937_64& rng() { return rng_; }

private:
    std::mt19937_64 rng_;
};

} // namespace glerg::testing
