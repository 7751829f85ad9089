#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "../common/random_glf.hpp"
#include "glerg/glf.hpp"

using namespace glerg;

namespace {
const IrrationalBasis& B = standard_basis();
SymReal s2() { return B("sqrt2"); }
SymReal s3() { return B("sqrt3"); }
SymReal q(std::int64_t a, std::int64_t b = 1) { return SymReal(Rational(a, b)); }
GlfExpr lin(const SymReal& a, const SymReal& b = SymReal()) { return linear(a, b); }
} // namespace

TEST_CASE("weight") {
    CHECK(weight(lin(s2(), q(1, 3))) == 0);
    CHECK(weight(frac_of(lin(s2()))) == 1);
    // a1{a2[a3{a4 x+a5}+a6]+a7[a8 x+a9]}+a10 x+a11 with assorted coefficients
    SymReal a[12];
    for (int i = 1; i <= 11; ++i) a[i] = (i % 2 ? s2() : s3()) + q(i, 7);
    GlfExpr inner = floor_of(a[3] * frac_of(lin(a[4], a[5])) + constant(a[6]));
    GlfExpr e = a[1] * frac_of(a[2] * inner + a[7] * floor_of(lin(a[8], a[9]))) + lin(a[10], a[11]);
    CHECK(weight(e) == 3);
    GlfExpr x = frac_of(lin(s2()));
    CHECK(weight(x + floor_of(x)) == std::max(weight(x), weight(floor_of(x))));
    CHECK(weight(floor_of(x)) == weight(x) + 1);
}

TEST_CASE("linear part") {
    CHECK(linear_part(floor_of(lin(s2()))) == s2());
    CHECK(linear_part(sum({q(3) * frac_of(lin(q(1, 2))), lin(q(5))})) == q(5));
    CHECK(linear_part(lin(q(0), q(7))) == q(0));
}

TEST_CASE("bounded part") {
    GlfExpr f = floor_of(lin(s2()));
    CHECK(structurally_equal(bounded_part(f), scale(q(-1), frac_of(lin(s2())))));
    CHECK(structurally_equal(bounded_part(lin(q(3), q(2))), lin(q(0), q(2))));
    GlfExpr fr = frac_of(lin(s2()));
    CHECK(structurally_equal(bounded_part(fr), fr));
}

TEST_CASE("is_bounded") {
    CHECK(is_bounded(frac_of(lin(s2()))));
    CHECK_FALSE(is_bounded(floor_of(lin(s2()))));
    GlfExpr e = sum({floor_of(lin(q(1))), scale(q(-1), lin(q(1)))});
    CHECK(is_bounded(e));
    for (std::int64_t n = -1000; n <= 1000; ++n) CHECK(eval_exact(e, n).is_zero());
    // a genuinely irrational cancellation
    GlfExpr g = floor_of(lin(s2())) - lin(s2());
    CHECK(is_bounded(g));
    for (std::int64_t n = -1000; n <= 1000; n += 7) {
        double v = eval_float(g, n);
        CHECK(v <= 0.0);
        CHECK(v > -1.0);
    }
}

TEST_CASE("bound_interval") {
    Interval i = bound_interval(frac_of(lin(s2(), q(1, 3))));
    CHECK(i.str() == "[0, 1)");
    GlfExpr e1 = frac_of(lin(s2())), e2 = frac_of(lin(s3()));
    CHECK(bound_interval(e1 + e2).str() == "[0, 2)");
    CHECK(bound_interval(q(-2) * e1).str() == "(-2, 0]");
    CHECK_FALSE(bound_interval(floor_of(lin(s2()))).is_bounded());
    // floor of a bounded thing
    Interval f = bound_interval(floor_of(q(5, 2) * e1));
    CHECK(f.lo == Rational(0));
    CHECK(f.hi == Rational(2));
}

TEST_CASE("diff_derivative") {
    GlfExpr e = lin(s2(), q(1));
    CHECK(structurally_equal(diff_derivative(e, q(3)), constant(q(3) * s2())));
    GlfExpr f = floor_of(lin(s2()));
    GlfExpr d = diff_derivative(f, q(1));
    CHECK(is_bounded(d));
    for (std::int64_t n = 0; n <= 10000; ++n) {
        SymReal v = eval_exact(d, n);
        CHECK((v == q(1) || v == q(2)));
    }
}

TEST_CASE("compose") {
    testing::RandomGlf gen(3);
    GlfExpr e = gen.expr(2);
    CHECK(structurally_equal(compose(var(), e), e));
    GlfExpr f = floor_of(lin(s2()));
    for (int W : {1, 2, 6}) {
        for (int r = 0; r < W; ++r) {
            GlfExpr c = compose(f, lin(q(W), q(r)));
            for (std::int64_t n = 0; n <= 1000; ++n) {
                double want = std::floor(std::sqrt(2.0) * static_cast<double>(W * n + r));
                CHECK(eval_exact(c, n) == q(static_cast<std::int64_t>(want)));
            }
        }
    }
    for (int i = 0; i < 30; ++i) {
        GlfExpr a = gen.expr(2), b = gen.expr(1);
        CHECK(weight(compose(a, b)) <= weight(a) + weight(b));
    }
}

TEST_CASE("eval_exact and eval_float") {
    GlfExpr f = floor_of(lin(s2()));
    CHECK(eval_exact(f, 1) == q(1));
    CHECK(eval_exact(frac_of(lin(q(1, 3))), 4) == q(1, 3));
    CHECK(eval_exact(f, 10) == q(14));
    CHECK(std::abs(eval_float(f, 10) - 14.0) < 1e-9);
    CHECK(eval_float(constant(q(5)), 12345) == 5.0);
    GlfExpr a = frac_of(lin(s3())), b = floor_of(lin(s2(), q(1, 2)));
    for (std::int64_t n = -50; n < 50; ++n)
        CHECK(std::abs(eval_float(a + b, n) - eval_float(a, n) - eval_float(b, n)) < 1e-9);
}

TEST_CASE("properties on random expressions") {
    testing::RandomGlf gen(42);
    for (int i = 0; i < 40; ++i) {
        GlfExpr e = gen.expr(3);
        SymReal a = linear_part(e);
        GlfExpr psi = bounded_part(e);
        CHECK(is_bounded(psi));
        Interval I = bound_interval(psi);
        REQUIRE(I.is_bounded());
        GlfExpr fl = floor_of(e), fr = frac_of(e);
        GlfExpr de = diff_derivative(e, q(2));
        GlfExpr sh = compose(e, lin(q(1), q(2)));
        for (std::int64_t n = -300; n <= 300; n += 3) {
            SymReal v = eval_exact(e, n);
            // uniqueness of the decomposition
            CHECK(I.contains(v - Rational(n) * a));
            CHECK(eval_exact(psi, n) == v - Rational(n) * a);
            // Frac/Floor coherence
            CHECK(eval_exact(fr, n) == v - eval_exact(fl, n));
            CHECK(eval_exact(de, n) == eval_exact(sh, n) - v);
            double x = eval_float(e, n);
            CHECK(std::abs(x - v.to_double()) < 1e-9 * (1.0 + std::abs(x)));
        }
        // lowering Frac keeps values
        GlfExpr low = lower_frac(e);
        for (std::int64_t n = -20; n <= 20; ++n) CHECK(eval_exact(low, n) == eval_exact(e, n));
    }
}

TEST_CASE("printing is canonical") {
    GlfExpr e = floor_of(lin(s2(), q(1, 3)));
    CHECK(to_string(e) == "floor(sqrt2*x + 1/3)");
    GlfExpr f = frac_of(q(2) * frac_of(lin(s2())));
    CHECK(to_string(f) == "frac(2*frac(sqrt2*x))");
    CHECK(to_string(lin(s2() + q(1), q(-1))) == "(1 + sqrt2)*x - 1");
    CHECK(to_string(q(-1) * frac_of(lin(s3()))) == "-frac(sqrt3*x)");
}
