#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "../common/random_glf.hpp"
#include "glerg/lp.hpp"
#include "glerg/torus.hpp"

using namespace glerg;

namespace {
const IrrationalBasis& B = standard_basis();
SymReal s2() { return B("sqrt2"); }
SymReal s3() { return B("sqrt3"); }
SymReal q(std::int64_t a, std::int64_t b = 1) { return SymReal(Rational(a, b)); }

std::complex<double> direct_average(const GlfExpr& phi, double beta, std::int64_t N) {
    std::complex<double> s = 0.0;
    for (std::int64_t n = 1; n <= N; ++n) {
        double x = beta * eval_float(phi, n);
        x -= std::floor(x);
        s += std::polar(1.0, 2 * std::numbers::pi * x);
    }
    return s / static_cast<double>(N);
}
} // namespace

TEST_CASE("lp on the unit box") {
    // x + y >= 1.5, maximise x - y
    Eigen::MatrixXd N(1, 2);
    N << 1, 1;
    Eigen::VectorXd off(1), obj(2);
    off << -1.5;
    obj << 1, -1;
    auto r = lp::maximize(N, off, obj, 0.0);
    CHECK(r.feasible);
    CHECK(r.value == doctest::Approx(0.5));
    off << -2.5;
    CHECK_FALSE(lp::feasible(N, off, 0.0));
    off << -2.0;
    CHECK(lp::feasible(N, off, 1e-12));
}

TEST_CASE("base cases") {
    TorusRep r = build_rep(frac_of(linear(s2(), SymReal())));
    CHECK(r.dim() == 1);
    CHECK(r.u[0] == s2() - q(1));
    CHECK(r.pieces.size() == 1);
    CHECK(r.slope[0][0] == q(1));

    TorusRep two = build_rep(frac_of(linear(s2(), SymReal())) + frac_of(linear(s3(), SymReal())));
    CHECK(two.dim() == 2);
    CHECK(two.pieces.size() == 1);

    TorusRep c = build_rep(constant(q(7, 3)));
    CHECK(c.dim() == 0);
    CHECK(eval_rep_exact(c, 12345) == q(7, 3));
}

TEST_CASE("frac of a doubled frac splits at 1/2") {
    GlfExpr phi = frac_of(q(2) * frac_of(linear(s2(), SymReal())));
    TorusRep r = build_rep(phi);
    CHECK(r.dim() == 1);
    CHECK(r.pieces.size() == 2);
    for (std::int64_t n = 0; n <= 1000; ++n) CHECK(eval_rep_exact(r, n) == eval_exact(phi, n));
    // pieces are [0, 1/2) and [1/2, 1)
    CHECK(locate(r, {q(1, 2)}) != locate(r, {q(1, 4)}));
    CHECK(locate(r, {q(1, 2)}) == locate(r, {q(3, 4)}));
}

TEST_CASE("shifted base case has the jump inside the cube") {
    GlfExpr phi = frac_of(linear(s3(), q(1, 3)));
    TorusRep r = build_rep(phi);
    CHECK(r.pieces.size() == 2);
    for (std::int64_t n = -300; n <= 300; ++n) CHECK(eval_rep_exact(r, n) == eval_exact(phi, n));
}

TEST_CASE("measure-zero pieces are kept") {
    GlfExpr phi = frac_of(linear(s2(), SymReal())) + frac_of(linear(-s2(), SymReal()));
    TorusRep r = build_rep(phi);
    CHECK(eval_rep_exact(r, 0) == q(0));
    for (std::int64_t n = 1; n <= 100; ++n) CHECK(eval_rep_exact(r, n) == q(1));
}

TEST_CASE("rational and mixed coordinates") {
    GlfExpr phi = frac_of(linear(q(1, 4), SymReal())) + floor_of(q(3) * frac_of(linear(s2() + q(1, 6), q(1, 5))));
    TorusRep r = build_rep(phi);
    for (std::int64_t n = -500; n <= 500; ++n) CHECK(eval_rep_exact(r, n) == eval_exact(phi, n));
}

TEST_CASE("representation fidelity on random bounded expressions") {
    testing::RandomGlf gen(2024);
    int built = 0;
    std::size_t max_pieces = 0;
    while (built < 50) {
        GlfExpr phi = gen.bounded(3);
        TorusRep r;
        try {
            r = build_rep(phi);
        } catch (const Error& e) {
            REQUIRE(e.kind() == ErrorKind::UnsupportedProduct);
            continue;
        }
        ++built;
        max_pieces = std::max(max_pieces, r.pieces.size());
        for (std::int64_t n = -1000; n <= 1000; ++n) {
            SymReal want = eval_exact(phi, n);
            SymReal got = eval_rep_exact(r, n);
            if (got != want) FAIL_CHECK(to_string(phi) << " at " << n << ": " << got.str() << " vs " << want.str());
        }
        for (std::int64_t n = -1000; n <= 1000; n += 37) CHECK(locate_all(r, orbit_point(r, n)).size() == 1);
    }
    MESSAGE("largest rep: " << max_pieces << " pieces");
    CHECK(max_pieces < 10000);
}

TEST_CASE("piece cap") {
    GlfExpr phi = frac_of(q(50) * frac_of(linear(s2(), SymReal())) + q(50) * frac_of(linear(s3(), SymReal())));
    RepOptions opt;
    opt.max_pieces = 20;
    try {
        build_rep(phi, opt);
        FAIL("expected PieceExplosion");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::PieceExplosion);
    }
}

TEST_CASE("json dump") {
    auto j = rep_to_json(build_rep(frac_of(q(2) * frac_of(linear(s2(), SymReal())))));
    CHECK(j["dim"] == 1);
    CHECK(j["u"][0]["symbolic"] == "-1 + sqrt2");
    CHECK(j["pieces"].size() == 2);
    CHECK(j["pieces"][0].contains("constraints"));
}

TEST_CASE("closure groups") {
    ClosureGroup full = closure_group(std::vector<SymReal>{s2() - q(1)});
    CHECK(full.subtorus_dim() == 1);
    CHECK(full.lattice.basis.empty());

    ClosureGroup cyc = closure_group(std::vector<SymReal>{q(1, 3)});
    CHECK(cyc.subtorus_dim() == 0);
    CHECK(cyc.D == 3);

    ClosureGroup line = closure_group(std::vector<SymReal>{s2() - q(1), q(2) * s2() - q(2)});
    CHECK(line.subtorus_dim() == 1);
    REQUIRE(line.lattice.basis.size() == 1);
    auto m = line.lattice.basis[0];
    CHECK(std::abs(m[0]) == 2);
    CHECK(m[0] * m[1] == -2);

    ClosureGroup mixed = closure_group(std::vector<SymReal>{s2() + q(1, 4), Rational(1, 2) * s2(), q(1, 6)});
    for (int i = 1; i <= 2000; ++i) {
        Eigen::VectorXd s = halton(i, mixed.subtorus_dim());
        for (std::int64_t j = 0; j < mixed.D; ++j) CHECK(mixed.satisfies_relations(mixed.point(j, s)));
    }
    // orbit points lie on Z
    for (std::int64_t n = 0; n < 200; ++n) {
        Eigen::VectorXd w(3);
        for (int k = 0; k < 3; ++k) w(k) = frac_symreal(Rational(n) * mixed.u[k]).to_double();
        CHECK(mixed.satisfies_relations(w));
    }
}

TEST_CASE("mean values") {
    Estimate m = mean_value(build_rep(frac_of(linear(s2(), SymReal()))));
    CHECK(std::abs(m.value.real() - 0.5) < 0.01);
    CHECK(m.std_error < 0.01);
    CHECK(mean_value(build_rep(constant(q(5, 2)))).value.real() == 2.5);
    Estimate cyc = mean_value(build_rep(frac_of(linear(q(1, 4), SymReal()))));
    CHECK(cyc.exact);
    CHECK(cyc.value.real() == 0.375);
}

TEST_CASE("polygon integration agrees with sampling") {
    std::vector<GlfExpr> cases{
        frac_of(linear(s2(), q(1, 3))),
        frac_of(q(2) * frac_of(linear(s2(), SymReal()))),
        frac_of(frac_of(linear(s2(), SymReal())) + frac_of(linear(s3(), SymReal()))),
        floor_of(q(3) * frac_of(linear(s2(), SymReal())) - q(2) * frac_of(linear(s3(), q(1, 2)))),
    };
    for (auto& phi : cases) {
        TorusRep r = build_rep(phi);
        double exact = mean_value_polygonal(r);
        Estimate est = mean_value(r);
        CHECK(std::abs(exact - est.value.real()) < 5e-3);
        // and against the orbit average
        double s = 0.0;
        for (std::int64_t n = 1; n <= 200000; ++n) s += eval_float(phi, n);
        CHECK(std::abs(exact - s / 200000) < 5e-3);
    }
}

TEST_CASE("char_limit") {
    auto lin = char_limit(var(), q(1, 2));
    CHECK(lin.exact);
    CHECK(std::abs(lin.value) == 0.0);

    GlfExpr beatty = floor_of(linear(s2(), SymReal()));
    auto in = char_limit(beatty, s2());
    CHECK(in.method == "alfbet:in");
    CHECK(std::abs(in.value) > 0.1);
    auto direct = direct_average(beatty, std::sqrt(2.0), 1000000);
    CHECK(std::abs(in.value - direct) < 0.01);

    auto out = char_limit(beatty, s3());
    CHECK(out.method == "alfbet:out");
    CHECK(std::abs(out.value) == 0.0);
    CHECK(std::abs(direct_average(beatty, std::sqrt(3.0), 1000000)) < 0.01);

    auto half = char_limit(beatty, q(1, 2));
    CHECK(std::abs(half.value) == 0.0);
}

TEST_CASE("char_limit numeric path matches orbit averages") {
    std::vector<std::pair<GlfExpr, SymReal>> cases{
        {floor_of(linear(s2(), q(1, 3))), s2()},
        {floor_of(linear(s2(), SymReal())) + floor_of(linear(s3(), SymReal())), Rational(1, 2) * s2()},
        {floor_of(q(2) * frac_of(linear(s3(), SymReal()))) + var(), q(1, 3)},
        {floor_of(linear(q(1, 3), SymReal())), q(1, 2)},
    };
    for (auto& [phi, beta] : cases) {
        auto est = char_limit(phi, beta);
        auto direct = direct_average(phi, beta.to_double(), 1000000);
        CHECK_MESSAGE(std::abs(est.value - direct) < 3e-2, to_string(phi) << " " << est.value << " " << direct);
    }
}

TEST_CASE("besicovitch approximation") {
    auto c = besicovitch_approx(constant(q(3)), 1e-9);
    CHECK(c.l1_error < 1e-12);
    CHECK(c.terms.size() == 1);

    auto saw = besicovitch_approx(frac_of(linear(s2(), SymReal())), 0.1);
    CHECK(saw.l1_error < 0.1);
    // independent recount of the error
    double err = 0.0;
    for (std::int64_t n = 0; n < 20000; ++n)
        err += std::abs(eval_float(frac_of(linear(s2(), SymReal())), n) - saw(n).real());
    CHECK(err / 20000 < 0.1);

    auto two = besicovitch_approx(frac_of(linear(q(1, 2), SymReal())), 0.01);
    CHECK(two.terms.size() == 2);
    CHECK(two.l1_error < 1e-12);
    CHECK(two(3).real() == doctest::Approx(0.5));

    BesicovitchOptions tight;
    tight.max_terms = 9;
    CHECK_THROWS_AS(besicovitch_approx(frac_of(linear(s2(), SymReal())), 1e-4, tight), Error);
}

TEST_CASE("almost linearity") {
    auto lin = almost_linearity_witness({linear(s2(), q(2, 3))}, 0.01);
    CHECK(lin.ok);
    CHECK(lin.C[0] == q(-2, 3));
    for (double d : lin.density) CHECK(d == 1.0);

    GlfExpr b2 = floor_of(linear(s2(), SymReal())), b3 = floor_of(linear(s3(), SymReal()));
    auto one = almost_linearity_witness({b2}, 0.1);
    CHECK(one.ok);
    REQUIRE_FALSE(one.hs.empty());
    for (double d : one.density) CHECK(d > 0.9);
    // recount one h exactly
    std::int64_t h = one.hs.front();
    CHECK(one.window.contains(one.rep, h));
    std::int64_t good = 0;
    for (std::int64_t n = 0; n < 20000; ++n)
        good += eval_exact(b2, n + h) == eval_exact(b2, n) + eval_exact(b2, h) + one.C[0];
    CHECK(good > 0.9 * 20000);

    auto joint = almost_linearity_witness({b2, b3}, 0.2);
    CHECK(joint.ok);
    REQUIRE_FALSE(joint.hs.empty());
    for (double d : joint.density) CHECK(d > 0.8);
}
