#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "glerg/joint_ergodicity.hpp"

using namespace glerg;

namespace {
const IrrationalBasis& B = standard_basis();
SymReal s2() { return B("sqrt2"); }
SymReal s3() { return B("sqrt3"); }
SymReal s6() { return B("sqrt6"); }
GlfExpr x() { return var(); }
GlfExpr beatty(const SymReal& a) { return floor_of(linear(a, SymReal(0))); }
const Mat2 kCat{2, 1, 1, 1};

SystemSpec circle(const SymReal& a) { return torus_rotation("rot", 1, {{"T", {a}}}); }
SystemSpec two_rotations() { return torus_rotation("circ", 1, {{"T1", {s2()}}, {"T2", {s3()}}}); }
SystemSpec flip() { return cyclic_shift("flip", 2, {{"T", 1}}); }
SystemSpec cat() { return toral_automorphism("cat", {{"T", kCat}}); }

ErrorKind kind_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    return ErrorKind::InvalidArgument;
}
} // namespace

TEST_CASE("single sequences") {
    CHECK(check_single(circle(s2()), power("T", x())).decision == Decision::Ergodic);

    // alpha*beta = 1 lies in Z alpha + Z, so the limit is an explicit integral
    auto v = check_single(circle(Rational(1, 2) * s2()), power("T", beatty(s2())));
    CHECK(v.decision == Decision::NotErgodic);
    REQUIRE_FALSE(v.witnesses.empty());
    CHECK(v.witnesses[0].exact);
    CHECK(v.witnesses[0].method == "alfbet:in");
    CHECK(v.witnesses[0].value == doctest::Approx(0.3584).epsilon(1e-3));

    v = check_single(flip(), power("T", SymReal(2) * x()));
    CHECK(v.decision == Decision::NotErgodic);
    CHECK(v.witnesses[0].value == doctest::Approx(1.0));

    v = check_single(circle(SymReal(Rational(1, 3))), power("T", x()));
    CHECK(v.decision == Decision::NotErgodic);
    CHECK(v.witnesses[0].where == "base T");
    CHECK(v.witnesses[0].k == std::vector<std::int64_t>{3});

    CHECK(check_single(cat(), power("T", beatty(s2()))).decision == Decision::Ergodic);
    auto rot = toral_automorphism("r", {{"T", {0, -1, 1, 0}}});
    v = check_single(rot, power("T", x()));
    CHECK(v.decision == Decision::NotErgodic);
    CHECK(v.witnesses[0].method == "finite-orbit");

    CHECK(kind_of([] { check_single(circle(s2()), power("T", frac_of(linear(s2(), SymReal(0))))); }) ==
          ErrorKind::UnboundedRequired);
}

TEST_CASE("sequences with several handles") {
    auto sys = two_rotations();
    // T1^{-n} T2^{n} rotates by sqrt3 - sqrt2
    CHECK(check_sequence(sys, inverse_times(power("T1", x()), power("T2", x()))).decision == Decision::Ergodic);
    // identity sequence
    CHECK(check_sequence(flip(), GlSeq{}).decision == Decision::NotErgodic);
    CHECK(check_sequence(cat(), GlSeq{}).decision == Decision::NotErgodic);
    // bounded automorphism exponent
    auto v = check_sequence(cat(), power("T", floor_of(SymReal(2) * frac_of(linear(s2(), SymReal(0))))));
    CHECK(v.decision == Decision::NotErgodic);
    CHECK(v.witnesses[0].method == "bounded-exponent");
}

struct CatalogCase {
    std::string name;
    SystemSpec sys;
    std::vector<GlSeq> seqs;
    Decision expected;
};

std::vector<CatalogCase> catalog() {
    return {
        {"rotation (n, 2n)", circle(s2()), {power("T", x()), power("T", SymReal(2) * x())},
         Decision::NotJointlyErgodic},
        {"circle, shared floor(sqrt2 n)", two_rotations(), {power("T1", beatty(s2())), power("T2", beatty(s2()))},
         Decision::NotJointlyErgodic},
        {"circle, shared floor(sqrt6 n)", two_rotations(), {power("T1", beatty(s6())), power("T2", beatty(s6()))},
         Decision::JointlyErgodic},
        {"cat map", cat(), {power("T", beatty(s2())), power("T", beatty(s3()))}, Decision::JointlyErgodic},
        {"flip (n, n)", flip(), {power("T", x()), power("T", x())}, Decision::NotJointlyErgodic},
        {"flip (n, floor(sqrt2 n))", flip(), {power("T", x()), power("T", beatty(s2()))}, Decision::JointlyErgodic},
    };
}

TEST_CASE("catalog verdicts agree with empirical defects") {
    for (auto& c : catalog()) {
        CAPTURE(c.name);
        auto v = check_joint(c.sys, c.seqs);
        CHECK(v.decision == c.expected);
        FnBank bank = default_bank(c.sys, c.seqs.size(), c.sys.coords() == 1 ? 2 : 1);
        for (auto& t : witness_bank(c.sys, v)) bank.push_back(t);
        for (auto s : {FolnerSchedule::forward(), FolnerSchedule::window(1.0)}) {
            auto r = empirical_validate(c.sys, c.seqs, bank, v, s, 20000);
            CAPTURE(r.max_defect);
            CHECK(r.agrees);
            CHECK_FALSE(r.discrepancy);
        }
        // a jointly ergodic family has ergodic members
        if (v.decision == Decision::JointlyErgodic)
            for (auto& s : c.seqs) CHECK(check_single(c.sys, s).decision == Decision::Ergodic);
    }
}

TEST_CASE("rotation (n, 2n) witness is the relation k1 + 2 k2 = 0") {
    auto v = check_joint(circle(s2()), {power("T", x()), power("T", SymReal(2) * x())});
    REQUIRE_FALSE(v.witnesses.empty());
    auto& w = v.witnesses[0];
    CHECK(w.exact);
    CHECK(w.value == doctest::Approx(1.0));
    REQUIRE(w.fns.size() == 2);
    CHECK(w.fns[0][0] + 2 * w.fns[1][0] == 0);
}

TEST_CASE("spectral criterion") {
    auto sys = two_rotations();
    auto v = spec_criterion(sys, {"T1", "T2"}, beatty(s2()));
    CHECK(v.decision == Decision::NotJointlyErgodic);
    double best = 0.0;
    for (auto& w : v.witnesses) best = std::max(best, w.value);
    double expect = std::abs(2 * std::sin(std::numbers::pi * std::sqrt(2.0))) / (2 * std::numbers::pi * std::sqrt(2.0));
    CHECK(best == doctest::Approx(expect).epsilon(1e-9));
    // agrees with check_joint on the same family
    CHECK(check_joint(sys, {power("T1", beatty(s2())), power("T2", beatty(s2()))}).decision == v.decision);

    CHECK(spec_criterion(sys, {"T1", "T2"}, beatty(s6())).decision == Decision::JointlyErgodic);
    CHECK(spec_criterion(cat(), {"T"}, beatty(s2())).decision == Decision::JointlyErgodic);

    // a frequency with alpha*beta = 1/2: the limit vanishes but its square does not
    auto half = circle(Rational(1, 4) * s2());
    auto w = spec_criterion(half, {"T"}, beatty(s2()));
    CHECK(w.decision == Decision::NotJointlyErgodic);

    auto dep = torus_rotation("d", 1, {{"T1", {s2()}}, {"T2", {SymReal(2) * s2()}}});
    CHECK(kind_of([&] { spec_criterion(dep, {"T1", "T2"}, beatty(s3())); }) == ErrorKind::HypothesisFailed);
}

TEST_CASE("empty bank is trivially consistent") {
    auto v = check_joint(flip(), {power("T", x()), power("T", x())});
    auto r = empirical_validate(flip(), {power("T", x()), power("T", x())}, {}, v, FolnerSchedule::forward(), 100);
    CHECK(r.max_defect == 0.0);
    CHECK(r.agrees);
}

TEST_CASE("prime averages") {
    // rotation: T^p, T^{2p} with f1 = f2 = chi_1 has phase 3 sqrt2 p
    auto rot = circle(s2());
    auto chi = character(rot, {1});
    auto rep = prime_joint_check(rot, {power("T", x()), power("T", SymReal(2) * x())}, {{single(chi), single(chi)}},
                                 100000);
    CHECK_FALSE(rep.hypothesis_ok);
    CHECK(rep.max_defect < 0.05);

    // cat map T^p, T^{2p}: hypothesis holds for every W, r
    auto c = cat();
    auto f = character(c, {1, 0});
    rep = prime_joint_check(c, {power("T", x()), power("T", SymReal(2) * x())},
                            default_bank(c, 2, 1), 100000);
    CHECK(rep.hypothesis_ok);
    CHECK(rep.max_defect < 0.05);
    CHECK(rep.consistent);

    // flip: T(2n+1) = T is not ergodic and the prime limit is T f1 int f2
    auto fl = flip();
    auto x1 = character(fl, {1});
    std::vector<GlSeq> seqs{power("T", x()), power("T", beatty(s2()))};
    std::vector<CharacterSum> fns{single(x1), constant_sum(fl) + single(x1)};
    rep = prime_joint_check(fl, seqs, {fns}, 100000);
    CHECK_FALSE(rep.hypothesis_ok);
    CHECK(rep.max_defect > 0.4);
    auto avg = average_combination(fl, seqs, fns, prime_domain(100000));
    CHECK(l2_distance(avg, combination_of(fl, single(x1, -1.0))) < 0.05);

    // no sequences
    auto none = average_combination(rot, {}, {}, prime_domain(100));
    CHECK(l2_distance(none, combination_of(rot, constant_sum(rot))) == 0.0);
}
