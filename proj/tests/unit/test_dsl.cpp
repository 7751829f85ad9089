#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <sstream>

#include "glerg/dsl.hpp"

using namespace glerg;

namespace {
const IrrationalBasis& B = standard_basis();

std::vector<std::string> corpus() {
    std::ifstream in(GLERG_TEST_DATA "/dsl_corpus.txt");
    REQUIRE(in);
    std::vector<std::string> out;
    std::string line, cur;
    while (std::getline(in, line)) {
        if (line == "----") {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += line + "\n";
        }
    }
    out.push_back(cur);
    return out;
}

SyntaxError syntax_error(const std::string& text) {
    try {
        parse_program(text);
    } catch (const SyntaxError& e) {
        return e;
    }
    FAIL("no syntax error for: " << text);
    return SyntaxError(0, 0, "");
}

ErrorKind kind_of(const std::string& text) {
    try {
        parse_program(text);
    } catch (const Error& e) {
        return e.kind();
    }
    return ErrorKind::InvalidArgument;
}
} // namespace

TEST_CASE("expressions") {
    auto e = parse_expr("floor(sqrt2*x + 1/3)");
    REQUIRE(e->kind == NodeKind::Floor);
    CHECK(structurally_equal(e, floor_of(linear(B("sqrt2"), SymReal(Rational(1, 3))))));

    e = parse_expr("frac(2*frac(sqrt2*x))");
    CHECK(e->kind == NodeKind::Frac);
    CHECK(weight(e) == 2);

    CHECK(structurally_equal(parse_expr("2x"), linear(SymReal(2), SymReal(0))));
    CHECK(structurally_equal(parse_expr("x*sqrt2 - (1)"), linear(B("sqrt2"), SymReal(-1))));
    CHECK(parse_symreal("3/2*sqrt2 - 1").str() == (SymReal(Rational(3, 2)) * B("sqrt2") - SymReal(1)).str());
    CHECK(parse_symreal("sqrt2*sqrt3").str() == B("sqrt6").str());
}

TEST_CASE("printed keys parse back to themselves") {
    for (const char* k : {"floor(sqrt2*x + 1/3)", "frac(2*frac(sqrt2*x))", "(3 - 1/2*sqrt2)*x + 2/7*sqrt6",
                          "x - floor(sqrt3*x)", "0", "x", "3/2*x + 3/2*frac(sqrt6*x + 1)"}) {
        CAPTURE(k);
        CHECK(to_string(parse_expr(k)) == k);
    }
}

TEST_CASE("diagnostics") {
    auto e = syntax_error("decompose floor(x");
    CHECK(e.line == 1);
    CHECK(e.col == 18);
    CHECK(e.expected == "')'");

    // the bare expression form reports the column within the expression
    try {
        parse_expr("floor(x");
        FAIL("accepted");
    } catch (const SyntaxError& s) {
        CHECK(s.col == 8);
        CHECK(s.expected == "')'");
    }

    e = syntax_error("report;\nrep x*x;");
    CHECK(e.line == 2);
    CHECK(e.col == 6);

    e = syntax_error("limit beta=x of x;");
    CHECK(e.col == 12);
    syntax_error("density of x in [0, 1];");
    syntax_error("system s { torus dim 2; T: alpha = sqrt2; }");
    syntax_error("irrational sqrt2 = quadratic(3);");
    syntax_error("let x = 1;");
    syntax_error("frobnicate;");
    syntax_error("rep 1/0;");

    CHECK(kind_of("rep y;") == ErrorKind::UnknownName);
    CHECK(kind_of("check-joint nowhere (T^(x));") == ErrorKind::UnknownName);
    CHECK(kind_of("system s { cyclic m 3; T: shift = 1; }\ncheck-joint s (S^(x));") == ErrorKind::UnknownName);
    CHECK(kind_of("system c { automorphism; A: matrix = [[2,1],[1,1]]; B: matrix = [[1,1],[0,1]]; }") ==
          ErrorKind::NonCommuting);
    CHECK(kind_of("system c { automorphism; A: matrix = [[2,0],[0,1]]; }") == ErrorKind::InvalidArgument);
}

TEST_CASE("declarations feed later statements") {
    auto p = parse_program("irrational s5 = quadratic(5);\nlet phi = floor(s5*x);\ndecompose 2*phi;\n");
    REQUIRE(p.commands.size() == 1);
    CHECK(to_string(p.commands[0].expr) == "2*floor(s5*x)");
    CHECK(p.basis->find("s5"));
    CHECK_FALSE(B.find("s5"));

    p = parse_program("system t { torus dim 2; T: alpha = (sqrt2, 1/3); }\ncheck-joint t (T^(x), T^(floor(sqrt3*x)));");
    CHECK(p.system("t").coords() == 2);
    REQUIRE(p.commands[0].seqs.size() == 2);
    CHECK(p.commands[0].seqs[1].str() == "T^(floor(sqrt3*x))");
}

TEST_CASE("round trip over the corpus") {
    auto texts = corpus();
    CHECK(texts.size() == 50);
    for (auto& t : texts) {
        CAPTURE(t);
        auto p = parse_program(t);
        auto printed = print_program(p);
        CAPTURE(printed);
        auto q = parse_program(printed);
        CHECK(structurally_equal(p, q));
        // printing is a fixed point after one pass
        CHECK(print_program(q) == printed);
    }
}
