#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "glerg/glf.hpp"
#include "glerg/systems.hpp"

namespace glerg {

struct IrrationalDecl {
    std::string name;
    std::string source; // quadratic(n), pi, custom("digits")
};

struct RuleDecl {
    std::string a, b;
    SymReal value;
};

struct LetDecl {
    std::string name;
    GlfExpr expr;
};

struct SystemDecl {
    std::string name;
    SystemSpec spec;
};

enum class CommandKind { Decompose, Rep, Limit, Density, CheckJoint, PrimeAvg, Gowers, Report };

const char* command_name(CommandKind k);

struct Command {
    CommandKind kind = CommandKind::Report;
    int line = 0;
    GlfExpr expr;              // decompose, rep, limit, density, gowers
    SymReal beta;              // limit
    Rational lo, hi;           // density: [lo, hi)
    std::string system;        // check-joint, prime-avg
    std::vector<GlSeq> seqs;   // check-joint, prime-avg
    int k = 2;                 // gowers
    std::int64_t N = 0;        // gowers
};

struct DslProgram {
    std::shared_ptr<IrrationalBasis> basis;
    std::vector<IrrationalDecl> irrationals;
    std::vector<RuleDecl> rules;
    std::vector<LetDecl> lets;
    std::vector<SystemDecl> systems;
    std::vector<Command> commands;

    const SystemSpec& system(const std::string& name) const; // UnknownName
};

// throws SyntaxError (1-based line and column) or UnknownName
DslProgram parse_program(const std::string& text);
// a single expression in x over the given basis
GlfExpr parse_expr(const std::string& text, const IrrationalBasis& basis = standard_basis());
SymReal parse_symreal(const std::string& text, const IrrationalBasis& basis = standard_basis());

std::string print_program(const DslProgram& p);
std::string print_command(const Command& c);
std::string print_system(const SystemDecl& s);

// same declarations, systems and commands up to canonical text
bool structurally_equal(const DslProgram& x, const DslProgram& y);

} // namespace glerg
