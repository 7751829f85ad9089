#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "glerg/dsl.hpp"
#include "glerg/run.hpp"

using namespace glerg;

namespace {

std::string read_program(const std::string& file, const std::string& inline_text) {
    if (!inline_text.empty()) return inline_text;
    if (file == "-") {
        std::stringstream ss;
        ss << std::cin.rdbuf();
        return ss.str();
    }
    std::ifstream in(file);
    if (!in) throw Error(ErrorKind::InvalidArgument, "cannot read " + file);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"glerg: generalized linear functions and joint ergodicity experiments"};
    app.require_subcommand(1);
    app.fallthrough();

    RunOptions opt;
    app.add_option("--seed", opt.seed, "seed for quasi-Monte Carlo shifts")->capture_default_str();
    app.add_option("--n", opt.n, "averaging length N")->capture_default_str()->check(CLI::PositiveNumber);
    app.add_option("--folner", opt.folner, "forward | window[:drift]")->capture_default_str();
    app.add_option("--freq-cutoff", opt.freq_cutoff, "|k| bound per coordinate")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    std::string out = "out";
    app.add_option("--out", out, "output directory")->capture_default_str();

    std::string file = "-", text;
    auto* run = app.add_subcommand("run", "run every command of a program");
    auto* cj = app.add_subcommand("check-joint", "run the check-joint commands; exit 0 jointly ergodic, 2 not, 3 inconclusive");
    auto* print = app.add_subcommand("print", "print a program in canonical form");
    for (auto* sc : {run, cj, print}) {
        sc->add_option("program", file, "program file, - for stdin");
        sc->add_option("-e,--eval", text, "program text");
    }

    CLI11_PARSE(app, argc, argv);
    opt.out = out;

    try {
        DslProgram prog = parse_program(read_program(file, text));
        if (*print) {
            std::cout << print_program(prog);
            return 0;
        }
        if (*run) return run_program(prog, opt, std::cout).exit_code;

        // check-joint: keep only those commands
        std::vector<Command> kept;
        for (auto& c : prog.commands)
            if (c.kind == CommandKind::CheckJoint) kept.push_back(c);
        if (kept.empty()) {
            std::cerr << "no check-joint command in program\n";
            return 1;
        }
        prog.commands = kept;
        auto r = run_program(prog, opt, std::cout);
        if (r.exit_code) return r.exit_code;
        int code = kExitJointlyErgodic;
        for (auto& c : r.results) code = std::max(code, c.exit_code);
        return code;
    } catch (const SyntaxError& e) {
        std::cerr << file << ":" << e.line << ":" << e.col << ": syntax error: expected " << e.expected << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
