#include "glerg/run.hpp"

#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>

#include "glerg/averaging.hpp"
#include "glerg/indicator.hpp"
#include "glerg/joint_ergodicity.hpp"
#include "glerg/torus.hpp"

namespace glerg {

using nlohmann::json;

json rounded(json j) {
    if (j.is_number_float()) {
        double v = j.get<double>();
        if (!std::isfinite(v)) return nullptr;
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.12g", v);
        return std::stod(buf);
    }
    if (j.is_array() || j.is_object())
        for (auto& x : j) x = rounded(x);
    return j;
}

std::string dump_json(const json& j) { return rounded(j).dump(2) + "\n"; }

void write_atomic(const std::filesystem::path& path, const std::string& content) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw Error(ErrorKind::InvalidArgument, "cannot write " + tmp.string());
        f << content;
        if (!f.flush()) throw Error(ErrorKind::InvalidArgument, "cannot write " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

namespace {

json complex_json(std::complex<double> z) { return {{"re", z.real()}, {"im", z.imag()}}; }

std::vector<std::int64_t> trace_levels(std::int64_t n, int levels) {
    std::vector<std::int64_t> Ns;
    for (int j = levels - 1; j >= 0; --j) {
        std::int64_t N = n >> j;
        if (N >= 1 && (Ns.empty() || N > Ns.back())) Ns.push_back(N);
    }
    return Ns;
}

json witness_json(const Witness& w) {
    return {{"where", w.where}, {"k", w.k},           {"fns", w.fns},
            {"frequency", w.frequency}, {"value", w.value}, {"exact", w.exact}, {"method", w.method}};
}

int verdict_exit(Decision d) {
    switch (d) {
    case Decision::Ergodic:
    case Decision::JointlyErgodic: return kExitJointlyErgodic;
    case Decision::NotErgodic:
    case Decision::NotJointlyErgodic: return kExitNotJointlyErgodic;
    case Decision::Inconclusive: return kExitInconclusive;
    }
    return kExitInconclusive;
}

CheckOptions check_options(const RunOptions& opt) {
    CheckOptions co;
    co.freq_cutoff = opt.freq_cutoff;
    co.sampler.seed = opt.seed;
    return co;
}

void run_decompose(const Command& c, CommandResult& r) {
    auto lin = linear_part(c.expr);
    auto psi = bounded_part(c.expr);
    r.record["linear_part"] = lin.str();
    r.record["bounded_part"] = to_string(psi);
    r.record["weight"] = weight(c.expr);
    r.record["bound_interval"] = bound_interval(psi).str();
    r.summary = lin.str() + "*x + " + to_string(psi) + ", bounded part in " + bound_interval(psi).str();
}

void run_rep(const Command& c, CommandResult& r) {
    auto psi = bounded_part(c.expr);
    TorusRep rep = build_rep(psi);
    // spot check against direct evaluation
    int mismatches = 0;
    for (std::int64_t n = -100; n <= 100; ++n)
        if (!(eval_rep_exact(rep, n) == eval_exact(psi, n))) ++mismatches;
    r.record["linear_part"] = linear_part(c.expr).str();
    r.record["bounded_part"] = to_string(psi);
    r.record["rep"] = rep_to_json(rep);
    r.record["checked"] = {{"from", -100}, {"to", 100}, {"mismatches", mismatches}};
    r.summary = "torus dim " + std::to_string(rep.dim()) + ", " + std::to_string(rep.pieces.size()) +
                " pieces, " + std::to_string(mismatches) + " mismatches on [-100, 100]";
    if (mismatches) r.exit_code = 1;
}

void run_limit(const Command& c, const RunOptions& opt, CommandResult& r) {
    SamplerOptions so;
    so.seed = opt.seed;
    Estimate e = char_limit(c.expr, c.beta, so);
    r.record["beta"] = c.beta.str();
    r.record["exact"] = e.exact ? complex_json(e.value) : json(nullptr);
    r.record["numeric"] = complex_json(e.value);
    r.record["abs"] = std::abs(e.value);
    r.record["std_error"] = e.std_error;
    r.record["certificate"] = e.method;

    auto s = FolnerSchedule::parse(opt.folner);
    double b = c.beta.to_double();
    auto trace = convergence_trace(
        [&](std::int64_t N) {
            return cesaro_avg(
                [&](std::int64_t n) {
                    return std::polar(1.0, 2 * std::numbers::pi * std::fmod(b * eval_float(c.expr, n), 1.0));
                },
                s, N);
        },
        trace_levels(opt.n, 8));
    r.csv = trace_csv(trace);
    r.record["empirical"] = complex_json(trace.back().estimate);

    char buf[128];
    std::snprintf(buf, sizeof buf, "|limit| = %.6g (%s%s)", std::abs(e.value), e.method.c_str(),
                  e.exact ? ", exact" : "");
    r.summary = buf;
}

void run_density(const Command& c, const RunOptions& opt, CommandResult& r) {
    if (!(c.lo < c.hi)) throw Error(ErrorKind::InvalidArgument, "empty interval [" + c.lo.str() + ", " + c.hi.str() + ")");
    r.record["interval"] = "[" + c.lo.str() + ", " + c.hi.str() + ")";
    auto s = FolnerSchedule::parse(opt.folner);
    double lo = c.lo.to_double(), hi = c.hi.to_double();
    auto trace = convergence_trace(
        [&](std::int64_t N) {
            return std::complex<double>(density_est(
                [&](std::int64_t n) {
                    double v = eval_float(c.expr, n);
                    return v >= lo && v < hi;
                },
                s, N));
        },
        trace_levels(opt.n, 8));
    r.csv = trace_csv(trace);
    double emp = trace.back().estimate.real();
    r.record["empirical"] = emp;

    if (is_bounded(c.expr)) {
        UglExpr ind = indicator_box({c.expr}, {Interval::half_open(c.lo, c.hi)});
        SamplerOptions so;
        so.seed = opt.seed;
        Estimate e = mean_value(build_rep(ind.expr), so);
        r.record["density"] = e.value.real();
        r.record["std_error"] = e.std_error;
        r.record["method"] = e.method;
        char buf[128];
        std::snprintf(buf, sizeof buf, "density %.6g (%s), empirical %.6g", e.value.real(), e.method.c_str(), emp);
        r.summary = buf;
    } else {
        // unbounded: only the empirical side
        r.record["density"] = nullptr;
        char buf[96];
        std::snprintf(buf, sizeof buf, "empirical density %.6g (unbounded expression)", emp);
        r.summary = buf;
    }
}

void run_gowers(const Command& c, CommandResult& r) {
    if (c.k < 1 || c.N < 1) throw Error(ErrorKind::InvalidArgument, "gowers needs k >= 1 and N >= 1");
    if (c.N > 4096 || (c.k >= 3 && c.N > 256))
        throw Error(ErrorKind::ComplexityRefusal, "gowers k=" + std::to_string(c.k) + " N=" + std::to_string(c.N));
    std::vector<double> b(static_cast<std::size_t>(c.N));
    for (std::int64_t n = 1; n <= c.N; ++n) b[n - 1] = eval_float(c.expr, n);
    double v = gowers_norm(b, c.k);
    r.record["k"] = c.k;
    r.record["N"] = c.N;
    r.record["value"] = v;
    char buf[64];
    std::snprintf(buf, sizeof buf, "U^%d[%lld] = %.9g", c.k, static_cast<long long>(c.N), v);
    r.summary = buf;
}

void run_check_joint(const DslProgram& prog, const Command& c, const RunOptions& opt, CommandResult& r) {
    const SystemSpec& sys = prog.system(c.system);
    Verdict v = check_joint(sys, c.seqs, check_options(opt));
    FnBank bank = default_bank(sys, c.seqs.size(), sys.coords() == 1 ? 2 : 1);
    for (auto& t : witness_bank(sys, v)) bank.push_back(t);
    auto s = FolnerSchedule::parse(opt.folner);

    std::map<std::int64_t, EmpiricalReport> reports;
    auto trace = convergence_trace(
        [&](std::int64_t N) {
            auto rep = empirical_validate(sys, c.seqs, bank, v, s, N);
            reports[N] = rep;
            return std::complex<double>(rep.max_defect);
        },
        trace_levels(opt.n, 4));
    r.csv = trace_csv(trace);
    const EmpiricalReport& rep = reports.rbegin()->second;

    r.record["system"] = c.system;
    r.record["verdict"] = decision_name(v.decision);
    r.record["label"] = v.label;
    r.record["tested"] = v.tested;
    r.record["gray"] = v.gray;
    json ws = json::array();
    for (std::size_t i = 0; i < v.witnesses.size() && i < 5; ++i) ws.push_back(witness_json(v.witnesses[i]));
    r.record["witnesses"] = ws;
    r.record["empirical"] = {{"N", opt.n},
                             {"folner", s.name()},
                             {"bank", bank.size()},
                             {"max_defect", rep.max_defect},
                             {"classification", classification_name(rep.cls)},
                             {"agrees", rep.agrees},
                             {"discrepancy", rep.discrepancy}};
    r.exit_code = verdict_exit(v.decision);
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s; max defect %.4g at N=%lld (%s)%s", decision_name(v.decision),
                  rep.max_defect, static_cast<long long>(opt.n), classification_name(rep.cls),
                  rep.discrepancy ? ", DISCREPANCY" : "");
    r.summary = buf;
}

void run_prime_avg(const DslProgram& prog, const Command& c, const RunOptions& opt, CommandResult& r) {
    const SystemSpec& sys = prog.system(c.system);
    FnBank bank = default_bank(sys, c.seqs.size(), 1);
    auto rep = prime_joint_check(sys, c.seqs, bank, opt.n, {1, 2, 6, 30}, 2, 0.05, check_options(opt));
    json hs = json::array();
    for (auto& [label, v] : rep.hypotheses) hs.push_back({{"case", label}, {"verdict", decision_name(v.decision)}});
    r.record["system"] = c.system;
    r.record["N"] = opt.n;
    r.record["hypotheses"] = hs;
    r.record["hypothesis_ok"] = rep.hypothesis_ok;
    r.record["max_defect"] = rep.max_defect;
    r.record["consistent"] = rep.consistent;
    char buf[128];
    std::snprintf(buf, sizeof buf, "hypothesis %s, prime-average max defect %.4g%s",
                  rep.hypothesis_ok ? "holds" : "fails", rep.max_defect, rep.consistent ? "" : ", INCONSISTENT");
    r.summary = buf;
}

void run_report(const std::vector<json>& earlier, CommandResult& r) {
    json ex = json::array();
    int errors = 0;
    for (auto& e : earlier) {
        if (e.value("command", "") == "report") continue;
        json row = {{"index", e.value("index", 0)}, {"command", e.value("command", "")}, {"line", e.value("line", 0)}};
        if (e.contains("error")) {
            row["error"] = e["error"];
            ++errors;
        }
        if (e.contains("verdict")) row["verdict"] = e["verdict"];
        ex.push_back(row);
    }
    r.record["experiments"] = ex;
    r.record["errors"] = errors;
    r.summary = std::to_string(ex.size()) + " experiments, " + std::to_string(errors) + " errors";
}

} // namespace

CommandResult run_command(const DslProgram& prog, const Command& c, const RunOptions& opt,
                          const std::vector<json>& earlier) {
    CommandResult r;
    r.record = {{"command", command_name(c.kind)}, {"line", c.line}, {"text", print_command(c)}};
    if (c.expr) r.record["expr"] = to_string(c.expr);
    try {
        switch (c.kind) {
        case CommandKind::Decompose: run_decompose(c, r); break;
        case CommandKind::Rep: run_rep(c, r); break;
        case CommandKind::Limit: run_limit(c, opt, r); break;
        case CommandKind::Density: run_density(c, opt, r); break;
        case CommandKind::Gowers: run_gowers(c, r); break;
        case CommandKind::CheckJoint: run_check_joint(prog, c, opt, r); break;
        case CommandKind::PrimeAvg: run_prime_avg(prog, c, opt, r); break;
        case CommandKind::Report: run_report(earlier, r); break;
        }
    } catch (const Error& e) {
        r.record["error"] = kind_name(e.kind());
        r.record["message"] = e.what();
        r.summary = std::string("error: ") + e.what();
        r.exit_code = 1;
        r.csv.clear();
    }
    return r;
}

RunResult run_program(const DslProgram& prog, const RunOptions& opt, std::ostream& log) {
    std::filesystem::create_directories(opt.out);
    RunResult out;
    std::vector<json> records;
    for (std::size_t i = 0; i < prog.commands.size(); ++i) {
        const Command& c = prog.commands[i];
        CommandResult r = run_command(prog, c, opt, records);
        r.record["index"] = i + 1;
        char stem[64];
        std::snprintf(stem, sizeof stem, "%03zu-%s", i + 1, command_name(c.kind));
        write_atomic(opt.out / (std::string(stem) + ".json"), dump_json(r.record));
        if (!r.csv.empty()) write_atomic(opt.out / (std::string(stem) + ".csv"), r.csv);
        log << "[" << i + 1 << "] line " << c.line << " " << print_command(c) << "\n    " << r.summary << "\n";
        if (r.record.contains("error")) out.exit_code = 1;
        records.push_back(r.record);
        out.results.push_back(std::move(r));
    }
    json summary = {{"seed", opt.seed}, {"n", opt.n}, {"folner", opt.folner}, {"freq_cutoff", opt.freq_cutoff},
                    {"records", records}};
    write_atomic(opt.out / "summary.json", dump_json(summary));
    return out;
}

} // namespace glerg
