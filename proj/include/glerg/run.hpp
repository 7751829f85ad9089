#pragma once

#include <cstdint>
#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "glerg/dsl.hpp"

namespace glerg {

struct RunOptions {
    std::uint64_t seed = 1;
    std::int64_t n = 100000;
    std::string folner = "forward"; // forward | window[:drift]
    int freq_cutoff = 8;
    std::filesystem::path out = "out";
};

// exit codes of check-joint
constexpr int kExitJointlyErgodic = 0;
constexpr int kExitNotJointlyErgodic = 2;
constexpr int kExitInconclusive = 3;

struct CommandResult {
    nlohmann::json record;
    std::string summary; // one line
    std::string csv;     // convergence trace, may be empty
    int exit_code = 0;
};

// runs one command; `earlier` feeds `report`. Module errors become an
// error record with exit code 1.
CommandResult run_command(const DslProgram& prog, const Command& c, const RunOptions& opt,
                          const std::vector<nlohmann::json>& earlier = {});

struct RunResult {
    std::vector<CommandResult> results;
    int exit_code = 0; // 1 if any command failed, else 0
};

// runs every command in order, writing <out>/NNN-<command>.json (and .csv
// traces) plus <out>/summary.json; summaries go to `log`
RunResult run_program(const DslProgram& prog, const RunOptions& opt, std::ostream& log);

// doubles rounded to 12 significant digits, recursively
nlohmann::json rounded(nlohmann::json j);
std::string dump_json(const nlohmann::json& j);
// write to a temporary sibling, then rename over the target
void write_atomic(const std::filesystem::path& path, const std::string& content);

} // namespace glerg
