#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

namespace stacky::cli {

// Runs one job: args[0] is the command, the rest are flags. The report (or
// the error object) goes to out unless --output names a file; exit codes are
// 0 on success, 2 for UnknownCommand and SchemaViolation, 1 for ComputeError.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// The command's report for an already parsed job; throws stacky::Error.
struct Options {
    std::string format = "json";
    int levels = 0;
    int grade = 0;
    long long truncation = 0;
    long long q = 0;
    std::string half_l;
    std::string delta_mode;
};
nlohmann::json execute(const std::string& command, const nlohmann::json& params, const Options& opt);
// Lossy tabular view of a report.
std::string to_tsv(const std::string& command, const nlohmann::json& report);

}  // namespace stacky::cli
