#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "drinfeld/cli/config.hpp"
#include "drinfeld/verify.hpp"

namespace drinfeld::cli {

/// Process exit codes.
enum ExitCode : int {
    exit_pass = 0,
    exit_identity_failure = 2,
    exit_precision = 3,
    exit_invalid_input = 4,
};

/// Result of one command: named values in canonical text, check groups and
/// the overall status.  Contains nothing that depends on timing or on
/// whether artifacts came from the cache.
struct Report {
    std::string command;
    std::string config;
    std::vector<std::pair<std::string, std::string>> values;
    std::vector<CheckGroup> groups;
    int exit_code = exit_pass;
    std::string error;

    int failures() const;
    std::string status() const;
};

const std::vector<std::string>& command_names();

/// Runs divisor, shtuka, basis, module, expcoeffs, period, genfn or verify.
/// Library exceptions are caught and mapped to exit codes: InvalidInput 4,
/// PrecisionError 3, InconsistencyError and failed checks 2.
Report run_command(const JobConfig& cfg, std::string_view cmd);

std::string render_text(const Report& r);
/// The same content as render_text, as a JSON document.
std::string render_json(const Report& r);

/// Options of the verify registry.  Defaults are those of the `verify`
/// command.
struct VerifyOptions {
    int epsilon_samples = 20;
    uint64_t epsilon_seed = 1;
    AnalyticOptions analytic;
};

}  // namespace drinfeld::cli
