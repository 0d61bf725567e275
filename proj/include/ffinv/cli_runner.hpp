#pragma once

#include <exception>
#include <iosfwd>
#include <string>
#include <vector>

#include "ffinv/run_config.hpp"

namespace ffinv {

enum ExitCode : int {
    kExitOk = 0,
    kExitFailure = 1,          ///< unexpected error or failed validation
    kExitConfigError = 2,
    kExitSolverFailure = 3,
    kExitNonConvergence = 4,
    kExitInadmissible = 5,
    kExitForwardTarget = 6,
};

/// Exit code for an exception thrown by a command.
[[nodiscard]] int exit_code_for(const std::exception& e);

struct RunOptions {
    std::string out_dir;  ///< overrides output.directory when non-empty
    int threads = 1;
};

/// Each command writes its artifacts into the output directory and a short
/// log to `log`; errors propagate as exceptions.
void cmd_solve(const RunConfig& config, const RunOptions& options, std::ostream& log);
void cmd_scan(const RunConfig& config, const RunOptions& options, std::ostream& log);
void cmd_design(const RunConfig& config, const RunOptions& options, std::ostream& log);

struct ValidationCheck {
    std::string name;
    double measured = 0.0;
    double threshold = 0.0;
    bool passed = false;
};

struct ValidateOptions {
    /// Test hook: multiplies every threshold. A tiny value forces failures.
    double tolerance_scale = 1.0;
    int threads = 1;
};

[[nodiscard]] std::vector<ValidationCheck> run_validation(const ValidateOptions& options = {});

/// Prints one line per check; returns true when all pass.
bool cmd_validate(const ValidateOptions& options, std::ostream& log);

/// Dispatches `command` (solve | scan | design | validate) and maps errors to exit codes.
[[nodiscard]] int run_command(const std::string& command, const std::string& config_path,
                              const RunOptions& options, std::ostream& out, std::ostream& err,
                              const ValidateOptions& validate = {});

}  // namespace ffinv
