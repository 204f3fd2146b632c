#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace edgechain {

/// Exit codes of the command-line tool.
enum ExitCode : int {
    exit_ok = 0,
    /// `validate` found a failing assumption check.
    exit_checks_failed = 1,
    /// Accuracy, truncation, grid-extent or other numerical failure, including partial convergence reports.
    exit_accuracy = 2,
    /// Bad flags, config file or domain.
    exit_config = 3,
};

/// Runs `edgechain <subcommand> [flags]` with args excluding the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace edgechain
