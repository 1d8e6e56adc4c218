#pragma once

#include <exception>
#include <string>

#include "qpl/config.hpp"

namespace qpl {

/// Process exit codes.
enum ExitCode : int {
    kExitOk = 0,
    kExitCheckFailure = 1,
    kExitConfig = 2,
    kExitCapacity = 3,
    kExitIo = 4,
    kExitNumerical = 5,
};

struct CommandOutput {
    std::string text;     // file contents
    int exit_code = kExitOk;
    std::string message;  // one-line summary for the log
};

/// Runs the configured command (already validated) and renders its output.
CommandOutput run_command(const RunConfig& cfg);

CommandOutput run_verify(const RunConfig& cfg);
CommandOutput run_simulate(const RunConfig& cfg);
CommandOutput run_limit_shape(const RunConfig& cfg);
CommandOutput run_pushforward(const RunConfig& cfg);

/// Writes `text` to cfg.out, or to standard output when cfg.out is empty. IoError with the path.
void write_output(const RunConfig& cfg, const std::string& text);

/// Exit code for an exception escaping a command.
int exit_code_for(const std::exception& e);

}  // namespace qpl
