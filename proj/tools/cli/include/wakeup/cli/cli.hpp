#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "wakeup/cli/config.hpp"

namespace wakeup::cli {

enum ExitCode : int {
    kExitOk = 0,
    kExitConfig = 1,
    kExitVerification = 2,
    kExitIo = 3,
};

/// Parses arguments that follow the program name. Throws ConfigError.
ExperimentConfig parse_args(const std::vector<std::string>& args);

int cmd_simulate(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_sweep(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_verify(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err);

/// Full front end: parse, dispatch, map failures to exit codes.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace wakeup::cli
