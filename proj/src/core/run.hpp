#pragma once

#include <ostream>
#include <string>

#include "config.hpp"

namespace polyjump {

enum ExitCode : int { kExitOk = 0, kExitAssertion = 1, kExitConfig = 2, kExitSolver = 3 };

struct RunOverrides {
  std::string command;  // replaces run.command when non-empty
  std::string out;      // replaces run.out when non-empty
  int workers = 0;      // replaces run.workers when > 0
  bool strict = false;  // warnings count as failures
};

/// Executes a validated configuration: writes CSVs, SVGs, summary.json and
/// manifest.json into cfg.out and returns the exit code. Progress goes to
/// `log`, errors to `err`.
int run(const RunConfig& cfg, bool strict, std::ostream& log, std::ostream& err);

/// Loads, validates and runs a config file. Config errors give kExitConfig
/// without touching the output directory.
int run_config_file(const std::string& path, const RunOverrides& ov, std::ostream& log, std::ostream& err);

}  // namespace polyjump
