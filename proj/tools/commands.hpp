#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "run_config.hpp"

namespace krein::app {

enum ExitCode : int { kExitOk = 0, kExitCheckFailure = 1, kExitConfigError = 2, kExitNumericalFailure = 3 };

// One named invariant: pass iff `measured relation bound` holds.
struct Check {
  std::string name;
  double measured = 0.0;
  std::string relation;  // "<=", "<" or ">"
  double bound = 0.0;
  bool pass = false;
};

std::vector<Check> extension_algebra_checks(int n_models, std::uint64_t seed);
std::vector<Check> layer_operator_checks(const RunConfig& cfg);
std::vector<Check> extension_block_checks(const RunConfig& cfg);

// Runs the task of `cfg` and writes its outputs below cfg.out_dir. Solver
// failures are reported in report.json and mapped to exit codes.
int run_task(const RunConfig& cfg, std::ostream& log);

// Entry point shared by the executable and the tests.
int cli_main(int argc, char** argv);

}  // namespace krein::app
