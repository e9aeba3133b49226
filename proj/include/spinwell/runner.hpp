// The CLI commands as library functions. Each writes its artifacts under the
// config's out_dir and returns the process exit code: 0 success, 1 a gated
// tolerance failed, 3 the integration aborted numerically. Config problems
// throw ConfigError; the CLI maps those to exit code 2.
#pragma once

#include "spinwell/config.hpp"

namespace spinwell {

int cmd_run(const SimConfig& cfg);         // trajectory.csv, run_config.cfg, state_final.swb
int cmd_ensemble(const SimConfig& cfg);    // ensemble.csv, ensemble_moments.csv
int cmd_check(const SimConfig& cfg);       // invariants.csv
int cmd_convergence(const SimConfig& cfg); // convergence.csv

} // namespace spinwell
