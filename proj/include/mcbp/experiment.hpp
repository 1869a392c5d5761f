#pragma once

#include <string>

#include "mcbp/config.hpp"
#include "mcbp/model.hpp"

namespace mcbp {

// Dispatch helper shared by the CLI and the experiment runner.
Solution dispatch_solve(const Instance& inst, const std::string& mode, const SolverConfig& cfg);

// Runs the experiment description (JSON list of generated or file-based
// instances times solver modes), writes report.csv and report.txt plus
// optional SVG plots into out_dir. Per-run failures are recorded and the
// runner continues. Returns a process exit code.
int run_experiment(const std::string& spec_path, const std::string& out_dir, int jobs,
                   bool plots);

}  // namespace mcbp
