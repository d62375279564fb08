#pragma once

#include <string>
#include <vector>

#include "fgs/adi_solver.hpp"
#include "fgs/config.hpp"

namespace fgs {

struct RunResult {
    FieldPair final_state;
    double t_final = 0.0;
    std::vector<std::string> snapshot_paths;
    std::string final_path;
    std::string diagnostics_path;
};

/// March a configured trajectory: first step, then extrapolated steps,
/// writing scheduled snapshots, a final-state snapshot, and the norm
/// diagnostics stream. Norm-bound violations warn by default and abort when
/// cfg.strict_bounds is set. A non-finite state aborts after persisting the
/// last good state.
RunResult run_simulation(const SimulationConfig& cfg, bool quiet = true);

} // namespace fgs
