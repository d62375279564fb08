#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "fgs/model.hpp"

namespace fgs {

/// Initial-condition choices: a uniform state, the disk perturbation of the
/// uniform state, or a snapshot file.
struct InitialSpec {
    enum class Kind { Uniform, Disk, File };
    Kind kind = Kind::Uniform;
    double uniform_u = 1.0, uniform_v = 0.0;
    double background_u = 1.0, background_v = 0.0;
    double center_x = 0.0, center_y = 0.0, radius = 0.0;
    double inner_u = 0.0, inner_v = 0.0;
    std::string path;
};

enum class SolverMethod { Primary, Cross };

/// Fully validated run description. Snapshot times are resolved onto the
/// step grid at parse time.
struct SimulationConfig {
    SimulationConfig(ModelParams params, Domain2D domain, TimeGrid time)
        : params(std::move(params)), domain(domain), time(time) {}

    ModelParams params;
    Domain2D domain;
    TimeGrid time;
    InitialSpec initial;
    std::vector<double> snapshot_times;
    std::size_t diag_stride = 50;
    std::string output_dir = "out";
    SolverMethod method = SolverMethod::Primary;
    double picard_tol = 1e-12;
    int picard_cap = 8;
    bool strict_bounds = false;
};

/// Parse the key = value / [section] config text. Throws ConfigError with
/// the offending line and field on any unknown key, type mismatch, or
/// invariant violation.
SimulationConfig parse_config(const std::string& text);

/// Parse a config file from disk.
SimulationConfig load_config(const std::string& path);

/// Canonical echo of a resolved config; parsing the dump reproduces the
/// config exactly.
std::string dump_config(const SimulationConfig& cfg);

/// Materialize the initial state on the interior grid. Disk membership is
/// decided at node coordinates (x_i, y_j).
FieldPair build_initial_state(const SimulationConfig& cfg);

} // namespace fgs
