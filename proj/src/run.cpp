#include "fgs/run.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>

#include "fgs/error.hpp"
#include "fgs/snapshot.hpp"
#include "fgs/verifier.hpp"

namespace fs = std::filesystem;

namespace fgs {

namespace {

std::string snap_name(std::size_t step) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "snap_%08zu.fgs", step);
    return buf;
}

void probe_writable(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory '" + dir.string() + "': " +
                          ec.message());
    const fs::path probe = dir / ".write_probe";
    std::ofstream f(probe);
    if (!f) throw IoError("output directory '" + dir.string() + "' is not writable");
    f.close();
    fs::remove(probe, ec);
}

class DiagStream {
public:
    DiagStream(const std::string& path, bool strict) : out_(path, std::ios::trunc),
                                                       strict_(strict), path_(path) {
        if (!out_) throw IoError("cannot open diagnostics stream '" + path + "'");
        out_ << "step,t,norm_u_sq,norm_w_sq,bound_u,bound_w\n";
    }

    void record(std::size_t step, double t, const DiagnosticsRecord& rec) {
        char line[256];
        std::snprintf(line, sizeof line, "%zu,%.17g,%.17g,%.17g,%.17g,%.17g\n", step, t,
                      rec.norm_u_sq, rec.norm_w_sq, rec.bound_u, rec.bound_w);
        out_ << line;
        const double slack = 1e-9;
        if (rec.norm_u_sq > rec.bound_u + slack || rec.norm_w_sq > rec.bound_w + slack) {
            if (strict_)
                throw Error("norm bound violated at step " + std::to_string(step));
            if (warnings_++ < 5)
                std::fprintf(stderr,
                             "warning: norm bound exceeded at step %zu (t = %g); "
                             "see %s\n",
                             step, t, path_.c_str());
        }
    }

private:
    std::ofstream out_;
    bool strict_;
    std::string path_;
    int warnings_ = 0;
};

} // namespace

RunResult run_simulation(const SimulationConfig& cfg, bool quiet) {
    const fs::path dir(cfg.output_dir);
    probe_writable(dir);
    {
        std::ofstream resolved(dir / "config.resolved");
        resolved << dump_config(cfg);
    }

    SolverWorkspace ws = cfg.method == SolverMethod::Primary
                             ? precompute(cfg.params, cfg.domain, cfg.time.tau)
                             : precompute_cross(cfg.params, cfg.domain, cfg.time.tau);
    ws.picard_tol = cfg.picard_tol;
    ws.picard_cap = cfg.picard_cap;

    FieldPair curr = build_initial_state(cfg);
    const NormBounds bounds(curr, cfg.domain, cfg.time.horizon());

    std::set<std::size_t> snap_steps;
    for (double t : cfg.snapshot_times)
        snap_steps.insert(static_cast<std::size_t>(std::llround(t / cfg.time.tau)));

    RunResult result;
    result.diagnostics_path = (dir / "diagnostics.csv").string();
    DiagStream diag(result.diagnostics_path, cfg.strict_bounds);
    diag.record(0, 0.0, norm_diagnostics(curr, cfg.params, cfg.domain, bounds, 0.0));
    if (snap_steps.count(0)) {
        const std::string path = (dir / snap_name(0)).string();
        write_snapshot(path, curr, cfg.domain, cfg.params.alpha(), 0.0);
        result.snapshot_paths.push_back(path);
    }

    const auto wall_start = std::chrono::steady_clock::now();
    const std::size_t steps = cfg.time.steps;
    FieldPair prev;
    for (std::size_t n = 0; n < steps; ++n) {
        FieldPair next;
        try {
            next = n == 0 ? step_first(curr, ws) : step(prev, curr, ws);
        } catch (const Error& e) {
            const std::string path = (dir / "abort_last_good.fgs").string();
            write_snapshot(path, curr, cfg.domain, cfg.params.alpha(),
                           static_cast<double>(n) * cfg.time.tau);
            throw Error("step " + std::to_string(n + 1) + " failed (" + e.what() +
                        "); last good state saved to " + path);
        }
        prev = std::move(curr);
        curr = std::move(next);
        const std::size_t step_no = n + 1;
        const double t = static_cast<double>(step_no) * cfg.time.tau;
        if (step_no % cfg.diag_stride == 0 || step_no == steps)
            diag.record(step_no, t,
                        norm_diagnostics(curr, cfg.params, cfg.domain, bounds, t));
        if (snap_steps.count(step_no)) {
            const std::string path = (dir / snap_name(step_no)).string();
            write_snapshot(path, curr, cfg.domain, cfg.params.alpha(), t);
            result.snapshot_paths.push_back(path);
        }
        if (!quiet && (step_no % std::max<std::size_t>(1, steps / 20) == 0)) {
            const double elapsed =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start)
                    .count();
            std::fprintf(stderr, "  step %zu/%zu  t=%.6g  (%.1f steps/s)\n", step_no, steps, t,
                         static_cast<double>(step_no) / elapsed);
        }
    }

    result.t_final = cfg.time.horizon();
    result.final_path = (dir / "final.fgs").string();
    write_snapshot(result.final_path, curr, cfg.domain, cfg.params.alpha(), result.t_final);
    result.final_state = std::move(curr);
    return result;
}

} // namespace fgs
