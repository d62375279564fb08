#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "fgs/csv.hpp"
#include "fgs/error.hpp"
#include "fgs/patterns.hpp"
#include "fgs/run.hpp"
#include "fgs/snapshot.hpp"
#include "fgs/stability.hpp"
#include "fgs/verifier.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "1.0.0";

int thread_budget() {
    const char* env = std::getenv("FGS_THREADS");
    if (!env) return 1;
    const int v = std::atoi(env);
    if (v <= 0) return static_cast<int>(std::thread::hardware_concurrency());
    return v;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_rate_csv(const std::string& path, const std::vector<fgs::RateRow>& rows) {
    fgs::CsvTable table;
    table.header = {"alpha", "h", "tau", "rel_l2_error", "rate"};
    for (const auto& r : rows)
        table.rows.push_back({fmt(r.alpha), fmt(r.h), fmt(r.tau), fmt(r.rel_l2_error),
                              std::isnan(r.rate) ? "" : fmt(r.rate)});
    write_csv(path, table);
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
    std::string config;
    std::string preset;
    std::string out_override;
    bool progress = false;
    bool check = false;
};

std::string resolve_preset(const std::string& name) {
    const char* env = std::getenv("FGS_PRESET_DIR");
    std::vector<fs::path> roots;
    if (env) roots.emplace_back(env);
    roots.emplace_back("presets");
    roots.emplace_back(fs::path(__FILE__).parent_path().parent_path() / "presets");
    for (const auto& root : roots) {
        const fs::path p = root / (name + ".cfg");
        if (fs::exists(p)) return p.string();
    }
    throw fgs::Error("preset '" + name + "' not found (set FGS_PRESET_DIR or run from the "
                     "repository root)");
}

int cmd_simulate(const SimulateArgs& args) {
    std::string path = args.config;
    if (path.empty()) path = resolve_preset(args.preset);
    fgs::SimulationConfig cfg = fgs::load_config(path);
    if (!args.out_override.empty()) cfg.output_dir = args.out_override;
    if (args.check) {
        fgs::build_initial_state(cfg);   // surfaces file/shape problems early
        std::fputs(fgs::dump_config(cfg).c_str(), stdout);
        return 0;
    }
    std::fprintf(stderr, "simulate: %s -> %s (%zu steps)\n", path.c_str(),
                 cfg.output_dir.c_str(), cfg.time.steps);
    const fgs::RunResult res = fgs::run_simulation(cfg, !args.progress);
    std::printf("final state: %s (t = %g)\n", res.final_path.c_str(), res.t_final);
    std::printf("diagnostics: %s\n", res.diagnostics_path.c_str());
    return 0;
}

// ---------------------------------------------------------------- converge

struct ConvergeArgs {
    int example = 1;
    std::string kind = "spatial";
    std::vector<double> alphas;
    std::vector<std::size_t> refinements;
    double tau = 1.0 / 3000.0;
    std::size_t href = 512;
    std::size_t reference = 256;
    std::string disc = "grunwald";
    std::string out = "rates.csv";
};

int cmd_converge(const ConvergeArgs& args) {
    fgs::StudyKind kind;
    if (args.kind == "spatial")
        kind = fgs::StudyKind::Spatial;
    else if (args.kind == "temporal")
        kind = fgs::StudyKind::Temporal;
    else if (args.kind == "coupled")
        kind = fgs::StudyKind::Coupled;
    else
        throw fgs::Error("unknown study kind '" + args.kind + "'");
    if (args.example == 1 && kind == fgs::StudyKind::Coupled)
        throw fgs::Error("example 1 supports the spatial and temporal kinds");
    if (args.example == 2 && kind != fgs::StudyKind::Coupled)
        throw fgs::Error("example 2 is the coupled (tau = h) study");

    std::vector<double> alphas = args.alphas;
    if (alphas.empty())
        alphas = args.example == 1 ? std::vector<double>{1.2, 1.5, 1.8}
                                   : std::vector<double>{1.1, 1.3, 1.5, 1.7};
    std::vector<std::size_t> refinements = args.refinements;
    if (refinements.empty()) {
        if (kind == fgs::StudyKind::Spatial)
            refinements = {16, 32, 64, 128, 256};
        else if (kind == fgs::StudyKind::Temporal)
            refinements = {5, 10, 15, 20, 25};
        else
            refinements = {16, 32, 64, 128};
    }

    fgs::StudyConfig cfg;
    cfg.tau_spatial = args.tau;
    cfg.n_temporal = args.href;
    cfg.reference_n = args.reference;
    cfg.disc = args.disc == "centered" ? fgs::Discretization::FractionalCentered
                                       : fgs::Discretization::ShiftedGrunwald;

    // Independent alpha cells; run them concurrently when allowed.
    const int budget = std::min<int>(thread_budget(), static_cast<int>(alphas.size()));
    std::vector<fgs::RateRow> rows;
    if (budget > 1) {
        std::vector<std::future<std::vector<fgs::RateRow>>> futures;
        for (double a : alphas)
            futures.push_back(std::async(std::launch::async, [&, a] {
                const double single[1] = {a};
                return fgs::convergence_study(kind, single, refinements, cfg);
            }));
        for (auto& f : futures) {
            auto part = f.get();
            rows.insert(rows.end(), part.begin(), part.end());
        }
    } else {
        rows = fgs::convergence_study(kind, alphas, refinements, cfg);
    }

    write_rate_csv(args.out, rows);
    std::printf("alpha      h            tau          rel_l2_error   rate\n");
    for (const auto& r : rows)
        std::printf("%-10.3g %-12.6g %-12.6g %-14.6g %s\n", r.alpha, r.h, r.tau,
                    r.rel_l2_error, std::isnan(r.rate) ? "--" : fmt(r.rate).c_str());
    std::printf("written: %s\n", args.out.c_str());
    return 0;
}

// ---------------------------------------------------------------- phase

struct PhaseArgs {
    double kappa_min = 0.0, kappa_max = 0.08;
    double feed_min = 0.0, feed_max = 0.3;
    std::size_t nk = 400, nf = 400;
    std::string out = "phase.csv";
};

int cmd_phase(const PhaseArgs& args) {
    const auto points =
        fgs::phase_scan(args.kappa_min, args.kappa_max, args.nk, args.feed_min, args.feed_max,
                        args.nf);
    fgs::CsvTable table;
    table.header = {"kappa", "F", "region", "re_lambda_max"};
    for (const auto& p : points)
        table.rows.push_back(
            {fmt(p.decay), fmt(p.feed), fgs::region_name(p.region), fmt(p.re_lambda_max)});
    write_csv(args.out, table);
    std::printf("phase scan: %zu points -> %s\n", points.size(), args.out.c_str());
    return 0;
}

// ---------------------------------------------------------------- rdf

struct RdfArgs {
    std::string snapshot;
    std::string species = "v";
    double threshold_frac = 0.3;
    double bin_width = 0.01;
    double r_max = 0.0;   // 0 = half the domain diagonal
    std::string out = "rdf.csv";
    std::string peaks_out;
};

int cmd_rdf(const RdfArgs& args) {
    const fgs::Snapshot snap = fgs::read_snapshot(args.snapshot);
    const fgs::Field& field = args.species == "u" ? snap.state.u : snap.state.v;
    const auto spots = fgs::detect_spots_frac(field, snap.domain, args.threshold_frac);
    std::printf("spots: %zu (threshold %.6g)\n", spots.count(), spots.threshold);
    double r_max = args.r_max;
    if (r_max <= 0.0)
        r_max = 0.5 * std::hypot(snap.domain.b() - snap.domain.a(),
                                 snap.domain.d() - snap.domain.c());
    const auto prof = fgs::rdf(spots, args.bin_width, r_max);

    fgs::CsvTable table;
    table.header = {"r", "g"};
    for (std::size_t b = 0; b < prof.g.size(); ++b)
        table.rows.push_back({fmt(prof.bin_center(b)), fmt(prof.g[b])});
    write_csv(args.out, table);

    std::printf("r1 = %s, r2 = %s -> %s\n",
                prof.r1 ? fmt(*prof.r1).c_str() : "none",
                prof.r2 ? fmt(*prof.r2).c_str() : "none", args.out.c_str());
    if (!args.peaks_out.empty()) {
        const bool fresh = !fs::exists(args.peaks_out);
        std::ofstream peaks(args.peaks_out, std::ios::app);
        if (!peaks) throw fgs::IoError("cannot open '" + args.peaks_out + "'");
        if (fresh) peaks << "alpha,r1,r2\n";
        peaks << fmt(snap.alpha) << "," << (prof.r1 ? fmt(*prof.r1) : "") << ","
              << (prof.r2 ? fmt(*prof.r2) : "") << "\n";
    }
    return 0;
}

// ---------------------------------------------------------------- fit-scaling

struct FitArgs {
    std::string input;
    std::string out;
};

int cmd_fit(const FitArgs& args) {
    const fgs::CsvTable table = fgs::read_csv(args.input);
    std::size_t rcol;
    try {
        rcol = table.column("r1");
    } catch (const fgs::Error&) {
        rcol = table.column("r");
    }
    const std::size_t acol = table.column("alpha");
    std::vector<std::pair<double, double>> samples;
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const double r = table.number(i, rcol);
        if (std::isnan(r)) continue;
        samples.emplace_back(table.number(i, acol), r);
    }
    const auto fit = fgs::fit_scaling(samples);
    std::printf("beta = %.10g, prefactor = %.10g, rms log residual = %.3g (%zu samples)\n",
                fit.beta, std::exp(fit.log_prefactor), fit.residual, fit.samples.size());
    if (!args.out.empty()) {
        fgs::CsvTable out;
        out.header = {"alpha", "r"};
        for (const auto& [a, r] : fit.samples) out.rows.push_back({fmt(a), fmt(r)});
        out.rows.push_back({"beta", fmt(fit.beta)});
        out.rows.push_back({"prefactor", fmt(std::exp(fit.log_prefactor))});
        out.rows.push_back({"residual", fmt(fit.residual)});
        write_csv(args.out, out);
    }
    return 0;
}

// ---------------------------------------------------------------- cross-check

struct CrossArgs {
    std::string config;
    std::string out = "cross-check";
    double threshold_frac = 0.3;
    double bin_width = 0.01;
    bool progress = false;
};

int cmd_cross(const CrossArgs& args) {
    fgs::SimulationConfig base = fgs::load_config(args.config);
    fgs::SimulationConfig primary = base;
    primary.method = fgs::SolverMethod::Primary;
    primary.output_dir = (fs::path(args.out) / "primary").string();
    fgs::SimulationConfig cross = base;
    cross.method = fgs::SolverMethod::Cross;
    cross.output_dir = (fs::path(args.out) / "cross").string();

    std::fprintf(stderr, "cross-check: primary run\n");
    const auto res_p = fgs::run_simulation(primary, !args.progress);
    std::fprintf(stderr, "cross-check: cross run\n");
    const auto res_c = fgs::run_simulation(cross, !args.progress);

    const double du = fgs::relative_l2(res_c.final_state.u, res_p.final_state.u);
    const double dv = fgs::relative_l2(res_c.final_state.v, res_p.final_state.v);
    std::printf("relative L2 difference at t = %g: u %.6g, v %.6g\n", res_p.t_final, du, dv);

    const auto spots_p =
        fgs::detect_spots_frac(res_p.final_state.v, base.domain, args.threshold_frac);
    const auto spots_c =
        fgs::detect_spots_frac(res_c.final_state.v, base.domain, args.threshold_frac);
    if (spots_p.count() >= 2 && spots_c.count() >= 2) {
        const double diag = 0.5 * std::hypot(base.domain.b() - base.domain.a(),
                                             base.domain.d() - base.domain.c());
        const auto rdf_p = fgs::rdf(spots_p, args.bin_width, diag);
        const auto rdf_c = fgs::rdf(spots_c, args.bin_width, diag);
        std::printf("RDF first peaks: primary %s, cross %s (bin width %g)\n",
                    rdf_p.r1 ? fmt(*rdf_p.r1).c_str() : "none",
                    rdf_c.r1 ? fmt(*rdf_c.r1).c_str() : "none", args.bin_width);
    }
    return 0;
}

// ---------------------------------------------------------------- info

struct InfoArgs {
    double feed = -1.0;
    double kappa = -1.0;
};

int cmd_info(const InfoArgs& args) {
    std::printf("fgs %s - fractional Gray-Scott reaction-diffusion toolkit\n", kVersion);
    std::printf("subcommands: simulate, converge, phase, rdf, fit-scaling, cross-check, info\n");
    if (args.feed > 0.0 && args.kappa >= 0.0) {
        const auto set = fgs::steady_states(args.feed, args.kappa);
        std::printf("F = %g, kappa = %g\n", args.feed, args.kappa);
        std::printf("trivial state: (1, 0)\n");
        if (set.nontrivial) {
            std::printf("u+ = %.12g, v- = %.12g\n", set.nontrivial->first.first,
                        set.nontrivial->first.second);
            std::printf("u- = %.12g, v+ = %.12g\n", set.nontrivial->second.first,
                        set.nontrivial->second.second);
        } else {
            std::printf("no nontrivial states (discriminant %.6g < 0)\n", set.discriminant);
        }
        if (args.kappa > 0.0)
            std::printf("region: %s\n",
                        fgs::region_name(fgs::classify_region(args.feed, args.kappa)).c_str());
        if (args.feed <= 0.25)
            std::printf("saddle-node kappa_c(F) = %.12g\n", fgs::saddle_node_kappa(args.feed));
        if (args.kappa <= 1.0 / 16.0)
            std::printf("Hopf F_c(kappa) = %.12g\n", fgs::hopf_feed(args.kappa));
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"fractional Gray-Scott reaction-diffusion toolkit"};
    app.set_version_flag("--version", std::string("fgs ") + kVersion);
    app.require_subcommand(1);

    SimulateArgs sim;
    auto* s_sim = app.add_subcommand("simulate", "run a configured trajectory");
    auto* opt_cfg = s_sim->add_option("--config", sim.config, "config file path");
    s_sim->add_option("--preset", sim.preset, "preset name, e.g. gs-desk-2.0-0.063")
        ->excludes(opt_cfg);
    s_sim->add_option("--out", sim.out_override, "override the output directory");
    s_sim->add_flag("--progress", sim.progress, "print progress to stderr");
    s_sim->add_flag("--check", sim.check, "validate and echo the resolved config, then exit");

    ConvergeArgs conv;
    auto* s_conv = app.add_subcommand("converge", "benchmark convergence studies");
    s_conv->add_option("--example", conv.example, "benchmark problem (1 or 2)")
        ->check(CLI::IsMember({1, 2}));
    s_conv->add_option("--kind", conv.kind, "spatial | temporal | coupled");
    s_conv->add_option("--alpha", conv.alphas, "fractional orders");
    s_conv->add_option("--refinements", conv.refinements,
                       "partition counts N (spatial/coupled) or 1/tau values (temporal)");
    s_conv->add_option("--tau", conv.tau, "fixed step for the spatial study");
    s_conv->add_option("--href", conv.href, "fixed grid N for the temporal study");
    s_conv->add_option("--reference", conv.reference, "reference grid N for the coupled study");
    s_conv->add_option("--discretization", conv.disc, "grunwald | centered")
        ->check(CLI::IsMember({"grunwald", "centered"}));
    s_conv->add_option("--out", conv.out, "rate table CSV path");

    PhaseArgs phase;
    auto* s_phase = app.add_subcommand("phase", "steady-state phase-diagram scan");
    s_phase->add_option("--kappa-min", phase.kappa_min);
    s_phase->add_option("--kappa-max", phase.kappa_max);
    s_phase->add_option("--f-min", phase.feed_min);
    s_phase->add_option("--f-max", phase.feed_max);
    s_phase->add_option("--nk", phase.nk, "kappa resolution");
    s_phase->add_option("--nf", phase.nf, "F resolution");
    s_phase->add_option("--out", phase.out, "output CSV path");

    RdfArgs rdf;
    auto* s_rdf = app.add_subcommand("rdf", "spot detection and radial distribution function");
    s_rdf->add_option("--snapshot", rdf.snapshot, "snapshot file")->required();
    s_rdf->add_option("--species", rdf.species, "u | v")->check(CLI::IsMember({"u", "v"}));
    s_rdf->add_option("--threshold-frac", rdf.threshold_frac,
                      "spot threshold as a fraction of max");
    s_rdf->add_option("--bin-width", rdf.bin_width);
    s_rdf->add_option("--r-max", rdf.r_max, "0 = half the domain diagonal");
    s_rdf->add_option("--out", rdf.out, "r,g CSV path");
    s_rdf->add_option("--peaks-out", rdf.peaks_out, "append alpha,r1,r2 to this CSV");

    FitArgs fit;
    auto* s_fit = app.add_subcommand("fit-scaling", "exponential scaling-law fit");
    s_fit->add_option("--input", fit.input, "CSV with alpha and r1 (or r) columns")->required();
    s_fit->add_option("--out", fit.out, "summary CSV path");

    CrossArgs cross;
    auto* s_cross =
        app.add_subcommand("cross-check", "compare the two spatial discretizations");
    s_cross->add_option("--config", cross.config, "config file path")->required();
    s_cross->add_option("--out", cross.out, "output root directory");
    s_cross->add_option("--threshold-frac", cross.threshold_frac);
    s_cross->add_option("--bin-width", cross.bin_width);
    s_cross->add_flag("--progress", cross.progress, "print progress to stderr");

    InfoArgs info;
    auto* s_info = app.add_subcommand("info", "build and model information");
    s_info->add_option("--F", info.feed, "feed rate");
    s_info->add_option("--kappa", info.kappa, "decay rate");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    const std::string cmd = app.get_subcommands().front()->get_name();
    try {
        if (s_sim->parsed()) {
            if (sim.config.empty() && sim.preset.empty())
                throw fgs::Error("simulate needs --config or --preset");
            return cmd_simulate(sim);
        }
        if (s_conv->parsed()) return cmd_converge(conv);
        if (s_phase->parsed()) return cmd_phase(phase);
        if (s_rdf->parsed()) return cmd_rdf(rdf);
        if (s_fit->parsed()) return cmd_fit(fit);
        if (s_cross->parsed()) return cmd_cross(cross);
        if (s_info->parsed()) return cmd_info(info);
    } catch (const std::exception& e) {
        const json record{{"error", e.what()}, {"command", cmd}};
        std::cerr << record.dump() << "\n";
        return 1;
    }
    return 0;
}
