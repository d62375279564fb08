#pragma once

#include <complex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fgs/model.hpp"

namespace fgs {

/// Spatially uniform steady states of the homogeneous system.
struct SteadyStateSet {
    std::pair<double, double> trivial{1.0, 0.0};
    /// (u_plus, v_minus) and (u_minus, v_plus); present iff discriminant >= 0.
    std::optional<std::pair<std::pair<double, double>, std::pair<double, double>>> nontrivial;
    double gamma = 0.0;        // (F + kappa) / F
    double discriminant = 0.0; // 1 - 4 gamma^2 F
};

SteadyStateSet steady_states(double feed, double decay);

/// Saddle-node curve kappa_c(F) = -F + sqrt(F)/2 on 0 <= F <= 1/4.
double saddle_node_kappa(double feed);

/// Hopf curve F_c(kappa) for the (u_minus, v_plus) branch; admissible for
/// kappa in [0, 1/16] (the inner radicand is negative beyond).
double hopf_feed(double decay);

/// Coefficients of the dispersion quadratic lambda^2 + lambda T_k + D_k = 0
/// linearized about a uniform state, with |k|^alpha = |k1|^alpha + |k2|^alpha.
struct DispersionCoeffs {
    double t_k;
    double d_k;
    double k_abs_alpha;
};

struct DispersionResult {
    DispersionCoeffs coeffs;
    std::complex<double> lambda1;
    std::complex<double> lambda2;
    double re_lambda_max;
};

DispersionResult dispersion(std::pair<double, double> state, const ModelParams& params,
                            double k1, double k2);

/// Phase-diagram regions: III has the trivial state only; I and II carry the
/// nontrivial pair, split by stability of (u_minus, v_plus) at k = 0.
/// Points within 1e-12 of a separating curve report Boundary. The k = 0
/// classification is independent of the diffusion coefficients and alpha.
enum class Region { I, II, III, Boundary };

std::string region_name(Region r);

Region classify_region(double feed, double decay);

/// Row of the phase-diagram scan written by the CLI.
struct PhasePoint {
    double decay;
    double feed;
    Region region;
    double re_lambda_max;
};

/// Scan a kappa x F grid (inclusive endpoints) at k = 0; re_lambda_max
/// reports the (u_minus, v_plus) branch where it exists, else the trivial
/// state.
std::vector<PhasePoint> phase_scan(double kappa_min, double kappa_max, std::size_t n_kappa,
                                   double feed_min, double feed_max, std::size_t n_feed);

} // namespace fgs
