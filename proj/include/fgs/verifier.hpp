#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "fgs/adi_solver.hpp"
#include "fgs/model.hpp"

namespace fgs {

/// Exact benchmark solution e^{-t} x^4(1-x)^4 y^4(1-y)^4 on (0,1)^2.
double exact_ex1(double x, double y, double t);

/// Matching source term for the benchmark diffusion problem
/// u_t = -(-Laplace)^{alpha/2} u + f. Only fractional orders in (1, 2) are
/// accepted; the benchmark is stated for genuinely fractional alpha.
double source_ex1(double x, double y, double t, double alpha);

/// Spatial discretization family for the scalar diffusion solver and the
/// cross-check Gray-Scott solver.
enum class Discretization {
    ShiftedGrunwald,      // weighted shifted Grunwald weights (production path)
    FractionalCentered,   // independent fractional centered-difference weights
};

/// Fractional centered-difference coefficients c_0..c_n with
/// c_k = (-1)^k Gamma(alpha+1) / (Gamma(alpha/2-k+1) Gamma(alpha/2+k+1)).
std::vector<double> centered_riesz_coeffs(double alpha, std::size_t n);

/// Symmetric Toeplitz matrix of the centered-difference Riesz approximation
/// on n interior points (without the 1/h^alpha scale).
DenseMatrix centered_operator_dense(double alpha, std::size_t n);

/// Crank-Nicolson ADI marcher for u_t = -(-Laplace)^{alpha/2} u + f with
/// homogeneous Dirichlet boundary on a rectangle.
class DiffusionSolver {
public:
    DiffusionSolver(FractionalOrder alpha, const Domain2D& domain, double tau,
                    Discretization disc = Discretization::ShiftedGrunwald);

    /// One step from u^n; scaled_source holds tau * f(x, y, t_{n+1/2}).
    Field advance(const Field& u, const Field& scaled_source) const;

    /// March `steps` steps with a time-separable source f = phi(x,y) g(t).
    Field run_separable(const Field& u0, const Field& phi,
                        const std::function<double(double)>& time_factor,
                        std::size_t steps) const;

    const Domain2D& domain() const { return domain_; }
    double tau() const { return tau_; }

private:
    Domain2D domain_;
    double tau_;
    AxisOperator ax_, ay_;
};

/// Workspace for the cross-check Gray-Scott solver: same time scheme as the
/// production solver, spatial operators from the centered-difference family.
SolverWorkspace precompute_cross(const ModelParams& params, const Domain2D& domain, double tau);

enum class StudyKind { Spatial, Temporal, Coupled };

struct RateRow {
    double alpha;
    double h;
    double tau;
    double rel_l2_error;
    double rate;   // NaN on the first row of each alpha block
};

struct StudyConfig {
    double t_end = 1.0;
    double tau_spatial = 1.0 / 3000.0;      // fixed step for the spatial study
    std::size_t n_temporal = 512;           // fixed grid for the temporal study
    std::size_t reference_n = 256;          // reference grid of the coupled study
    Discretization disc = Discretization::ShiftedGrunwald;
};

/// Convergence machinery for the two benchmark problems.
///  - Spatial: manufactured problem, refinements are partition counts N.
///  - Temporal: manufactured problem, refinements are inverse steps 1/tau.
///  - Coupled: f = 1, u0 = sin(pi x) sin(pi y), tau = h, errors against the
///    restriction of the reference_n solution.
std::vector<RateRow> convergence_study(StudyKind kind, std::span<const double> alphas,
                                       std::span<const std::size_t> refinements,
                                       const StudyConfig& cfg = {});

/// Exact benchmark solution sampled on the interior grid at time t.
Field exact_ex1_grid(const Domain2D& domain, double t);

/// Relative discrete L2 distance between two interior fields.
double relative_l2(const Field& approx, const Field& reference);

} // namespace fgs
