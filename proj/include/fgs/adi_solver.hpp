#pragma once

#include <cstddef>
#include <optional>

#include "fgs/linalg.hpp"
#include "fgs/model.hpp"

namespace fgs {

/// One-axis Crank-Nicolson operator pair built from a dense spatial operator
/// T and step scale s: implicit (I + sT), kept as an LU factorization plus
/// its explicit inverse, and the explicit sweep matrix (I - sT).
struct AxisOperator {
    AxisOperator(const DenseMatrix& op, double scale);

    std::size_t size() const { return explicit_mat.rows(); }

    DenseMatrix implicit_mat;
    DenseMatrix implicit_inv;
    DenseMatrix explicit_mat;
    LuFactor implicit_lu;
};

/// Cached per-axis, per-species operators for one (params, domain, tau)
/// triple, plus the fixed-point settings for the reaction coupling.
struct SolverWorkspace {
    SolverWorkspace(const ModelParams& params, const Domain2D& domain, double tau,
                    AxisOperator ux, AxisOperator uy, AxisOperator vx, AxisOperator vy)
        : params(params), domain(domain), tau(tau), ux(std::move(ux)), uy(std::move(uy)),
          vx(std::move(vx)), vy(std::move(vy)) {}

    ModelParams params;
    Domain2D domain;
    double tau;
    AxisOperator ux, uy, vx, vy;
    double picard_tol = 1e-12;
    int picard_cap = 8;
};

/// Build the workspace for the weighted shifted Grunwald discretization:
/// per axis z and species with constant K, the implicit matrix is
/// I + (tau K / h_z^alpha) B with B = A + A^T.
SolverWorkspace precompute(const ModelParams& params, const Domain2D& domain, double tau);

/// Advance (U^0, V^0) to (U^1, V^1); the quadratic factor uses V^0 since no
/// extrapolation history exists yet.
FieldPair step_first(const FieldPair& state0, const SolverWorkspace& ws);

/// Advance (U^n, V^n) to (U^{n+1}, V^{n+1}) using the extrapolant
/// (3 V^n - V^{n-1})/2 in the quadratic term; state_prev supplies V^{n-1}.
FieldPair step(const FieldPair& state_prev, const FieldPair& state_curr,
               const SolverWorkspace& ws);

/// Initial-state norms captured once per trajectory for the runtime bounds.
struct NormBounds {
    NormBounds(const FieldPair& initial, const Domain2D& domain, double horizon);
    double norm_u0_sq;
    double norm_w0_sq;   // ||u0 + v0||^2
    double horizon;
};

struct DiagnosticsRecord {
    double norm_u_sq;
    double norm_v_sq;
    double norm_w_sq;
    double bound_u;   // ||u0||^2 + F t |Omega|
    double bound_w;   // stability-estimate bound for W = U + V at the horizon
};

DiagnosticsRecord norm_diagnostics(const FieldPair& state, const ModelParams& params,
                                   const Domain2D& domain, const NormBounds& ctx, double t);

// Building blocks shared with the linear-diffusion and cross solvers.

/// E_x X E_y with the explicit sweep matrices.
Field explicit_product(const AxisOperator& ax, const AxisOperator& ay, const Field& x);

/// (I + s_x T)^{-1} rhs (I + s_y T)^{-1} via the cached inverses.
Field implicit_solve(const AxisOperator& ax, const AxisOperator& ay, const Field& rhs);

} // namespace fgs
