#include "fgs/adi_solver.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "fgs/error.hpp"

namespace fgs {

namespace {

DenseMatrix shifted(const DenseMatrix& op, double scale) {
    DenseMatrix m(op.rows(), op.cols());
    for (std::size_t i = 0; i < op.rows(); ++i)
        for (std::size_t j = 0; j < op.cols(); ++j)
            m(i, j) = (i == j ? 1.0 : 0.0) + scale * op(i, j);
    return m;
}

Field as_field(DenseMatrix&& m) {
    Field f;
    f.rows = m.rows();
    f.cols = m.cols();
    f.data.assign(m.values().begin(), m.values().end());
    return f;
}

DenseMatrix as_matrix(const Field& f) {
    DenseMatrix m(f.rows, f.cols);
    std::copy(f.data.begin(), f.data.end(), m.values().begin());
    return m;
}

void check_finite(const Field& f, const char* label) {
    if (!f.finite()) throw Error(std::string(label) + " contains non-finite values");
}

/// Fixed-point solve of (I+s_xT) X (I+s_yT) = P + reaction(X) for one
/// species. The reaction closure fills rhs with P plus the coupling terms
/// evaluated at the current guess. Returns the iterate count actually used.
template <typename Reaction>
int picard(const AxisOperator& ax, const AxisOperator& ay, const Field& init,
           Reaction&& reaction, double tol, int cap, Field& out) {
    Field guess = init;
    Field rhs(init.rows, init.cols);
    for (int it = 1; it <= cap; ++it) {
        reaction(guess, rhs);
        out = implicit_solve(ax, ay, rhs);
        double update = max_abs_diff(out.data, guess.data);
        guess = out;
        if (update < tol) return it;
        if (it == cap)
            throw IterationError("reaction coupling did not converge within " +
                                     std::to_string(cap) + " iterations (last update " +
                                     std::to_string(update) + ")",
                                 update);
    }
    return cap;
}

} // namespace

AxisOperator::AxisOperator(const DenseMatrix& op, double scale)
    : implicit_mat((pin_blas_single_thread(), shifted(op, scale))),
      implicit_inv(LuFactor(implicit_mat).inverse()), explicit_mat(shifted(op, -scale)),
      implicit_lu(implicit_mat) {}

SolverWorkspace precompute(const ModelParams& params, const Domain2D& domain, double tau) {
    if (tau < 0.0) throw Error("precompute: tau must be >= 0");
    const std::size_t nx = domain.interior_x();
    const std::size_t ny = domain.interior_y();
    const std::size_t nmax = std::max(nx, ny);
    const double alpha = params.alpha();
    const auto weights = grunwald_weights(params.order(), nmax);
    const DenseMatrix bx = assemble_operator(weights, nx, true).dense();
    const DenseMatrix by =
        ny == nx ? bx : assemble_operator(weights, ny, true).dense();

    const double sux = tau * params.k_u() / std::pow(domain.hx(), alpha);
    const double suy = tau * params.k_u() / std::pow(domain.hy(), alpha);
    const double svx = tau * params.k_v() / std::pow(domain.hx(), alpha);
    const double svy = tau * params.k_v() / std::pow(domain.hy(), alpha);
    try {
        return SolverWorkspace(params, domain, tau, AxisOperator(bx, sux),
                               AxisOperator(by, suy), AxisOperator(bx, svx),
                               AxisOperator(by, svy));
    } catch (const Error& e) {
        throw Error("precompute: implicit operator factorization failed (alpha = " +
                    std::to_string(alpha) + ", tau = " + std::to_string(tau) + ", h = " +
                    std::to_string(domain.hx()) + "): " + e.what());
    }
}

Field explicit_product(const AxisOperator& ax, const AxisOperator& ay, const Field& x) {
    DenseMatrix t = matmul(ax.explicit_mat, as_matrix(x));
    return as_field(matmul(t, ay.explicit_mat));
}

Field implicit_solve(const AxisOperator& ax, const AxisOperator& ay, const Field& rhs) {
    DenseMatrix t = matmul(ax.implicit_inv, as_matrix(rhs));
    return as_field(matmul(t, ay.implicit_inv));
}

namespace {

/// Shared core of the first and the generic step. `quad` holds the frozen
/// quadratic factor: (V^0)^2 with weight tau on the first step, otherwise
/// (3V^n - V^{n-1})^2 with weight tau/4.
FieldPair advance(const FieldPair& curr, const Field& quad, double quad_weight,
                  const SolverWorkspace& ws) {
    check_finite(curr.u, "U^n");
    check_finite(curr.v, "V^n");
    const double tau = ws.tau;
    const double feed = ws.params.feed();
    const double decay_rate = ws.params.decay();
    const std::size_t count = curr.u.data.size();

    const Field pu = explicit_product(ws.ux, ws.uy, curr.u);
    const Field pv = explicit_product(ws.vx, ws.vy, curr.v);

    // U^{n+1} first: its right-hand side couples only to the U unknown.
    FieldPair next;
    picard(
        ws.ux, ws.uy, curr.u,
        [&](const Field& guess, Field& rhs) {
            for (std::size_t m = 0; m < count; ++m) {
                const double uhalf = 0.5 * (guess.data[m] + curr.u.data[m]);
                rhs.data[m] = pu.data[m] - quad_weight * uhalf * quad.data[m] +
                              feed * tau * (1.0 - uhalf);
            }
        },
        ws.picard_tol, ws.picard_cap, next.u);

    // Then V^{n+1}, with the converged U^{n+1/2} in the quadratic source.
    Field uhalf(curr.u.rows, curr.u.cols);
    for (std::size_t m = 0; m < count; ++m)
        uhalf.data[m] = 0.5 * (next.u.data[m] + curr.u.data[m]);
    picard(
        ws.vx, ws.vy, curr.v,
        [&](const Field& guess, Field& rhs) {
            for (std::size_t m = 0; m < count; ++m) {
                const double vhalf = 0.5 * (guess.data[m] + curr.v.data[m]);
                rhs.data[m] = pv.data[m] + quad_weight * uhalf.data[m] * quad.data[m] -
                              tau * (feed + decay_rate) * vhalf;
            }
        },
        ws.picard_tol, ws.picard_cap, next.v);

    check_finite(next.u, "U^{n+1}");
    check_finite(next.v, "V^{n+1}");
    return next;
}

} // namespace

FieldPair step_first(const FieldPair& state0, const SolverWorkspace& ws) {
    Field quad(state0.v.rows, state0.v.cols);
    for (std::size_t m = 0; m < quad.data.size(); ++m) {
        const double v0 = state0.v.data[m];
        quad.data[m] = v0 * v0;
    }
    return advance(state0, quad, ws.tau, ws);
}

FieldPair step(const FieldPair& state_prev, const FieldPair& state_curr,
               const SolverWorkspace& ws) {
    if (state_prev.v.data.size() != state_curr.v.data.size())
        throw Error("step: state shapes disagree");
    Field quad(state_curr.v.rows, state_curr.v.cols);
    for (std::size_t m = 0; m < quad.data.size(); ++m) {
        const double e = 3.0 * state_curr.v.data[m] - state_prev.v.data[m];
        quad.data[m] = e * e;
    }
    return advance(state_curr, quad, ws.tau / 4.0, ws);
}

NormBounds::NormBounds(const FieldPair& initial, const Domain2D& domain, double horizon)
    : horizon(horizon) {
    norm_u0_sq = norm_sq(initial.u, domain);
    Field w = initial.u;
    for (std::size_t m = 0; m < w.data.size(); ++m) w.data[m] += initial.v.data[m];
    norm_w0_sq = norm_sq(w, domain);
}

DiagnosticsRecord norm_diagnostics(const FieldPair& state, const ModelParams& params,
                                   const Domain2D& domain, const NormBounds& ctx, double t) {
    DiagnosticsRecord rec{};
    rec.norm_u_sq = norm_sq(state.u, domain);
    rec.norm_v_sq = norm_sq(state.v, domain);
    Field w = state.u;
    for (std::size_t m = 0; m < w.data.size(); ++m) w.data[m] += state.v.data[m];
    rec.norm_w_sq = norm_sq(w, domain);

    const double area = domain.area();
    rec.bound_u = ctx.norm_u0_sq + params.feed() * t * area;

    double ratio = 0.0;
    if (params.mu_u() != params.mu_v()) {
        const double c = std::cos(M_PI * params.alpha() / 2.0);
        const double denom = 2.0 * params.mu_u() * params.mu_v() * c * c;
        const double diff = params.mu_v() - params.mu_u();
        ratio = denom > 0.0 ? diff * diff / denom : std::numeric_limits<double>::infinity();
    }
    const double kt = params.decay() * ctx.horizon;
    const double ft_area = params.feed() * ctx.horizon * area;
    rec.bound_w = ctx.norm_w0_sq + (kt + ratio) * ctx.norm_u0_sq + (1.0 + kt + ratio) * ft_area;
    return rec;
}

} // namespace fgs
