#include "support/oracles.hpp"

#include <cmath>
#include <stdexcept>

#include "fgs/linalg.hpp"

namespace fgs::test {

double binomial_g_oracle(double alpha, unsigned k) {
    if (alpha == std::floor(alpha))
        throw std::invalid_argument("gamma oracle needs a non-integer alpha");
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    return sign * std::tgamma(alpha + 1.0) /
           (std::tgamma(static_cast<double>(k) + 1.0) *
            std::tgamma(alpha - static_cast<double>(k) + 1.0));
}

double rl_bump_derivative_pair(double z, double alpha) {
    static constexpr double binom[5] = {1.0, -4.0, 6.0, -4.0, 1.0};
    double s = 0.0;
    for (int m = 0; m < 5; ++m) {
        const double p = 4.0 + m;
        s += binom[m] * std::tgamma(p + 1.0) / std::tgamma(p + 1.0 - alpha) *
             (std::pow(z, p - alpha) + std::pow(1.0 - z, p - alpha));
    }
    return s;
}

// ---------------------------------------------------------------------------
// Classical-Laplacian C-N ADI Gray-Scott solver (independent of fgs_core's
// operator assembly; only elementary tridiagonal sweeps).

ClassicalGsSolver::ClassicalGsSolver(double mu_u, double mu_v, double feed, double decay,
                                     const Domain2D& domain, double tau, double tol, int cap)
    : mu_u_(mu_u), mu_v_(mu_v), feed_(feed), decay_(decay), domain_(domain), tau_(tau),
      tol_(tol), cap_(cap) {}

namespace {

/// Solve (I - r T) x = b for the 1D Laplacian stencil T = tridiag(1,-2,1),
/// i.e. the tridiagonal system with diagonal 1+2r and off-diagonals -r.
void thomas_constant(double r, std::vector<double>& x) {
    const std::size_t n = x.size();
    const double diag = 1.0 + 2.0 * r;
    const double off = -r;
    std::vector<double> c(n);
    c[0] = off / diag;
    x[0] /= diag;
    for (std::size_t i = 1; i < n; ++i) {
        const double m = diag - off * c[i - 1];
        c[i] = off / m;
        x[i] = (x[i] - off * x[i - 1]) / m;
    }
    for (std::size_t i = n - 1; i-- > 0;) x[i] -= c[i] * x[i + 1];
}

/// T X along rows (x direction), zero Dirichlet outside.
Field stencil_x(const Field& x) {
    Field out(x.rows, x.cols, 0.0);
    for (std::size_t i = 0; i < x.rows; ++i)
        for (std::size_t j = 0; j < x.cols; ++j) {
            double s = -2.0 * x(i, j);
            if (i > 0) s += x(i - 1, j);
            if (i + 1 < x.rows) s += x(i + 1, j);
            out(i, j) = s;
        }
    return out;
}

Field stencil_y(const Field& x) {
    Field out(x.rows, x.cols, 0.0);
    for (std::size_t i = 0; i < x.rows; ++i)
        for (std::size_t j = 0; j < x.cols; ++j) {
            double s = -2.0 * x(i, j);
            if (j > 0) s += x(i, j - 1);
            if (j + 1 < x.cols) s += x(i, j + 1);
            out(i, j) = s;
        }
    return out;
}

} // namespace

Field ClassicalGsSolver::solve_axis_x(const Field& rhs, double r) const {
    Field out = rhs;
    std::vector<double> line(rhs.rows);
    for (std::size_t j = 0; j < rhs.cols; ++j) {
        for (std::size_t i = 0; i < rhs.rows; ++i) line[i] = out(i, j);
        thomas_constant(r, line);
        for (std::size_t i = 0; i < rhs.rows; ++i) out(i, j) = line[i];
    }
    return out;
}

Field ClassicalGsSolver::solve_axis_y(const Field& rhs, double r) const {
    Field out = rhs;
    std::vector<double> line(rhs.cols);
    for (std::size_t i = 0; i < rhs.rows; ++i) {
        for (std::size_t j = 0; j < rhs.cols; ++j) line[j] = out(i, j);
        thomas_constant(r, line);
        for (std::size_t j = 0; j < rhs.cols; ++j) out(i, j) = line[j];
    }
    return out;
}

Field ClassicalGsSolver::explicit_part(const Field& x, double r_x, double r_y) const {
    const Field tx = stencil_x(x);
    const Field ty = stencil_y(x);
    const Field txy = stencil_x(ty);
    Field out = x;
    for (std::size_t m = 0; m < out.data.size(); ++m)
        out.data[m] += r_x * tx.data[m] + r_y * ty.data[m] + r_x * r_y * txy.data[m];
    return out;
}

template <typename Reaction>
Field ClassicalGsSolver::picard(const Field& init, double r_x, double r_y,
                                Reaction&& reaction) const {
    Field guess = init;
    Field rhs(init.rows, init.cols);
    for (int it = 1; it <= cap_; ++it) {
        reaction(guess, rhs);
        Field next = solve_axis_y(solve_axis_x(rhs, r_x), r_y);
        double update = 0.0;
        for (std::size_t m = 0; m < next.data.size(); ++m)
            update = std::max(update, std::abs(next.data[m] - guess.data[m]));
        guess = next;
        if (update < tol_) return guess;
        if (it == cap_) throw std::runtime_error("classical oracle: coupling stalled");
    }
    return guess;
}

FieldPair ClassicalGsSolver::advance(const FieldPair& curr, const Field& quad,
                                     double quad_weight) const {
    const double rux = tau_ * mu_u_ / (2.0 * domain_.hx() * domain_.hx());
    const double ruy = tau_ * mu_u_ / (2.0 * domain_.hy() * domain_.hy());
    const double rvx = tau_ * mu_v_ / (2.0 * domain_.hx() * domain_.hx());
    const double rvy = tau_ * mu_v_ / (2.0 * domain_.hy() * domain_.hy());

    const Field pu = explicit_part(curr.u, rux, ruy);
    const Field pv = explicit_part(curr.v, rvx, rvy);
    const std::size_t count = curr.u.data.size();

    FieldPair next;
    next.u = picard(curr.u, rux, ruy, [&](const Field& guess, Field& rhs) {
        for (std::size_t m = 0; m < count; ++m) {
            const double uhalf = 0.5 * (guess.data[m] + curr.u.data[m]);
            rhs.data[m] = pu.data[m] - quad_weight * uhalf * quad.data[m] +
                          feed_ * tau_ * (1.0 - uhalf);
        }
    });
    Field uhalf(curr.u.rows, curr.u.cols);
    for (std::size_t m = 0; m < count; ++m)
        uhalf.data[m] = 0.5 * (next.u.data[m] + curr.u.data[m]);
    next.v = picard(curr.v, rvx, rvy, [&](const Field& guess, Field& rhs) {
        for (std::size_t m = 0; m < count; ++m) {
            const double vhalf = 0.5 * (guess.data[m] + curr.v.data[m]);
            rhs.data[m] = pv.data[m] + quad_weight * uhalf.data[m] * quad.data[m] -
                          tau_ * (feed_ + decay_) * vhalf;
        }
    });
    return next;
}

FieldPair ClassicalGsSolver::step_first(const FieldPair& state0) const {
    Field quad(state0.v.rows, state0.v.cols);
    for (std::size_t m = 0; m < quad.data.size(); ++m)
        quad.data[m] = state0.v.data[m] * state0.v.data[m];
    return advance(state0, quad, tau_);
}

FieldPair ClassicalGsSolver::step(const FieldPair& prev, const FieldPair& curr) const {
    Field quad(curr.v.rows, curr.v.cols);
    for (std::size_t m = 0; m < quad.data.size(); ++m) {
        const double e = 3.0 * curr.v.data[m] - prev.v.data[m];
        quad.data[m] = e * e;
    }
    return advance(curr, quad, tau_ / 4.0);
}

// ---------------------------------------------------------------------------
// Unfactored two-dimensional solve.

namespace {

/// Dense Kronecker operator I + (Sx (x) I) + (I (x) Sy) for row-major vec.
DenseMatrix kron_system(const DenseMatrix& sx, const DenseMatrix& sy) {
    const std::size_t nx = sx.rows();
    const std::size_t ny = sy.rows();
    DenseMatrix big(nx * ny, nx * ny, 0.0);
    for (std::size_t i = 0; i < nx; ++i)
        for (std::size_t j = 0; j < ny; ++j) {
            const std::size_t row = i * ny + j;
            big(row, row) += 1.0;
            for (std::size_t k = 0; k < nx; ++k) big(row, k * ny + j) += sx(i, k);
            for (std::size_t l = 0; l < ny; ++l) big(row, i * ny + l) += sy(j, l);
        }
    return big;
}

Field apply_unfactored_explicit(const Field& x, const DenseMatrix& sx, const DenseMatrix& sy) {
    // (I - Sx (x) I - I (x) Sy) vec(X) = X - Sx X - X Sy  (Sy symmetric)
    Field out = x;
    for (std::size_t i = 0; i < x.rows; ++i)
        for (std::size_t j = 0; j < x.cols; ++j) {
            double acc = 0.0;
            for (std::size_t k = 0; k < x.rows; ++k) acc += sx(i, k) * x(k, j);
            for (std::size_t l = 0; l < x.cols; ++l) acc += sy(j, l) * x(i, l);
            out(i, j) -= acc;
        }
    return out;
}

DenseMatrix scaled_operator(const AxisOperator& op) {
    DenseMatrix s = op.implicit_mat;
    for (std::size_t i = 0; i < s.rows(); ++i) s(i, i) -= 1.0;
    return s;
}

} // namespace

FieldPair unfactored_step(const FieldPair& prev, const FieldPair& curr,
                          const SolverWorkspace& ws, bool first_step) {
    const double tau = ws.tau;
    const double feed = ws.params.feed();
    const double decay = ws.params.decay();
    const std::size_t count = curr.u.data.size();

    Field quad(curr.v.rows, curr.v.cols);
    double quad_weight;
    if (first_step) {
        for (std::size_t m = 0; m < count; ++m)
            quad.data[m] = curr.v.data[m] * curr.v.data[m];
        quad_weight = tau;
    } else {
        for (std::size_t m = 0; m < count; ++m) {
            const double e = 3.0 * curr.v.data[m] - prev.v.data[m];
            quad.data[m] = e * e;
        }
        quad_weight = tau / 4.0;
    }

    const DenseMatrix sux = scaled_operator(ws.ux);
    const DenseMatrix suy = scaled_operator(ws.uy);
    const DenseMatrix svx = scaled_operator(ws.vx);
    const DenseMatrix svy = scaled_operator(ws.vy);
    const LuFactor lu_u(kron_system(sux, suy));
    const LuFactor lu_v(kron_system(svx, svy));

    const Field pu = apply_unfactored_explicit(curr.u, sux, suy);
    const Field pv = apply_unfactored_explicit(curr.v, svx, svy);

    auto solve_species = [&](const LuFactor& lu, const Field& init, auto&& reaction) {
        Field guess = init;
        for (int it = 1; it <= ws.picard_cap; ++it) {
            Field rhs(init.rows, init.cols);
            reaction(guess, rhs);
            lu.solve(std::span<double>(rhs.data));
            double update = 0.0;
            for (std::size_t m = 0; m < count; ++m)
                update = std::max(update, std::abs(rhs.data[m] - guess.data[m]));
            guess = rhs;
            if (update < ws.picard_tol) return guess;
            if (it == ws.picard_cap)
                throw std::runtime_error("unfactored oracle: coupling stalled");
        }
        return guess;
    };

    FieldPair next;
    next.u = solve_species(lu_u, curr.u, [&](const Field& guess, Field& rhs) {
        for (std::size_t m = 0; m < count; ++m) {
            const double uhalf = 0.5 * (guess.data[m] + curr.u.data[m]);
            rhs.data[m] = pu.data[m] - quad_weight * uhalf * quad.data[m] +
                          feed * tau * (1.0 - uhalf);
        }
    });
    Field uhalf(curr.u.rows, curr.u.cols);
    for (std::size_t m = 0; m < count; ++m)
        uhalf.data[m] = 0.5 * (next.u.data[m] + curr.u.data[m]);
    next.v = solve_species(lu_v, curr.v, [&](const Field& guess, Field& rhs) {
        for (std::size_t m = 0; m < count; ++m) {
            const double vhalf = 0.5 * (guess.data[m] + curr.v.data[m]);
            rhs.data[m] = pv.data[m] + quad_weight * uhalf.data[m] * quad.data[m] -
                          tau * (feed + decay) * vhalf;
        }
    });
    return next;
}

} // namespace fgs::test
