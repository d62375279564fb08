#pragma once

#include <cstddef>
#include <vector>

#include "fgs/fracops.hpp"

namespace fgs {

/// Reaction/diffusion parameters of the two-species model. K_u and K_v are
/// derived from (mu, alpha) at construction and never stored independently:
///   K = mu / (4 cos(pi alpha / 2)),
/// which is <= 0 for alpha in (1, 2] (equal to -mu/4 at alpha = 2).
/// F = kappa = 0 is admitted so the pure-diffusion limit stays expressible;
/// the steady-state analysis enforces its own stricter preconditions.
class ModelParams {
public:
    ModelParams(FractionalOrder alpha, double mu_u, double mu_v, double feed, double decay);

    double alpha() const { return alpha_.value(); }
    FractionalOrder order() const { return alpha_; }
    double mu_u() const { return mu_u_; }
    double mu_v() const { return mu_v_; }
    double feed() const { return feed_; }
    double decay() const { return decay_; }
    double k_u() const { return k_u_; }
    double k_v() const { return k_v_; }

private:
    FractionalOrder alpha_;
    double mu_u_, mu_v_;
    double feed_, decay_;
    double k_u_, k_v_;
};

/// Uniform rectangular grid on (a,b) x (c,d) with N_x, N_y partitions per
/// axis. Interior nodes are x_i = a + i h_x, i = 1..N_x-1 (and likewise in y);
/// the boundary ring is pinned to zero by the schemes.
class Domain2D {
public:
    Domain2D(double a, double b, double c, double d, std::size_t nx, std::size_t ny);

    double a() const { return a_; }
    double b() const { return b_; }
    double c() const { return c_; }
    double d() const { return d_; }
    std::size_t nx() const { return nx_; }
    std::size_t ny() const { return ny_; }
    double hx() const { return (b_ - a_) / static_cast<double>(nx_); }
    double hy() const { return (d_ - c_) / static_cast<double>(ny_); }
    double x(std::size_t i) const { return a_ + static_cast<double>(i) * hx(); }
    double y(std::size_t j) const { return c_ + static_cast<double>(j) * hy(); }
    double area() const { return (b_ - a_) * (d_ - c_); }
    std::size_t interior_x() const { return nx_ - 1; }
    std::size_t interior_y() const { return ny_ - 1; }

    bool operator==(const Domain2D&) const = default;

private:
    double a_, b_, c_, d_;
    std::size_t nx_, ny_;
};

/// Uniform time grid t_n = n tau, n = 0..M.
struct TimeGrid {
    TimeGrid(double tau, std::size_t steps);
    double tau;
    std::size_t steps;
    double horizon() const { return tau * static_cast<double>(steps); }
};

/// One interior-grid scalar field, row index = x, column index = y.
struct Field {
    Field() = default;
    Field(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows(rows), cols(cols), data(rows * cols, fill) {}

    std::size_t rows = 0, cols = 0;
    std::vector<double> data;

    double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

    bool finite() const;

    bool operator==(const Field&) const = default;
};

/// Interior concentrations (U, V); the Dirichlet boundary ring is implicit.
struct FieldPair {
    Field u, v;
    bool operator==(const FieldPair&) const = default;
};

/// Discrete L2 norm squared: h_x h_y * sum of squares over interior nodes.
double norm_sq(const Field& f, const Domain2D& domain);

} // namespace fgs
