#include "fgs/verifier.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "fgs/error.hpp"

namespace fgs {

namespace {

double poly_bump(double z) {
    const double w = z * (1.0 - z);
    const double w2 = w * w;
    return w2 * w2;
}

/// One-sided Riemann-Liouville derivative pair of z^4(1-z)^4 as the Gamma
/// series of the monomial expansion; shared by the x and y groups of the
/// benchmark source.
double rl_pair_series(double z, double alpha) {
    static constexpr double binom[5] = {1.0, -4.0, 6.0, -4.0, 1.0};
    double s = 0.0;
    for (int m = 0; m < 5; ++m) {
        const double p = 4.0 + m;
        const double coeff = binom[m] * std::tgamma(p + 1.0) / std::tgamma(p + 1.0 - alpha);
        s += coeff * (std::pow(z, p - alpha) + std::pow(1.0 - z, p - alpha));
    }
    return s;
}

} // namespace

double exact_ex1(double x, double y, double t) {
    return std::exp(-t) * poly_bump(x) * poly_bump(y);
}

double source_ex1(double x, double y, double t, double alpha) {
    if (!(alpha > 1.0 && alpha < 2.0))
        throw Error("source_ex1: the benchmark source is defined for alpha in (1, 2); "
                    "got alpha = " +
                    std::to_string(alpha));
    const double k = 1.0 / (2.0 * std::cos(M_PI * alpha / 2.0));
    const double xs = poly_bump(x);
    const double ys = poly_bump(y);
    return std::exp(-t) *
           (-xs * ys + k * (ys * rl_pair_series(x, alpha) + xs * rl_pair_series(y, alpha)));
}

std::vector<double> centered_riesz_coeffs(double alpha, std::size_t n) {
    std::vector<double> c(n + 1);
    const double half = alpha / 2.0;
    c[0] = std::tgamma(alpha + 1.0) / (std::tgamma(half + 1.0) * std::tgamma(half + 1.0));
    for (std::size_t k = 0; k < n; ++k) {
        const double dk = static_cast<double>(k);
        c[k + 1] = c[k] * (dk - half) / (dk + half + 1.0);
    }
    return c;
}

DenseMatrix centered_operator_dense(double alpha, std::size_t n) {
    const auto c = centered_riesz_coeffs(alpha, n == 0 ? 0 : n - 1);
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            m(i, j) = c[i >= j ? i - j : j - i];
    return m;
}

namespace {

AxisOperator make_diffusion_axis(FractionalOrder alpha, std::size_t n, double h, double tau,
                                 double mu, Discretization disc) {
    const double a = alpha.value();
    if (disc == Discretization::ShiftedGrunwald) {
        const auto weights = grunwald_weights(alpha, n);
        const DenseMatrix b = assemble_operator(weights, n, true).dense();
        const double k = mu / (4.0 * std::cos(M_PI * a / 2.0));
        return AxisOperator(b, tau * k / std::pow(h, a));
    }
    const DenseMatrix c = centered_operator_dense(a, n);
    return AxisOperator(c, tau * mu / (2.0 * std::pow(h, a)));
}

} // namespace

DiffusionSolver::DiffusionSolver(FractionalOrder alpha, const Domain2D& domain, double tau,
                                 Discretization disc)
    : domain_(domain), tau_(tau),
      ax_(make_diffusion_axis(alpha, domain.interior_x(), domain.hx(), tau, 1.0, disc)),
      ay_(make_diffusion_axis(alpha, domain.interior_y(), domain.hy(), tau, 1.0, disc)) {}

Field DiffusionSolver::advance(const Field& u, const Field& scaled_source) const {
    Field rhs = explicit_product(ax_, ay_, u);
    for (std::size_t m = 0; m < rhs.data.size(); ++m) rhs.data[m] += scaled_source.data[m];
    return implicit_solve(ax_, ay_, rhs);
}

Field DiffusionSolver::run_separable(const Field& u0, const Field& phi,
                                     const std::function<double(double)>& time_factor,
                                     std::size_t steps) const {
    Field u = u0;
    Field src(u0.rows, u0.cols);
    for (std::size_t n = 0; n < steps; ++n) {
        const double t_mid = (static_cast<double>(n) + 0.5) * tau_;
        const double g = tau_ * time_factor(t_mid);
        for (std::size_t m = 0; m < src.data.size(); ++m) src.data[m] = g * phi.data[m];
        u = advance(u, src);
    }
    return u;
}

SolverWorkspace precompute_cross(const ModelParams& params, const Domain2D& domain, double tau) {
    if (tau < 0.0) throw Error("precompute_cross: tau must be >= 0");
    const std::size_t nx = domain.interior_x();
    const std::size_t ny = domain.interior_y();
    const double alpha = params.alpha();
    const DenseMatrix cx = centered_operator_dense(alpha, nx);
    const DenseMatrix cy = ny == nx ? cx : centered_operator_dense(alpha, ny);
    const double hx_a = std::pow(domain.hx(), alpha);
    const double hy_a = std::pow(domain.hy(), alpha);
    return SolverWorkspace(params, domain, tau,
                           AxisOperator(cx, tau * params.mu_u() / (2.0 * hx_a)),
                           AxisOperator(cy, tau * params.mu_u() / (2.0 * hy_a)),
                           AxisOperator(cx, tau * params.mu_v() / (2.0 * hx_a)),
                           AxisOperator(cy, tau * params.mu_v() / (2.0 * hy_a)));
}

Field exact_ex1_grid(const Domain2D& domain, double t) {
    Field f(domain.interior_x(), domain.interior_y());
    for (std::size_t i = 0; i < f.rows; ++i)
        for (std::size_t j = 0; j < f.cols; ++j)
            f(i, j) = exact_ex1(domain.x(i + 1), domain.y(j + 1), t);
    return f;
}

double relative_l2(const Field& approx, const Field& reference) {
    if (approx.data.size() != reference.data.size())
        throw Error("relative_l2: field shapes disagree");
    double num = 0.0, den = 0.0;
    for (std::size_t m = 0; m < approx.data.size(); ++m) {
        const double d = approx.data[m] - reference.data[m];
        num += d * d;
        den += reference.data[m] * reference.data[m];
    }
    if (den == 0.0) throw Error("relative_l2: reference field is identically zero");
    return std::sqrt(num / den);
}

namespace {

Field source_phi_grid(const Domain2D& domain, double alpha) {
    Field phi(domain.interior_x(), domain.interior_y());
    for (std::size_t i = 0; i < phi.rows; ++i)
        for (std::size_t j = 0; j < phi.cols; ++j)
            phi(i, j) = source_ex1(domain.x(i + 1), domain.y(j + 1), 0.0, alpha);
    return phi;
}

Field sine_grid(const Domain2D& domain) {
    Field f(domain.interior_x(), domain.interior_y());
    for (std::size_t i = 0; i < f.rows; ++i)
        for (std::size_t j = 0; j < f.cols; ++j)
            f(i, j) = std::sin(M_PI * domain.x(i + 1)) * std::sin(M_PI * domain.y(j + 1));
    return f;
}

Field restrict_to(const Field& fine, std::size_t n_fine, std::size_t n_coarse) {
    const std::size_t stride = n_fine / n_coarse;
    Field out(n_coarse - 1, n_coarse - 1);
    for (std::size_t i = 1; i < n_coarse; ++i)
        for (std::size_t j = 1; j < n_coarse; ++j)
            out(i - 1, j - 1) = fine(i * stride - 1, j * stride - 1);
    return out;
}

/// Manufactured-problem error at t_end on an N x N grid with step tau.
double ex1_error(double alpha, std::size_t n, double tau, const StudyConfig& cfg) {
    Domain2D domain(0.0, 1.0, 0.0, 1.0, n, n);
    DiffusionSolver solver(FractionalOrder(alpha), domain, tau, cfg.disc);
    const std::size_t steps = static_cast<std::size_t>(std::llround(cfg.t_end / tau));
    Field u = solver.run_separable(exact_ex1_grid(domain, 0.0), source_phi_grid(domain, alpha),
                                   [](double t) { return std::exp(-t); }, steps);
    return relative_l2(u, exact_ex1_grid(domain, cfg.t_end));
}

} // namespace

std::vector<RateRow> convergence_study(StudyKind kind, std::span<const double> alphas,
                                       std::span<const std::size_t> refinements,
                                       const StudyConfig& cfg) {
    if (refinements.size() < 2)
        throw Error("convergence_study: need at least two refinement levels");
    std::vector<RateRow> rows;
    const double nan = std::numeric_limits<double>::quiet_NaN();

    for (double alpha : alphas) {
        double prev_err = 0.0, prev_step = 0.0;
        bool first = true;

        if (kind == StudyKind::Coupled) {
            // Self-referencing refinement: finest grid is the reference.
            const std::size_t n_ref = cfg.reference_n;
            Domain2D ref_domain(0.0, 1.0, 0.0, 1.0, n_ref, n_ref);
            DiffusionSolver ref_solver(FractionalOrder(alpha), ref_domain, 1.0 / n_ref,
                                       cfg.disc);
            Field phi_ref(ref_domain.interior_x(), ref_domain.interior_y(), 1.0);
            const std::size_t ref_steps =
                static_cast<std::size_t>(std::llround(cfg.t_end * n_ref));
            Field u_ref = ref_solver.run_separable(sine_grid(ref_domain), phi_ref,
                                                   [](double) { return 1.0; }, ref_steps);
            for (std::size_t n : refinements) {
                if (n_ref % n != 0)
                    throw Error("convergence_study: reference grid must refine N = " +
                                std::to_string(n));
                Domain2D domain(0.0, 1.0, 0.0, 1.0, n, n);
                DiffusionSolver solver(FractionalOrder(alpha), domain, 1.0 / n, cfg.disc);
                Field phi(domain.interior_x(), domain.interior_y(), 1.0);
                const std::size_t steps =
                    static_cast<std::size_t>(std::llround(cfg.t_end * n));
                Field u = solver.run_separable(sine_grid(domain), phi,
                                               [](double) { return 1.0; }, steps);
                const double err = relative_l2(u, restrict_to(u_ref, n_ref, n));
                const double h = 1.0 / static_cast<double>(n);
                const double rate = first ? nan : std::log(prev_err / err) /
                                                      std::log(prev_step / h);
                rows.push_back({alpha, h, h, err, rate});
                prev_err = err;
                prev_step = h;
                first = false;
            }
        } else if (kind == StudyKind::Spatial) {
            for (std::size_t n : refinements) {
                const double err = ex1_error(alpha, n, cfg.tau_spatial, cfg);
                const double h = 1.0 / static_cast<double>(n);
                const double rate = first ? nan : std::log(prev_err / err) /
                                                      std::log(prev_step / h);
                rows.push_back({alpha, h, cfg.tau_spatial, err, rate});
                prev_err = err;
                prev_step = h;
                first = false;
            }
        } else {
            for (std::size_t inv_tau : refinements) {
                const double tau = 1.0 / static_cast<double>(inv_tau);
                const double err = ex1_error(alpha, cfg.n_temporal, tau, cfg);
                const double rate = first ? nan : std::log(prev_err / err) /
                                                      std::log(prev_step / tau);
                rows.push_back({alpha, 1.0 / static_cast<double>(cfg.n_temporal), tau, err,
                                rate});
                prev_err = err;
                prev_step = tau;
                first = false;
            }
        }
    }
    return rows;
}

} // namespace fgs
