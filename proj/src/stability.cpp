#include "fgs/stability.hpp"

#include <cmath>

#include "fgs/error.hpp"

namespace fgs {

namespace {

constexpr double kCurveTieBand = 1e-12;

DispersionCoeffs make_coeffs(std::pair<double, double> state, double mu_u, double mu_v,
                             double feed, double decay, double k_abs_alpha) {
    const double u = state.first;
    const double v = state.second;
    DispersionCoeffs c{};
    c.k_abs_alpha = k_abs_alpha;
    c.t_k = (mu_u + mu_v) * k_abs_alpha + 2.0 * feed + decay + v * v - 2.0 * u * v;
    c.d_k = mu_u * mu_v * k_abs_alpha * k_abs_alpha +
            ((v * v + feed) * mu_v + (feed + decay - 2.0 * u * v) * mu_u) * k_abs_alpha +
            (feed + decay) * (v * v + feed) - 2.0 * feed * u * v;
    return c;
}

/// Roots of lambda^2 + T lambda + D = 0; complex pair allowed.
std::pair<std::complex<double>, std::complex<double>> quadratic_roots(double t, double d) {
    const double disc = t * t - 4.0 * d;
    if (disc >= 0.0) {
        const double root = std::sqrt(disc);
        // Evaluate the larger-magnitude root without cancellation, then use
        // the product of roots for the other.
        double r1;
        if (t >= 0.0)
            r1 = (-t - root) / 2.0;
        else
            r1 = (-t + root) / 2.0;
        double r2 = r1 != 0.0 ? d / r1 : (-t - r1);
        return {std::complex<double>(r1, 0.0), std::complex<double>(r2, 0.0)};
    }
    const double re = -t / 2.0;
    const double im = std::sqrt(-disc) / 2.0;
    return {std::complex<double>(re, im), std::complex<double>(re, -im)};
}

} // namespace

SteadyStateSet steady_states(double feed, double decay) {
    if (!(feed > 0.0)) throw Error("steady_states: feed rate F must be positive");
    if (decay < 0.0) throw Error("steady_states: decay rate kappa must be >= 0");
    SteadyStateSet set;
    set.gamma = (feed + decay) / feed;
    set.discriminant = 1.0 - 4.0 * set.gamma * set.gamma * feed;
    if (set.discriminant >= 0.0) {
        const double root = std::sqrt(set.discriminant);
        const double u_plus = 0.5 * (1.0 + root);
        const double u_minus = 0.5 * (1.0 - root);
        const double v_minus = (1.0 - root) / (2.0 * set.gamma);
        const double v_plus = (1.0 + root) / (2.0 * set.gamma);
        set.nontrivial = {{u_plus, v_minus}, {u_minus, v_plus}};
    }
    return set;
}

double saddle_node_kappa(double feed) {
    if (!(feed >= 0.0 && feed <= 0.25))
        throw Error("saddle_node_kappa: F must lie in [0, 1/4]");
    return -feed + 0.5 * std::sqrt(feed);
}

double hopf_feed(double decay) {
    if (decay < 0.0) throw Error("hopf_feed: kappa must be >= 0");
    const double sqrt_k = std::sqrt(decay);
    const double inner = (2.0 * decay - sqrt_k) * (2.0 * decay - sqrt_k) - 4.0 * decay * decay;
    if (inner < 0.0)
        throw Error("hopf_feed: kappa = " + std::to_string(decay) +
                    " is outside the admissible range [0, 1/16]");
    return 0.5 * (sqrt_k - 2.0 * decay - std::sqrt(inner));
}

DispersionResult dispersion(std::pair<double, double> state, const ModelParams& params,
                            double k1, double k2) {
    const double alpha = params.alpha();
    const double k_abs = std::pow(std::abs(k1), alpha) + std::pow(std::abs(k2), alpha);
    DispersionResult res{};
    res.coeffs =
        make_coeffs(state, params.mu_u(), params.mu_v(), params.feed(), params.decay(), k_abs);
    auto [l1, l2] = quadratic_roots(res.coeffs.t_k, res.coeffs.d_k);
    res.lambda1 = l1;
    res.lambda2 = l2;
    res.re_lambda_max = std::max(l1.real(), l2.real());
    return res;
}

std::string region_name(Region r) {
    switch (r) {
        case Region::I: return "I";
        case Region::II: return "II";
        case Region::III: return "III";
        default: return "boundary";
    }
}

Region classify_region(double feed, double decay) {
    if (!(feed > 0.0) || !(decay > 0.0))
        throw Error("classify_region: F and kappa must be positive");
    const auto set = steady_states(feed, decay);
    if (std::abs(set.discriminant) <= kCurveTieBand) return Region::Boundary;
    if (set.discriminant < 0.0) return Region::III;
    const auto coeffs = make_coeffs(set.nontrivial->second, 0.0, 0.0, feed, decay, 0.0);
    auto [l1, l2] = quadratic_roots(coeffs.t_k, coeffs.d_k);
    const double re_max = std::max(l1.real(), l2.real());
    if (std::abs(re_max) <= kCurveTieBand) return Region::Boundary;
    return re_max < 0.0 ? Region::II : Region::I;
}

std::vector<PhasePoint> phase_scan(double kappa_min, double kappa_max, std::size_t n_kappa,
                                   double feed_min, double feed_max, std::size_t n_feed) {
    if (n_kappa < 2 || n_feed < 2) throw Error("phase_scan: need at least 2 points per axis");
    std::vector<PhasePoint> out;
    out.reserve(n_kappa * n_feed);
    for (std::size_t i = 0; i < n_kappa; ++i) {
        const double kappa =
            kappa_min + (kappa_max - kappa_min) * static_cast<double>(i) /
                            static_cast<double>(n_kappa - 1);
        for (std::size_t j = 0; j < n_feed; ++j) {
            const double feed = feed_min + (feed_max - feed_min) * static_cast<double>(j) /
                                               static_cast<double>(n_feed - 1);
            PhasePoint p{kappa, feed, Region::III, 0.0};
            if (feed <= 0.0 || kappa <= 0.0) {
                // On the axes only the trivial state is meaningful.
                const auto coeffs =
                    make_coeffs({1.0, 0.0}, 0.0, 0.0, feed, kappa, 0.0);
                auto [l1, l2] = quadratic_roots(coeffs.t_k, coeffs.d_k);
                p.region = Region::Boundary;
                p.re_lambda_max = std::max(l1.real(), l2.real());
            } else {
                p.region = classify_region(feed, kappa);
                const auto set = steady_states(feed, kappa);
                const auto state = set.nontrivial ? set.nontrivial->second
                                                  : set.trivial;
                const auto coeffs = make_coeffs(state, 0.0, 0.0, feed, kappa, 0.0);
                auto [l1, l2] = quadratic_roots(coeffs.t_k, coeffs.d_k);
                p.re_lambda_max = std::max(l1.real(), l2.real());
            }
            out.push_back(p);
        }
    }
    return out;
}

} // namespace fgs
