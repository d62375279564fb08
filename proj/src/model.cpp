#include "fgs/model.hpp"

#include <cmath>
#include <string>

#include "fgs/error.hpp"

namespace fgs {

ModelParams::ModelParams(FractionalOrder alpha, double mu_u, double mu_v, double feed,
                         double decay)
    : alpha_(alpha), mu_u_(mu_u), mu_v_(mu_v), feed_(feed), decay_(decay) {
    if (mu_u < 0.0 || mu_v < 0.0) throw Error("diffusion coefficients must be >= 0");
    if (feed < 0.0) throw Error("feed rate F must be >= 0");
    if (decay < 0.0) throw Error("decay rate kappa must be >= 0");
    const double denom = 4.0 * std::cos(M_PI * alpha_.value() / 2.0);
    k_u_ = mu_u_ / denom;
    k_v_ = mu_v_ / denom;
}

Domain2D::Domain2D(double a, double b, double c, double d, std::size_t nx, std::size_t ny)
    : a_(a), b_(b), c_(c), d_(d), nx_(nx), ny_(ny) {
    if (!(b > a) || !(d > c)) throw Error("domain bounds must satisfy b > a and d > c");
    if (nx < 4 || ny < 4)
        throw Error("partition counts must be >= 4, got " + std::to_string(nx) + " x " +
                    std::to_string(ny));
}

TimeGrid::TimeGrid(double tau, std::size_t steps) : tau(tau), steps(steps) {
    if (!(tau > 0.0)) throw Error("time step tau must be positive");
    if (steps < 1) throw Error("time grid needs at least one step");
}

bool Field::finite() const {
    for (double v : data)
        if (!std::isfinite(v)) return false;
    return true;
}

double norm_sq(const Field& f, const Domain2D& domain) {
    double s = 0.0;
    for (double v : f.data) s += v * v;
    return domain.hx() * domain.hy() * s;
}

} // namespace fgs
