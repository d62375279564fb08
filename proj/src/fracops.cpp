#include "fgs/fracops.hpp"

#include <cmath>
#include <string>

#include "fgs/error.hpp"

namespace fgs {

FractionalOrder::FractionalOrder(double alpha) : alpha_(alpha) {
    if (!(alpha > 1.0 && alpha <= 2.0))
        throw Error("fractional order must lie in (1, 2], got " + std::to_string(alpha));
}

std::vector<double> grunwald_g_coeffs(double alpha, std::size_t n) {
    std::vector<double> g(n + 1);
    g[0] = 1.0;
    for (std::size_t k = 1; k <= n; ++k)
        g[k] = g[k - 1] * (1.0 - (alpha + 1.0) / static_cast<double>(k));
    return g;
}

GrunwaldWeights grunwald_weights(FractionalOrder alpha, std::size_t n) {
    if (n < 1) throw Error("grunwald_weights: need n >= 1");
    const double a = alpha.value();
    GrunwaldWeights w{alpha, std::vector<double>(n + 1), grunwald_g_coeffs(a, n)};
    const double c0 = a / 2.0;
    const double c1 = (2.0 - a) / 2.0;
    w.omega[0] = c0 * w.g[0];
    for (std::size_t k = 1; k <= n; ++k) w.omega[k] = c0 * w.g[k] + c1 * w.g[k - 1];
    return w;
}

ToeplitzOperator assemble_operator(const GrunwaldWeights& weights, std::size_t n,
                                   bool symmetrize) {
    if (n < 2) throw Error("assemble_operator: need n >= 2");
    if (weights.omega.size() < n + 1)
        throw Error("assemble_operator: weight sequence of length " +
                    std::to_string(weights.omega.size() - 1) + " too short for n = " +
                    std::to_string(n));
    ToeplitzOperator op;
    op.n_ = n;
    op.symmetrized_ = symmetrize;
    op.col_.assign(n, 0.0);
    op.row_.assign(n, 0.0);
    const auto& w = weights.omega;
    // A(i,j) = omega_{i-j+1} for i-j+1 >= 0; first superdiagonal carries omega_0.
    for (std::size_t i = 0; i < n; ++i) op.col_[i] = w[i + 1];
    op.row_[0] = w[1];
    op.row_[1] = w[0];
    if (symmetrize) {
        // B = A + A^T is symmetric Toeplitz.
        op.col_[0] = 2.0 * w[1];
        op.col_[1] = w[2] + w[0];
        op.row_ = op.col_;
    }
    return op;
}

void ToeplitzOperator::apply(std::span<const double> x, std::span<double> y) const {
    if (x.size() != n_ || y.size() != n_)
        throw Error("ToeplitzOperator::apply: dimension mismatch, operator size " +
                    std::to_string(n_) + " vs line length " + std::to_string(x.size()));
    for (std::size_t i = 0; i < n_; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < n_; ++j) s += (j >= i ? row_[j - i] : col_[i - j]) * x[j];
        y[i] = s;
    }
}

DenseMatrix ToeplitzOperator::dense() const {
    DenseMatrix m(n_, n_);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j) m(i, j) = entry(i, j);
    return m;
}

std::vector<double> apply_riesz_1d(std::span<const double> line, const ToeplitzOperator& op,
                                   double h, double alpha) {
    if (line.size() != op.size())
        throw Error("apply_riesz_1d: line length " + std::to_string(line.size()) +
                    " does not match operator size " + std::to_string(op.size()));
    if (!(h > 0.0)) throw Error("apply_riesz_1d: grid spacing must be positive");
    std::vector<double> out(line.size());
    op.apply(line, out);
    const double scale = 1.0 / std::pow(h, alpha);
    for (double& v : out) v *= scale;
    return out;
}

} // namespace fgs
