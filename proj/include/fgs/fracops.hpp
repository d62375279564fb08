#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fgs/linalg.hpp"

namespace fgs {

/// Fractional order alpha of the Riesz derivative, restricted to (1, 2].
class FractionalOrder {
public:
    explicit FractionalOrder(double alpha);
    double value() const { return alpha_; }

private:
    double alpha_;
};

/// g_0..g_n with g_k = (-1)^k * binom(alpha, k), computed by the
/// multiplicative recurrence g_k = g_{k-1} * (1 - (alpha+1)/k).
/// Defined for any real alpha; the solver always passes alpha in (1, 2].
std::vector<double> grunwald_g_coeffs(double alpha, std::size_t n);

/// Weighted shifted Grunwald weights for one-sided Riemann-Liouville
/// derivatives, second-order accurate with shift (p, q) = (1, 0):
///   omega_0 = (alpha/2) g_0,
///   omega_k = (alpha/2) g_k + ((2-alpha)/2) g_{k-1},  k >= 1.
struct GrunwaldWeights {
    FractionalOrder alpha;
    std::vector<double> omega;   // omega_0..omega_n
    std::vector<double> g;       // g_0..g_n
};

GrunwaldWeights grunwald_weights(FractionalOrder alpha, std::size_t n);

/// The lower-Hessenberg Toeplitz matrix A realizing the one-sided weighted
/// shifted Grunwald sum on one grid line (entry (i,j) = omega_{i-j+1}, first
/// superdiagonal = omega_0), or its symmetrization B = A + A^T which carries
/// both one-sided derivatives. Stored compressed as first column + first row.
class ToeplitzOperator {
public:
    std::size_t size() const { return n_; }
    bool symmetrized() const { return symmetrized_; }
    std::span<const double> first_column() const { return col_; }
    std::span<const double> first_row() const { return row_; }

    double entry(std::size_t i, std::size_t j) const {
        return j >= i ? row_[j - i] : col_[i - j];
    }

    /// y = T x by direct O(n^2) Toeplitz multiplication.
    void apply(std::span<const double> x, std::span<double> y) const;

    /// Dense materialization; only meant to feed factorizations.
    DenseMatrix dense() const;

    friend ToeplitzOperator assemble_operator(const GrunwaldWeights&, std::size_t, bool);

private:
    std::size_t n_ = 0;
    std::vector<double> col_;    // entries (i,0), i = 0..n-1
    std::vector<double> row_;    // entries (0,j), j = 0..n-1
    bool symmetrized_ = false;
};

/// Build A (or B = A + A^T when symmetrize is set) of order n from the
/// weight sequence; requires weights.omega to run at least to index n.
ToeplitzOperator assemble_operator(const GrunwaldWeights& weights, std::size_t n,
                                   bool symmetrize);

/// Action of the per-axis Grunwald difference operator on one interior grid
/// line: (1/h^alpha) B x, approximating the sum of the left and right
/// Riemann-Liouville derivatives with homogeneous Dirichlet boundary.
std::vector<double> apply_riesz_1d(std::span<const double> line, const ToeplitzOperator& op,
                                   double h, double alpha);

} // namespace fgs
