#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace fgs {

/// Dense row-major matrix of doubles. Thin container; heavy kernels are
/// delegated to BLAS/LAPACK through the free functions below.
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static DenseMatrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }
    std::span<const double> values() const { return data_; }
    std::span<double> values() { return data_; }

    bool operator==(const DenseMatrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// c = a * b. Shapes must agree; c is resized.
void matmul(const DenseMatrix& a, const DenseMatrix& b, DenseMatrix& c);
DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);

/// y = a * x for a vector x of length a.cols().
void matvec(const DenseMatrix& a, std::span<const double> x, std::span<double> y);

DenseMatrix transpose(const DenseMatrix& a);

/// Partially pivoted LU of a square matrix, kept for repeated solves.
/// Throws fgs::Error if the matrix is numerically singular.
class LuFactor {
public:
    explicit LuFactor(const DenseMatrix& a);

    std::size_t size() const { return n_; }

    /// Solve A x = b in place (b holds the solution on return).
    void solve(std::span<double> b) const;

    /// Column-block solve A X = B where B is n x m row-major, in place.
    void solve(DenseMatrix& b) const;

    /// Explicit inverse of the factored matrix.
    DenseMatrix inverse() const;

private:
    std::size_t n_ = 0;
    std::vector<double> lu_;   // row-major factors as returned by dgetrf
    std::vector<int> ipiv_;
};

/// Eigenvalues (ascending) of a symmetric matrix; used by diagnostics and
/// test oracles. Input is not modified.
std::vector<double> symmetric_eigenvalues(const DenseMatrix& a);

/// Max-norm of the difference of two equally sized buffers.
double max_abs_diff(std::span<const double> a, std::span<const double> b);

/// Pin the BLAS backend to one thread. Step arithmetic stays bitwise
/// reproducible only when the backend's schedule is fixed, so the solver
/// calls this once before any factorization.
void pin_blas_single_thread();

} // namespace fgs
