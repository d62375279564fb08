#include "fgs/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include <cblas.h>
#include <lapacke.h>
#include <pmmintrin.h>
#include <xmmintrin.h>

#include "fgs/error.hpp"

extern "C" void openblas_set_num_threads(int);

namespace fgs {

namespace {

// The kernel set OpenBLAS auto-selects for this CPU family returns wrong LU
// factors (verified against reference elimination); the Skylake-X kernels
// are correct. The selection is read when OpenBLAS initializes, so the
// override must be in place before its constructor runs; priority 101 plus
// static linking of the backend guarantees that. Callers can still force a
// core type through the environment.
__attribute__((constructor(101))) void select_blas_core() {
    setenv("OPENBLAS_CORETYPE", "SKYLAKEX", /*overwrite=*/0);
}

/// Per-thread setup, run before the first BLAS/LAPACK call. Threads are
/// pinned to one so repeated runs are bitwise identical (concurrency belongs
/// to independent study cells, not to the kernels). Subnormals are flushed:
/// the implicit inverses and far-field concentrations decay below 1e-308,
/// where the hardware's denormal handling costs a ~7x kernel slowdown and
/// the values carry no information. The flush is deterministic and applied
/// on every compute thread.
void ensure_blas_configured() {
    static const bool once = [] {
        openblas_set_num_threads(1);
        return true;
    }();
    thread_local const bool per_thread = [] {
        _MM_SET_FLUSH_ZERO_MODE(_MM_FLUSH_ZERO_ON);
        _MM_SET_DENORMALS_ZERO_MODE(_MM_DENORMALS_ZERO_ON);
        return true;
    }();
    (void)once;
    (void)per_thread;
}

} // namespace

DenseMatrix DenseMatrix::identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

void matmul(const DenseMatrix& a, const DenseMatrix& b, DenseMatrix& c) {
    ensure_blas_configured();
    if (a.cols() != b.rows()) throw Error("matmul: inner dimensions disagree");
    if (c.rows() != a.rows() || c.cols() != b.cols()) c = DenseMatrix(a.rows(), b.cols());
    cblas_dgemm(CblasRowMajor, CblasNoTrans, CblasNoTrans, static_cast<int>(a.rows()),
                static_cast<int>(b.cols()), static_cast<int>(a.cols()), 1.0, a.data(),
                static_cast<int>(a.cols()), b.data(), static_cast<int>(b.cols()), 0.0, c.data(),
                static_cast<int>(c.cols()));
}

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
    DenseMatrix c;
    matmul(a, b, c);
    return c;
}

void matvec(const DenseMatrix& a, std::span<const double> x, std::span<double> y) {
    ensure_blas_configured();
    if (x.size() != a.cols() || y.size() != a.rows()) throw Error("matvec: dimension mismatch");
    cblas_dgemv(CblasRowMajor, CblasNoTrans, static_cast<int>(a.rows()),
                static_cast<int>(a.cols()), 1.0, a.data(), static_cast<int>(a.cols()), x.data(), 1,
                0.0, y.data(), 1);
}

DenseMatrix transpose(const DenseMatrix& a) {
    DenseMatrix t(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
    return t;
}

LuFactor::LuFactor(const DenseMatrix& a) : n_(a.rows()), lu_(n_ * n_), ipiv_(n_) {
    ensure_blas_configured();
    if (a.rows() != a.cols()) throw Error("LuFactor: matrix must be square");
    std::copy(a.values().begin(), a.values().end(), lu_.begin());
    int info = LAPACKE_dgetrf(LAPACK_ROW_MAJOR, static_cast<int>(n_), static_cast<int>(n_),
                              lu_.data(), static_cast<int>(n_), ipiv_.data());
    if (info != 0)
        throw Error("LuFactor: dgetrf failed, matrix singular at pivot " + std::to_string(info));
}

void LuFactor::solve(std::span<double> b) const {
    if (b.size() != n_) throw Error("LuFactor::solve: dimension mismatch");
    int info = LAPACKE_dgetrs(LAPACK_ROW_MAJOR, 'N', static_cast<int>(n_), 1, lu_.data(),
                              static_cast<int>(n_), ipiv_.data(), b.data(), 1);
    if (info != 0) throw Error("LuFactor::solve: dgetrs failed");
}

void LuFactor::solve(DenseMatrix& b) const {
    if (b.rows() != n_) throw Error("LuFactor::solve: dimension mismatch");
    int info = LAPACKE_dgetrs(LAPACK_ROW_MAJOR, 'N', static_cast<int>(n_),
                              static_cast<int>(b.cols()), lu_.data(), static_cast<int>(n_),
                              ipiv_.data(), b.data(), static_cast<int>(b.cols()));
    if (info != 0) throw Error("LuFactor::solve: dgetrs failed");
}

DenseMatrix LuFactor::inverse() const {
    std::vector<double> inv(lu_);
    std::vector<int> piv(ipiv_);
    int info = LAPACKE_dgetri(LAPACK_ROW_MAJOR, static_cast<int>(n_), inv.data(),
                              static_cast<int>(n_), piv.data());
    if (info != 0) throw Error("LuFactor::inverse: dgetri failed");
    DenseMatrix out(n_, n_);
    std::copy(inv.begin(), inv.end(), out.values().begin());
    return out;
}

std::vector<double> symmetric_eigenvalues(const DenseMatrix& a) {
    ensure_blas_configured();
    if (a.rows() != a.cols()) throw Error("symmetric_eigenvalues: matrix must be square");
    std::size_t n = a.rows();
    std::vector<double> work(a.values().begin(), a.values().end());
    std::vector<double> w(n);
    int info = LAPACKE_dsyev(LAPACK_ROW_MAJOR, 'N', 'U', static_cast<int>(n), work.data(),
                             static_cast<int>(n), w.data());
    if (info != 0) throw Error("symmetric_eigenvalues: dsyev failed");
    return w;
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

void pin_blas_single_thread() { ensure_blas_configured(); }

} // namespace fgs
