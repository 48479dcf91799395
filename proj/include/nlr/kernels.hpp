#pragma once

#include <vector>

#include "nlr/matrix.hpp"

namespace nlr {

enum class Op : char { none = 'N', conj_trans = 'C' };

enum class Side { left, right };

/// C := alpha * op(A) * op(B) + beta * C on raw column-major blocks.
/// m, n are the shape of C; kk is the contraction length. Adds m*n*kk to the
/// thread-local multiply-volume counter.
template <typename T>
void gemm_view(Op opa, Op opb, index_t m, index_t n, index_t kk, T alpha, const T* a,
               index_t lda, const T* b, index_t ldb, T beta, T* c, index_t ldc);

/// Dense product A*B. Mixed real/complex overloads promote the real operand.
template <typename T>
Matrix<T> matmul(const Matrix<T>& a, const Matrix<T>& b);
ComplexMatrix matmul(const RealMatrix& a, const ComplexMatrix& b);
ComplexMatrix matmul(const ComplexMatrix& a, const RealMatrix& b);

/// op(A)*op(B) without materializing transposes.
template <typename T>
Matrix<T> matmul_op(Op opa, const Matrix<T>& a, Op opb, const Matrix<T>& b);

template <typename T>
struct QrResult {
    Matrix<T> q;  // rows x cols, orthonormal columns
    Matrix<T> r;  // cols x cols, upper triangular, real nonnegative diagonal
};

/// Economy QR of a tall matrix (rows >= cols). The diagonal of R is
/// normalized to be real and nonnegative so |R(l,l)| comparisons are
/// sign-convention independent.
template <typename T>
QrResult<T> economy_qr(const Matrix<T>& a);

template <typename T>
struct EigResult {
    Matrix<T> u;                     // unitary, columns are eigenvectors
    std::vector<double> eigenvalues; // descending
};

/// Eigendecomposition of a Hermitian matrix. The input must be Hermitian to
/// 1e-10 * ||C||_F; it is symmetrized as (C + C^H)/2 before decomposing.
template <typename T>
EigResult<T> hermitian_eig(const Matrix<T>& c);

/// Lower-triangular Cholesky factor of a Hermitian positive definite matrix.
/// Throws DecompositionFailure at a non-positive-definite pivot.
template <typename T>
Matrix<T> cholesky(const Matrix<T>& s);

/// Solves L X = B (side=left) or X L = B (side=right) for lower-triangular L;
/// `transposed` uses L^H in place of L. Throws SingularTriangular on a zero
/// diagonal entry.
template <typename T>
Matrix<T> triangular_solve(const Matrix<T>& l, const Matrix<T>& b, Side side, bool transposed);

/// All singular values, descending.
template <typename T>
std::vector<double> singular_values(const Matrix<T>& a);

template <typename T>
struct SvdResult {
    Matrix<T> u;               // m x p
    std::vector<double> sigma; // p, descending
    Matrix<T> vh;              // p x n
};

/// Thin SVD (p = min(m, n) columns/rows of singular vectors).
template <typename T>
SvdResult<T> thin_svd(const Matrix<T>& a);

/// LU-based inverse of a square matrix. Used by oracles and the benchmark
/// reference methods, not by the fast paths.
template <typename T>
Matrix<T> dense_inverse(const Matrix<T>& s);

}  // namespace nlr
