#include "lapack_support.hpp"

#include "nlr/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "nlr/flops.hpp"

namespace nlr {

using detail::to_lapack;

namespace {

CBLAS_TRANSPOSE to_cblas(Op op) {
    return op == Op::none ? CblasNoTrans : CblasConjTrans;
}

void gemm_dispatch(Op opa, Op opb, index_t m, index_t n, index_t kk, double alpha,
                   const double* a, index_t lda, const double* b, index_t ldb, double beta,
                   double* c, index_t ldc) {
    cblas_dgemm(CblasColMajor, to_cblas(opa), to_cblas(opb), static_cast<int>(m),
                static_cast<int>(n), static_cast<int>(kk), alpha, a, static_cast<int>(lda), b,
                static_cast<int>(ldb), beta, c, static_cast<int>(ldc));
}

void gemm_dispatch(Op opa, Op opb, index_t m, index_t n, index_t kk, cdouble alpha,
                   const cdouble* a, index_t lda, const cdouble* b, index_t ldb, cdouble beta,
                   cdouble* c, index_t ldc) {
    cblas_zgemm(CblasColMajor, to_cblas(opa), to_cblas(opb), static_cast<int>(m),
                static_cast<int>(n), static_cast<int>(kk), &alpha, a, static_cast<int>(lda), b,
                static_cast<int>(ldb), &beta, c, static_cast<int>(ldc));
}

}  // namespace

template <typename T>
void gemm_view(Op opa, Op opb, index_t m, index_t n, index_t kk, T alpha, const T* a,
               index_t lda, const T* b, index_t ldb, T beta, T* c, index_t ldc) {
    if (m == 0 || n == 0) return;
    if (kk == 0) {
        for (index_t j = 0; j < n; ++j)
            for (index_t i = 0; i < m; ++i) c[i + j * ldc] *= beta;
        return;
    }
    flops::add(static_cast<std::uint64_t>(m) * static_cast<std::uint64_t>(n) *
               static_cast<std::uint64_t>(kk));
    gemm_dispatch(opa, opb, m, n, kk, alpha, a, lda, b, ldb, beta, c, ldc);
}

template <typename T>
Matrix<T> matmul_op(Op opa, const Matrix<T>& a, Op opb, const Matrix<T>& b) {
    const index_t m = (opa == Op::none) ? a.rows() : a.cols();
    const index_t ka = (opa == Op::none) ? a.cols() : a.rows();
    const index_t kb = (opb == Op::none) ? b.rows() : b.cols();
    const index_t n = (opb == Op::none) ? b.cols() : b.rows();
    if (ka != kb) throw InvalidArgument("matmul: inner dimensions do not match");
    Matrix<T> c(m, n);
    gemm_view<T>(opa, opb, m, n, ka, T{1}, a.data(), a.rows(), b.data(), b.rows(), T{0},
                 c.data(), c.rows());
    return c;
}

template <typename T>
Matrix<T> matmul(const Matrix<T>& a, const Matrix<T>& b) {
    return matmul_op(Op::none, a, Op::none, b);
}

ComplexMatrix matmul(const RealMatrix& a, const ComplexMatrix& b) {
    return matmul(to_complex(a), b);
}

ComplexMatrix matmul(const ComplexMatrix& a, const RealMatrix& b) {
    return matmul(a, to_complex(b));
}

namespace {

int geqrf(lapack_int m, lapack_int n, double* a, lapack_int lda, double* tau) {
    return LAPACKE_dgeqrf(LAPACK_COL_MAJOR, m, n, a, lda, tau);
}
int geqrf(lapack_int m, lapack_int n, cdouble* a, lapack_int lda, cdouble* tau) {
    return LAPACKE_zgeqrf(LAPACK_COL_MAJOR, m, n, a, lda, tau);
}
int orgqr(lapack_int m, lapack_int n, lapack_int k, double* a, lapack_int lda,
          const double* tau) {
    return LAPACKE_dorgqr(LAPACK_COL_MAJOR, m, n, k, a, lda, tau);
}
int orgqr(lapack_int m, lapack_int n, lapack_int k, cdouble* a, lapack_int lda,
          const cdouble* tau) {
    return LAPACKE_zungqr(LAPACK_COL_MAJOR, m, n, k, a, lda, tau);
}
int heevd(lapack_int n, double* a, lapack_int lda, double* w) {
    return LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', n, a, lda, w);
}
int heevd(lapack_int n, cdouble* a, lapack_int lda, double* w) {
    return LAPACKE_zheevd(LAPACK_COL_MAJOR, 'V', 'L', n, a, lda, w);
}
int potrf(lapack_int n, double* a, lapack_int lda) {
    return LAPACKE_dpotrf(LAPACK_COL_MAJOR, 'L', n, a, lda);
}
int potrf(lapack_int n, cdouble* a, lapack_int lda) {
    return LAPACKE_zpotrf(LAPACK_COL_MAJOR, 'L', n, a, lda);
}
int gesdd(char jobz, lapack_int m, lapack_int n, double* a, lapack_int lda, double* s,
          double* u, lapack_int ldu, double* vt, lapack_int ldvt) {
    return LAPACKE_dgesdd(LAPACK_COL_MAJOR, jobz, m, n, a, lda, s, u, ldu, vt, ldvt);
}
int gesdd(char jobz, lapack_int m, lapack_int n, cdouble* a, lapack_int lda, double* s,
          cdouble* u, lapack_int ldu, cdouble* vt, lapack_int ldvt) {
    return LAPACKE_zgesdd(LAPACK_COL_MAJOR, jobz, m, n, a, lda, s, u, ldu, vt, ldvt);
}
int getrf(lapack_int m, lapack_int n, double* a, lapack_int lda, lapack_int* ipiv) {
    return LAPACKE_dgetrf(LAPACK_COL_MAJOR, m, n, a, lda, ipiv);
}
int getrf(lapack_int m, lapack_int n, cdouble* a, lapack_int lda, lapack_int* ipiv) {
    return LAPACKE_zgetrf(LAPACK_COL_MAJOR, m, n, a, lda, ipiv);
}
int getri(lapack_int n, double* a, lapack_int lda, const lapack_int* ipiv) {
    return LAPACKE_dgetri(LAPACK_COL_MAJOR, n, a, lda, ipiv);
}
int getri(lapack_int n, cdouble* a, lapack_int lda, const lapack_int* ipiv) {
    return LAPACKE_zgetri(LAPACK_COL_MAJOR, n, a, lda, ipiv);
}

void trsm_dispatch(CBLAS_SIDE side, CBLAS_TRANSPOSE trans, lapack_int m, lapack_int n,
                   const double* l, lapack_int ldl, double* x, lapack_int ldx) {
    cblas_dtrsm(CblasColMajor, side, CblasLower, trans, CblasNonUnit, m, n, 1.0, l, ldl, x, ldx);
}
void trsm_dispatch(CBLAS_SIDE side, CBLAS_TRANSPOSE trans, lapack_int m, lapack_int n,
                   const cdouble* l, lapack_int ldl, cdouble* x, lapack_int ldx) {
    const cdouble one{1.0, 0.0};
    cblas_ztrsm(CblasColMajor, side, CblasLower, trans, CblasNonUnit, m, n, &one, l, ldl, x, ldx);
}

}  // namespace

template <typename T>
QrResult<T> economy_qr(const Matrix<T>& a) {
    const index_t m = a.rows(), n = a.cols();
    if (m < n) throw InvalidArgument("economy_qr: requires rows >= cols");
    QrResult<T> out{Matrix<T>(m, n), Matrix<T>(n, n)};
    if (n == 0) return out;

    Matrix<T> work = a;
    std::vector<T> tau(static_cast<std::size_t>(n));
    int info = geqrf(to_lapack(m, "economy_qr"), to_lapack(n, "economy_qr"), work.data(),
                     to_lapack(m, "economy_qr"), tau.data());
    if (info != 0) throw NumericError("economy_qr: geqrf failed");

    for (index_t j = 0; j < n; ++j)
        for (index_t i = 0; i <= j; ++i) out.r(i, j) = work(i, j);

    info = orgqr(to_lapack(m, "economy_qr"), to_lapack(n, "economy_qr"),
                 to_lapack(n, "economy_qr"), work.data(), to_lapack(m, "economy_qr"),
                 tau.data());
    if (info != 0) throw NumericError("economy_qr: orgqr failed");
    out.q = std::move(work);

    // Normalize so diag(R) is real and nonnegative: Q <- Q D, R <- D^H R with
    // D = diag(R_jj / |R_jj|).
    for (index_t j = 0; j < n; ++j) {
        const T d = out.r(j, j);
        const double mag = std::abs(d);
        if (mag == 0.0) continue;
        if constexpr (std::is_same_v<T, double>) {
            if (d >= 0.0) continue;
            for (index_t c = j; c < n; ++c) out.r(j, c) = -out.r(j, c);
            for (index_t i = 0; i < m; ++i) out.q(i, j) = -out.q(i, j);
        } else {
            const T phase = d / mag;
            if (phase == T{1.0}) continue;
            const T conj_phase = std::conj(phase);
            for (index_t c = j; c < n; ++c) out.r(j, c) *= conj_phase;
            for (index_t i = 0; i < m; ++i) out.q(i, j) *= phase;
        }
    }
    return out;
}

template <typename T>
EigResult<T> hermitian_eig(const Matrix<T>& c) {
    const index_t n = c.rows();
    if (c.cols() != n) throw InvalidArgument("hermitian_eig: matrix must be square");
    EigResult<T> out{Matrix<T>(n, n), std::vector<double>(static_cast<std::size_t>(n))};
    if (n == 0) return out;

    double asym_sq = 0.0;
    for (index_t j = 0; j < n; ++j)
        for (index_t i = 0; i < n; ++i)
            asym_sq += scalar_traits<T>::abs_sq(c(i, j) - scalar_traits<T>::conj(c(j, i)));
    const double cf = frobenius_norm(c);
    if (std::sqrt(asym_sq) > 1e-10 * cf && cf > 0.0)
        throw InvalidArgument("hermitian_eig: input is not Hermitian to tolerance");

    Matrix<T> work(n, n);
    for (index_t j = 0; j < n; ++j)
        for (index_t i = 0; i < n; ++i)
            work(i, j) = (c(i, j) + scalar_traits<T>::conj(c(j, i))) / 2.0;

    std::vector<double> w(static_cast<std::size_t>(n));
    int info = heevd(to_lapack(n, "hermitian_eig"), work.data(), to_lapack(n, "hermitian_eig"),
                     w.data());
    if (info != 0) throw NumericError("hermitian_eig: eigendecomposition did not converge");

    // LAPACK returns ascending eigenvalues; reverse to descending. The plain
    // reversal is a stable reordering, so ties keep their relative order.
    for (index_t j = 0; j < n; ++j) {
        out.eigenvalues[static_cast<std::size_t>(j)] = w[static_cast<std::size_t>(n - 1 - j)];
        const T* src = work.col(n - 1 - j);
        std::copy(src, src + n, out.u.col(j));
    }
    return out;
}

template <typename T>
Matrix<T> cholesky(const Matrix<T>& s) {
    const index_t n = s.rows();
    if (s.cols() != n) throw InvalidArgument("cholesky: matrix must be square");
    Matrix<T> l(n, n);
    if (n == 0) return l;

    // Only the lower triangle is referenced; take the Hermitian average so
    // round-off asymmetry in Gram matrices cannot leak into the factor.
    for (index_t j = 0; j < n; ++j)
        for (index_t i = j; i < n; ++i)
            l(i, j) = (s(i, j) + scalar_traits<T>::conj(s(j, i))) / 2.0;

    int info = potrf(to_lapack(n, "cholesky"), l.data(), to_lapack(n, "cholesky"));
    if (info > 0)
        throw DecompositionFailure("cholesky: matrix not positive definite (pivot " +
                                   std::to_string(info) + ")");
    if (info < 0) throw NumericError("cholesky: invalid argument to potrf");

    for (index_t j = 1; j < n; ++j)
        for (index_t i = 0; i < j; ++i) l(i, j) = T{};
    return l;
}

template <typename T>
Matrix<T> triangular_solve(const Matrix<T>& l, const Matrix<T>& b, Side side, bool transposed) {
    const index_t n = l.rows();
    if (l.cols() != n) throw InvalidArgument("triangular_solve: L must be square");
    const index_t need = (side == Side::left) ? b.rows() : b.cols();
    if (need != n) throw InvalidArgument("triangular_solve: dimension mismatch");
    for (index_t j = 0; j < n; ++j)
        if (std::abs(l(j, j)) == 0.0)
            throw SingularTriangular("triangular_solve: zero diagonal at " + std::to_string(j));

    Matrix<T> x = b;
    if (x.empty() || n == 0) return x;
    trsm_dispatch(side == Side::left ? CblasLeft : CblasRight,
                  transposed ? CblasConjTrans : CblasNoTrans, to_lapack(x.rows(), "trsm"),
                  to_lapack(x.cols(), "trsm"), l.data(), to_lapack(n, "trsm"), x.data(),
                  to_lapack(x.rows(), "trsm"));
    return x;
}

template <typename T>
std::vector<double> singular_values(const Matrix<T>& a) {
    const index_t m = a.rows(), n = a.cols();
    const index_t p = std::min(m, n);
    std::vector<double> s(static_cast<std::size_t>(p));
    if (p == 0) return s;
    Matrix<T> work = a;
    int info = gesdd('N', to_lapack(m, "singular_values"), to_lapack(n, "singular_values"),
                     work.data(), to_lapack(m, "singular_values"), s.data(), nullptr, 1,
                     nullptr, 1);
    if (info != 0) throw NumericError("singular_values: gesdd did not converge");
    return s;
}

template <typename T>
SvdResult<T> thin_svd(const Matrix<T>& a) {
    const index_t m = a.rows(), n = a.cols();
    const index_t p = std::min(m, n);
    SvdResult<T> out{Matrix<T>(m, p), std::vector<double>(static_cast<std::size_t>(p)),
                     Matrix<T>(p, n)};
    if (p == 0) return out;
    Matrix<T> work = a;
    int info = gesdd('S', to_lapack(m, "thin_svd"), to_lapack(n, "thin_svd"), work.data(),
                     to_lapack(m, "thin_svd"), out.sigma.data(), out.u.data(),
                     to_lapack(m, "thin_svd"), out.vh.data(), to_lapack(p, "thin_svd"));
    if (info != 0) throw NumericError("thin_svd: gesdd did not converge");
    return out;
}

template <typename T>
Matrix<T> dense_inverse(const Matrix<T>& s) {
    const index_t n = s.rows();
    if (s.cols() != n) throw InvalidArgument("dense_inverse: matrix must be square");
    Matrix<T> work = s;
    if (n == 0) return work;
    std::vector<lapack_int> ipiv(static_cast<std::size_t>(n));
    int info = getrf(to_lapack(n, "dense_inverse"), to_lapack(n, "dense_inverse"), work.data(),
                     to_lapack(n, "dense_inverse"), ipiv.data());
    if (info > 0) throw DecompositionFailure("dense_inverse: matrix is singular");
    if (info < 0) throw NumericError("dense_inverse: invalid argument to getrf");
    info = getri(to_lapack(n, "dense_inverse"), work.data(), to_lapack(n, "dense_inverse"),
                 ipiv.data());
    if (info != 0) throw DecompositionFailure("dense_inverse: matrix is singular");
    return work;
}

template void gemm_view(Op, Op, index_t, index_t, index_t, double, const double*, index_t,
                        const double*, index_t, double, double*, index_t);
template void gemm_view(Op, Op, index_t, index_t, index_t, cdouble, const cdouble*, index_t,
                        const cdouble*, index_t, cdouble, cdouble*, index_t);
template Matrix<double> matmul(const Matrix<double>&, const Matrix<double>&);
template Matrix<cdouble> matmul(const Matrix<cdouble>&, const Matrix<cdouble>&);
template Matrix<double> matmul_op(Op, const Matrix<double>&, Op, const Matrix<double>&);
template Matrix<cdouble> matmul_op(Op, const Matrix<cdouble>&, Op, const Matrix<cdouble>&);
template QrResult<double> economy_qr(const Matrix<double>&);
template QrResult<cdouble> economy_qr(const Matrix<cdouble>&);
template EigResult<double> hermitian_eig(const Matrix<double>&);
template EigResult<cdouble> hermitian_eig(const Matrix<cdouble>&);
template Matrix<double> cholesky(const Matrix<double>&);
template Matrix<cdouble> cholesky(const Matrix<cdouble>&);
template Matrix<double> triangular_solve(const Matrix<double>&, const Matrix<double>&, Side,
                                         bool);
template Matrix<cdouble> triangular_solve(const Matrix<cdouble>&, const Matrix<cdouble>&, Side,
                                          bool);
template std::vector<double> singular_values(const Matrix<double>&);
template std::vector<double> singular_values(const Matrix<cdouble>&);
template SvdResult<double> thin_svd(const Matrix<double>&);
template SvdResult<cdouble> thin_svd(const Matrix<cdouble>&);
template Matrix<double> dense_inverse(const Matrix<double>&);
template Matrix<cdouble> dense_inverse(const Matrix<cdouble>&);

}  // namespace nlr
