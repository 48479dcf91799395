#include "nlr/rangefinder.hpp"

#include <algorithm>
#include <cmath>

#include "nlr/kernels.hpp"

namespace nlr {

namespace {

template <typename T>
Matrix<T> cast_from_real(const RealMatrix& a) {
    if constexpr (std::is_same_v<T, double>)
        return a;
    else
        return to_complex(a);
}

// Y <- (I - Q_k Q_k^H) Y against the leading k columns of the basis buffer.
template <typename T>
void project_off(const Matrix<T>& q_buf, index_t k, Matrix<T>& y, Matrix<T>& coeff) {
    if (k == 0) return;
    const index_t m = y.rows(), f = y.cols();
    // coeff = Q^H Y  (k x f), then Y -= Q coeff
    gemm_view<T>(Op::conj_trans, Op::none, k, f, m, T{1}, q_buf.data(), q_buf.rows(), y.data(),
                 m, T{0}, coeff.data(), coeff.rows());
    gemm_view<T>(Op::none, Op::none, m, f, k, T{-1}, q_buf.data(), q_buf.rows(), coeff.data(),
                 coeff.rows(), T{1}, y.data(), m);
}

}  // namespace

template <typename T>
RangeBasis<T> renormalize_columnwise(const Matrix<T>& a, double eps, index_t max_cols,
                                     RngStream stream) {
    if (eps < 0.0 || eps >= 1.0)
        throw InvalidArgument("renormalize_columnwise: eps must be in [0, 1)");
    const index_t m = a.rows(), n = a.cols();
    const index_t p = std::min(m, n);
    if (max_cols < 1 || max_cols > p)
        throw InvalidArgument("renormalize_columnwise: max_cols must be in [1, min(m, n)]");

    RangeBasis<T> out;
    out.eps = eps;
    out.a_fro = frobenius_norm(a);
    const double thresh_sq =
        eps > 0.0 ? out.a_fro * out.a_fro * eps / 2.0
                  : (64.0 * unit_roundoff * out.a_fro) * (64.0 * unit_roundoff * out.a_fro);

    GaussianSampler sampler(stream);
    Matrix<T> q_buf(m, max_cols);
    Matrix<T> v(m, 1);
    Matrix<T> coeff(max_cols, 1);
    std::vector<double> omega(static_cast<std::size_t>(n));
    index_t k = 0;

    for (index_t step = 1; step <= max_cols; ++step) {
        sampler.fill_normal(omega);
        Matrix<T> w(n, 1);
        for (index_t i = 0; i < n; ++i) w(i, 0) = T(omega[static_cast<std::size_t>(i)]);
        gemm_view<T>(Op::none, Op::none, m, 1, n, T{1}, a.data(), m, w.data(), n, T{0}, v.data(),
                     m);
        project_off(q_buf, k, v, coeff);

        double b_sq = 0.0;
        for (index_t i = 0; i < m; ++i) b_sq += scalar_traits<T>::abs_sq(v(i, 0));
        const double b = std::sqrt(b_sq);
        out.diag_trace.push_back({step, 1, b});
        if (b_sq <= thresh_sq) {
            out.terminated_early = true;
            break;
        }
        for (index_t i = 0; i < m; ++i) q_buf(i, k) = v(i, 0) / T(b);
        ++k;
    }

    out.q = q_buf.left_cols(k);
    out.k = k;
    return out;
}

template <typename T>
RangeBasis<T> block_rangefinder(const Matrix<T>& a, double eps, index_t block, RngStream stream,
                                const RangefinderOptions& options) {
    if (eps < 0.0 || eps >= 1.0)
        throw InvalidArgument("block_rangefinder: eps must be in [0, 1)");
    const index_t m = a.rows(), n = a.cols();
    if (block < 1 || block >= n)
        throw InvalidArgument("block_rangefinder: block must satisfy 1 <= block < n");
    const index_t p = std::min(m, n);

    RangeBasis<T> out;
    out.eps = eps;
    out.a_fro = frobenius_norm(a);
    const double thresh =
        eps > 0.0 ? out.a_fro * std::sqrt(eps) / std::sqrt(2.0) : 64.0 * unit_roundoff * out.a_fro;

    GaussianSampler sampler(stream);
    Matrix<T> q_buf(m, p);
    Matrix<T> coeff(p, block);
    index_t k = 0;

    const index_t s = n / block;
    const index_t tail = n - s * block;
    const index_t total_blocks = s + (tail > 0 ? 1 : 0);

    for (index_t j = 1; j <= total_blocks; ++j) {
        const index_t f_nominal = (j <= s) ? block : tail;
        const index_t f = std::min(f_nominal, p - k);
        if (f == 0) break;  // column cap reached without the stop rule firing

        RealMatrix omega = gaussian_matrix(n, f, sampler);
        Matrix<T> y = matmul_op(Op::none, a, Op::none, cast_from_real<T>(omega));
        project_off(q_buf, k, y, coeff);
        if (options.reorthogonalize) project_off(q_buf, k, y, coeff);

        QrResult<T> qr = economy_qr(y);

        index_t stop_at = 0;  // 1-based position where the rule fired
        for (index_t l = 1; l <= f; ++l) {
            const double mag = std::abs(qr.r(l - 1, l - 1));
            out.diag_trace.push_back({j, l, mag});
            if (mag <= thresh) {
                stop_at = l;
                break;
            }
        }

        const index_t take = stop_at > 0 ? stop_at - 1 : f;
        for (index_t c = 0; c < take; ++c)
            std::copy(qr.q.col(c), qr.q.col(c) + m, q_buf.col(k + c));
        k += take;

        if (stop_at > 0) {
            out.terminated_early = true;
            break;
        }
    }

    out.q = q_buf.left_cols(k);
    out.k = k;
    return out;
}

template <typename T>
double residual_energy(const Matrix<T>& a, const Matrix<T>& q) {
    if (q.rows() != a.rows())
        throw InvalidArgument("residual_energy: Q and A row counts differ");
    const index_t k = q.cols();
    if (k > 0) {
        Matrix<T> g = matmul_op(Op::conj_trans, q, Op::none, q);
        for (index_t i = 0; i < k; ++i) g(i, i) -= T{1};
        if (frobenius_norm(g) > 1e-8 * std::sqrt(static_cast<double>(k)))
            throw InvalidArgument("residual_energy: Q is not orthonormal");
    }
    const double total = frobenius_norm(a);
    if (k == 0) return total * total;
    Matrix<T> qha = matmul_op(Op::conj_trans, q, Op::none, a);
    const double captured = frobenius_norm(qha);
    return std::max(0.0, total * total - captured * captured);
}

index_t numerical_rank(std::span<const double> sv, double rank_tol) {
    if (sv.empty()) return 0;
    const double cutoff = rank_tol * sv[0];
    index_t rank = 0;
    for (double s : sv)
        if (s > cutoff) ++rank;
    return rank;
}

template <typename T>
bool is_renormalization_matrix(const Matrix<T>& a, const Matrix<T>& omega, double rank_tol) {
    if (omega.rows() != a.cols())
        throw InvalidArgument("is_renormalization_matrix: Omega row count must equal A cols");
    const auto sv_a = singular_values(a);
    const auto sv_ao = singular_values(matmul(a, omega));
    return numerical_rank(sv_a, rank_tol) == numerical_rank(sv_ao, rank_tol);
}

template RangeBasis<double> renormalize_columnwise(const Matrix<double>&, double, index_t,
                                                   RngStream);
template RangeBasis<cdouble> renormalize_columnwise(const Matrix<cdouble>&, double, index_t,
                                                    RngStream);
template RangeBasis<double> block_rangefinder(const Matrix<double>&, double, index_t, RngStream,
                                              const RangefinderOptions&);
template RangeBasis<cdouble> block_rangefinder(const Matrix<cdouble>&, double, index_t,
                                               RngStream, const RangefinderOptions&);
template double residual_energy(const Matrix<double>&, const Matrix<double>&);
template double residual_energy(const Matrix<cdouble>&, const Matrix<cdouble>&);
template bool is_renormalization_matrix(const Matrix<double>&, const Matrix<double>&, double);
template bool is_renormalization_matrix(const Matrix<cdouble>&, const Matrix<cdouble>&, double);

}  // namespace nlr
