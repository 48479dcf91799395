#include "nlr/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

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

}  // namespace

template <typename T>
SvdApprox<T> rsvd_fixed_rank(const Matrix<T>& a, index_t ell, RngStream stream) {
    const index_t p = std::min(a.rows(), a.cols());
    if (ell < 1 || ell > p)
        throw InvalidArgument("rsvd_fixed_rank: ell must be in [1, min(m, n)]");
    RealMatrix omega = gaussian_matrix(a.cols(), ell, stream);
    Matrix<T> y = matmul_op(Op::none, a, Op::none, cast_from_real<T>(omega));
    QrResult<T> qr = economy_qr(y);
    return svd_from_basis(a, qr.q, 0.0);
}

template <typename T>
RangeBasis<T> arrf(const Matrix<T>& a, double tol, index_t probes, RngStream stream) {
    if (tol <= 0.0) throw InvalidArgument("arrf: tol must be positive");
    if (probes < 1) throw InvalidArgument("arrf: probes must be at least 1");
    const index_t m = a.rows(), n = a.cols();
    const index_t p = std::min(m, n);

    RangeBasis<T> out;
    out.eps = 0.0;  // driven by an absolute tolerance, not an energy fraction
    out.a_fro = frobenius_norm(a);
    const double threshold = tol / (10.0 * std::sqrt(2.0 / std::numbers::pi));

    GaussianSampler sampler(stream);
    std::vector<double> draw(static_cast<std::size_t>(n));
    const auto fresh_probe = [&]() {
        sampler.fill_normal(draw);
        Matrix<T> w(n, 1);
        for (index_t i = 0; i < n; ++i) w(i, 0) = T(draw[static_cast<std::size_t>(i)]);
        return matmul(a, w);
    };
    const auto norm2 = [](const Matrix<T>& v) {
        double acc = 0.0;
        for (index_t i = 0; i < v.rows(); ++i) acc += scalar_traits<T>::abs_sq(v(i, 0));
        return std::sqrt(acc);
    };

    std::vector<Matrix<T>> window;
    window.reserve(static_cast<std::size_t>(probes));
    for (index_t i = 0; i < probes; ++i) window.push_back(fresh_probe());

    Matrix<T> q_buf(m, p);
    Matrix<T> coeff(p, 1);
    index_t k = 0;
    std::size_t next = 0;  // oldest window slot

    const auto project_off = [&](Matrix<T>& v) {
        if (k == 0) return;
        gemm_view<T>(Op::conj_trans, Op::none, k, 1, m, T{1}, q_buf.data(), m, v.data(), m, T{0},
                     coeff.data(), coeff.rows());
        gemm_view<T>(Op::none, Op::none, m, 1, k, T{-1}, q_buf.data(), m, coeff.data(),
                     coeff.rows(), T{1}, v.data(), m);
    };
    const auto window_max = [&]() {
        double mx = 0.0;
        for (const auto& v : window) mx = std::max(mx, norm2(v));
        return mx;
    };

    double mx = window_max();
    out.diag_trace.push_back({0, 1, mx});
    while (mx > threshold && k < p) {
        Matrix<T>& y = window[next];
        project_off(y);  // re-project the promoted vector for stability
        const double b = norm2(y);
        if (b == 0.0) break;
        for (index_t i = 0; i < m; ++i) q_buf(i, k) = y(i, 0) / T(b);
        ++k;

        Matrix<T> replacement = fresh_probe();
        project_off(replacement);
        window[next] = std::move(replacement);

        // Orthogonalize the remaining window vectors against the new column.
        for (std::size_t w = 0; w < window.size(); ++w) {
            if (w == next) continue;
            T dot{};
            for (index_t i = 0; i < m; ++i)
                dot += scalar_traits<T>::conj(q_buf(i, k - 1)) * window[w](i, 0);
            for (index_t i = 0; i < m; ++i) window[w](i, 0) -= q_buf(i, k - 1) * dot;
        }
        next = (next + 1) % window.size();
        mx = window_max();
        out.diag_trace.push_back({k, 1, mx});
    }

    out.terminated_early = mx <= threshold;
    out.q = q_buf.left_cols(k);
    out.k = k;
    return out;
}

template <typename T>
QbResult<T> randqb_ei(const Matrix<T>& a, double eps, index_t block, RngStream stream) {
    if (eps < 0.0 || eps >= 1.0) throw InvalidArgument("randqb_ei: eps must be in [0, 1)");
    if (block < 1) throw InvalidArgument("randqb_ei: block must be positive");
    const index_t m = a.rows(), n = a.cols();
    const index_t p = std::min(m, n);

    const double a_fro = frobenius_norm(a);
    const double total = a_fro * a_fro;
    double remaining = total;

    GaussianSampler sampler(stream);
    Matrix<T> q_buf(m, p);
    Matrix<T> b_buf(p, n);
    Matrix<T> coeff(p, block);
    index_t k = 0;

    while (k < p && remaining > eps * total) {
        const index_t f = std::min(block, p - k);
        RealMatrix draw = gaussian_matrix(n, f, sampler);
        Matrix<T> omega = cast_from_real<T>(draw);

        // Y = A Omega - Q (B Omega)
        Matrix<T> y = matmul(a, omega);
        if (k > 0) {
            Matrix<T> bo(k, f);
            gemm_view<T>(Op::none, Op::none, k, f, n, T{1}, b_buf.data(), b_buf.rows(),
                         omega.data(), n, T{0}, bo.data(), k);
            gemm_view<T>(Op::none, Op::none, m, f, k, T{-1}, q_buf.data(), m, bo.data(), k, T{1},
                         y.data(), m);
        }
        Matrix<T> qi = economy_qr(y).q;

        // One reorthogonalization pass against the accumulated basis.
        if (k > 0) {
            gemm_view<T>(Op::conj_trans, Op::none, k, f, m, T{1}, q_buf.data(), m, qi.data(), m,
                         T{0}, coeff.data(), coeff.rows());
            gemm_view<T>(Op::none, Op::none, m, f, k, T{-1}, q_buf.data(), m, coeff.data(),
                         coeff.rows(), T{1}, qi.data(), m);
            qi = economy_qr(qi).q;
        }

        // B_i = Q_i^H A appended as new rows.
        Matrix<T> bi = matmul_op(Op::conj_trans, qi, Op::none, a);
        for (index_t c = 0; c < f; ++c) std::copy(qi.col(c), qi.col(c) + m, q_buf.col(k + c));
        for (index_t j = 0; j < n; ++j)
            for (index_t i = 0; i < f; ++i) b_buf(k + i, j) = bi(i, j);
        k += f;

        const double bi_fro = frobenius_norm(bi);
        remaining = std::max(0.0, remaining - bi_fro * bi_fro);
    }

    QbResult<T> out;
    out.k = k;
    out.q = q_buf.left_cols(k);
    out.b = Matrix<T>(k, n);
    for (index_t j = 0; j < n; ++j)
        for (index_t i = 0; i < k; ++i) out.b(i, j) = b_buf(i, j);
    return out;
}

template SvdApprox<double> rsvd_fixed_rank(const Matrix<double>&, index_t, RngStream);
template SvdApprox<cdouble> rsvd_fixed_rank(const Matrix<cdouble>&, index_t, RngStream);
template RangeBasis<double> arrf(const Matrix<double>&, double, index_t, RngStream);
template RangeBasis<cdouble> arrf(const Matrix<cdouble>&, double, index_t, RngStream);
template QbResult<double> randqb_ei(const Matrix<double>&, double, index_t, RngStream);
template QbResult<cdouble> randqb_ei(const Matrix<cdouble>&, double, index_t, RngStream);

}  // namespace nlr
