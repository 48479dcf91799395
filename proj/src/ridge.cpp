#include "nlr/ridge.hpp"

#include <cmath>

#include "nlr/gri.hpp"
#include "nlr/grsvd.hpp"
#include "nlr/kernels.hpp"
#include "nlr/metrics.hpp"

namespace nlr {

namespace {

RealMatrix as_column(std::span<const double> v) {
    RealMatrix out(static_cast<index_t>(v.size()), 1);
    std::copy(v.begin(), v.end(), out.data());
    return out;
}

}  // namespace

std::vector<double> ridge_fit(const RealMatrix& x, std::span<const double> y, double lambda,
                              double eps, index_t block, RngStream stream) {
    if (static_cast<index_t>(y.size()) != x.rows())
        throw InvalidArgument("ridge_fit: y length must equal the row count of X");
    RegularizedInverse<double> p = gri_right(x, lambda, eps, block, stream);
    RealMatrix xty = matmul_op(Op::conj_trans, x, Op::none, as_column(y));
    RealMatrix beta = apply(p, xty);
    return std::vector<double>(beta.data(), beta.data() + beta.size());
}

double hkb_formula(index_t n_features, double residual_ss, index_t dof, double alpha_sq_sum) {
    if (dof < 1) throw InvalidArgument("hkb_formula: nonpositive degrees of freedom");
    if (alpha_sq_sum == 0.0)
        throw UndefinedEstimator("hkb_formula: pilot coefficients are all zero");
    const double sigma_sq = residual_ss / static_cast<double>(dof);
    return static_cast<double>(n_features) * sigma_sq / alpha_sq_sum;
}

double hkb_lambda(const RealMatrix& x, std::span<const double> y, double eps, index_t block,
                  RngStream stream, const HkbOptions& options) {
    const index_t m = x.rows(), n = x.cols();
    if (static_cast<index_t>(y.size()) != m)
        throw InvalidArgument("hkb_lambda: y length must equal the row count of X");

    RealMatrix ycol = as_column(y);
    RealMatrix alpha(n, 1);
    index_t k = 0;

    if (options.dense_pilot) {
        // Exact-SVD pilot with the same eps-rank truncation as the fast path;
        // an untruncated pseudoinverse would blow up on collinear tails.
        SvdResult<double> svd = thin_svd(x);
        k = eps_rank_from_singulars(svd.sigma, eps);
        RealMatrix uty = matmul_op(Op::conj_trans, svd.u, Op::none, ycol);
        RealMatrix coeff(svd.vh.rows(), 1);
        for (index_t i = 0; i < k; ++i)
            coeff(i, 0) = uty(i, 0) / svd.sigma[static_cast<std::size_t>(i)];
        alpha = matmul_op(Op::conj_trans, svd.vh, Op::none, coeff);
    } else {
        SvdApprox<double> f = grsvd(x, eps, block, stream);
        k = f.k;
        if (k > 0) {
            RealMatrix uty = matmul_op(Op::conj_trans, f.u, Op::none, ycol);
            for (index_t i = 0; i < k; ++i) uty(i, 0) /= f.sigma[static_cast<std::size_t>(i)];
            alpha = matmul_op(Op::conj_trans, f.vh, Op::none, uty);
        }
    }

    if (m <= k) throw InvalidArgument("hkb_lambda: requires more rows than the detected rank");

    RealMatrix fitted = matmul(x, alpha);
    double rss = 0.0;
    for (index_t i = 0; i < m; ++i) {
        const double r = ycol(i, 0) - fitted(i, 0);
        rss += r * r;
    }
    double alpha_sq = 0.0;
    for (index_t i = 0; i < n; ++i) alpha_sq += alpha(i, 0) * alpha(i, 0);
    if (alpha_sq == 0.0) throw UndefinedEstimator("hkb_lambda: pilot coefficients are all zero");
    return hkb_formula(n, rss, m - k, alpha_sq);
}

RealMatrix augment_intercept(const RealMatrix& x) {
    RealMatrix out(x.rows(), x.cols() + 1);
    std::copy(x.data(), x.data() + x.size(), out.data());
    for (index_t i = 0; i < x.rows(); ++i) out(i, x.cols()) = 1.0;
    return out;
}

}  // namespace nlr
