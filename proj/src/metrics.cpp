#include "nlr/metrics.hpp"

#include <cmath>

#include "nlr/kernels.hpp"

namespace nlr {

index_t eps_rank_from_singulars(std::span<const double> sv, double eps) {
    if (eps < 0.0 || eps >= 1.0) throw InvalidArgument("eps_rank: eps must be in [0, 1)");
    double total = 0.0;
    for (double s : sv) total += s * s;
    if (total == 0.0)
        throw InvalidArgument("eps_rank: undefined for a zero matrix");
    const double target = (1.0 - eps) * total;
    double cum = 0.0;
    for (std::size_t i = 0; i < sv.size(); ++i) {
        cum += sv[i] * sv[i];
        if (cum >= target) return static_cast<index_t>(i + 1);
    }
    return static_cast<index_t>(sv.size());
}

template <typename T>
index_t eps_rank_oracle(const Matrix<T>& a, double eps) {
    return eps_rank_from_singulars(singular_values(a), eps);
}

template <typename T>
double reconstruction_error(const Matrix<T>& a, const Matrix<T>& ahat) {
    if (a.rows() != ahat.rows() || a.cols() != ahat.cols())
        throw InvalidArgument("reconstruction_error: shape mismatch");
    const double den = frobenius_norm(a);
    if (den == 0.0) throw InvalidArgument("reconstruction_error: zero reference matrix");
    double acc = 0.0;
    for (index_t i = 0; i < a.size(); ++i)
        acc += scalar_traits<T>::abs_sq(a.data()[i] - ahat.data()[i]);
    return std::sqrt(acc) / den;
}

double singular_value_error(std::span<const double> sv_exact, std::span<const double> sv_approx,
                            index_t r) {
    if (r < 0 || static_cast<std::size_t>(r) > sv_exact.size() ||
        static_cast<std::size_t>(r) > sv_approx.size())
        throw InvalidArgument("singular_value_error: r exceeds vector length");
    double worst = 0.0;
    for (index_t i = 0; i < r; ++i) {
        const double se = sv_exact[static_cast<std::size_t>(i)];
        if (se <= 0.0)
            throw InvalidArgument("singular_value_error: exact singular value not positive");
        const double sa = sv_approx[static_cast<std::size_t>(i)];
        worst = std::max(worst, std::abs(se * se - sa * sa) / (se * se));
    }
    return worst;
}

template <typename T>
double orthogonality_defect(const Matrix<T>& u) {
    const index_t k = u.cols();
    if (k < 1) throw InvalidArgument("orthogonality_defect: matrix has no columns");
    Matrix<T> g = matmul_op(Op::conj_trans, u, Op::none, u);
    for (index_t i = 0; i < k; ++i) g(i, i) -= T{1};
    return frobenius_norm(g) / std::sqrt(static_cast<double>(k));
}

double energy_ratio(std::span<const double> sv, index_t k) {
    if (k < 0 || static_cast<std::size_t>(k) > sv.size())
        throw InvalidArgument("energy_ratio: k exceeds vector length");
    double total = 0.0, head = 0.0;
    for (std::size_t i = 0; i < sv.size(); ++i) {
        const double e = sv[i] * sv[i];
        total += e;
        if (i < static_cast<std::size_t>(k)) head += e;
    }
    if (total == 0.0) throw InvalidArgument("energy_ratio: all-zero singular values");
    return head / total;
}

double psnr(double e_mse) {
    if (e_mse <= 0.0) throw InvalidArgument("psnr: e_mse must be positive");
    return 10.0 * std::log10(255.0 * 255.0 / e_mse);
}

double epi(const RealMatrix& a, const RealMatrix& ahat) {
    if (a.rows() != ahat.rows() || a.cols() != ahat.cols())
        throw InvalidArgument("epi: shape mismatch");
    if (a.rows() < 3 || a.cols() < 3) throw InvalidArgument("epi: images must be at least 3x3");

    const index_t m = a.rows(), n = a.cols();
    const auto laplacian = [&](const RealMatrix& x, std::vector<double>& out) {
        out.clear();
        out.reserve(static_cast<std::size_t>((m - 2) * (n - 2)));
        for (index_t j = 1; j + 1 < n; ++j)
            for (index_t i = 1; i + 1 < m; ++i)
                out.push_back(x(i - 1, j) + x(i + 1, j) + x(i, j - 1) + x(i, j + 1) -
                              4.0 * x(i, j));
    };
    std::vector<double> da, dhat;
    laplacian(a, da);
    laplacian(ahat, dhat);

    const auto center = [](std::vector<double>& v) {
        double mean = 0.0;
        for (double x : v) mean += x;
        mean /= static_cast<double>(v.size());
        for (double& x : v) x -= mean;
    };
    center(da);
    center(dhat);

    double s12 = 0.0, s11 = 0.0, s22 = 0.0;
    for (std::size_t i = 0; i < da.size(); ++i) {
        s12 += da[i] * dhat[i];
        s11 += da[i] * da[i];
        s22 += dhat[i] * dhat[i];
    }
    if (s11 == 0.0 || s22 == 0.0)
        throw UndefinedMetric("epi: zero-variance filtered image");
    return s12 / std::sqrt(s11 * s22);
}

template index_t eps_rank_oracle(const Matrix<double>&, double);
template index_t eps_rank_oracle(const Matrix<cdouble>&, double);
template double reconstruction_error(const Matrix<double>&, const Matrix<double>&);
template double reconstruction_error(const Matrix<cdouble>&, const Matrix<cdouble>&);
template double orthogonality_defect(const Matrix<double>&);
template double orthogonality_defect(const Matrix<cdouble>&);

}  // namespace nlr
