#pragma once

#include <span>
#include <vector>

#include "nlr/matrix.hpp"

namespace nlr {

/// Evaluation row shared by the benchmark harness and the pipelines.
struct ErrorReport {
    double e_mse = 0.0;
    double e_sigma = 0.0;
    double e_u = 0.0;
    double e_v = 0.0;
    double energy_ratio = 0.0;
    index_t k = 0;
};

/// Smallest s with sum_{i<=s} sv_i^2 / sum_i sv_i^2 >= 1 - eps.
index_t eps_rank_from_singulars(std::span<const double> sv, double eps);

/// Same, computing the full dense SVD of A first. Throws InvalidArgument on a
/// zero matrix (the defining ratio is undefined).
template <typename T>
index_t eps_rank_oracle(const Matrix<T>& a, double eps);

/// ||A - Ahat||_F / ||A||_F.
template <typename T>
double reconstruction_error(const Matrix<T>& a, const Matrix<T>& ahat);

/// max over i < r of |sv_exact_i^2 - sv_approx_i^2| / sv_exact_i^2.
double singular_value_error(std::span<const double> sv_exact, std::span<const double> sv_approx,
                            index_t r);

/// ||U^H U - I||_F / sqrt(cols).
template <typename T>
double orthogonality_defect(const Matrix<T>& u);

/// sum_{i<=k} sv_i^2 / sum_i sv_i^2.
double energy_ratio(std::span<const double> sv, index_t k);

/// 10*log10(255^2 / e_mse), with e_mse the relative-Frobenius reconstruction
/// error. This mirrors the reference pipeline's reporting convention; it is
/// not the standard pixel-wise PSNR.
double psnr(double e_mse);

/// Edge preservation index: normalized correlation of the mean-centered
/// 4-neighbor Laplacian responses of both images over the interior pixels.
double epi(const RealMatrix& a, const RealMatrix& ahat);

}  // namespace nlr
