#pragma once

#include <span>
#include <vector>

#include "nlr/matrix.hpp"
#include "nlr/rng.hpp"

namespace nlr {

/// Ridge solution (X^H X + lambda I)^{-1} X^H y through the fast right-Gram
/// inverse at precision eps.
std::vector<double> ridge_fit(const RealMatrix& x, std::span<const double> y, double lambda,
                              double eps, index_t block, RngStream stream);

struct HkbOptions {
    /// Use an exact-SVD pilot (truncated at the same eps-rank) instead of the
    /// randomized one.
    bool dense_pilot = false;
};

/// Data-driven ridge parameter n * sigma_tilde^2 / sum(alpha_i^2): the pilot
/// coefficients alpha come from the eps-rank truncated pseudoinverse and the
/// residual variance uses m - k degrees of freedom.
double hkb_lambda(const RealMatrix& x, std::span<const double> y, double eps, index_t block,
                  RngStream stream, const HkbOptions& options = {});

/// The bare estimator formula: n_features * (residual_ss / dof) / alpha_sq_sum.
double hkb_formula(index_t n_features, double residual_ss, index_t dof, double alpha_sq_sum);

/// X with an all-ones column appended (intercept handling).
RealMatrix augment_intercept(const RealMatrix& x);

}  // namespace nlr
