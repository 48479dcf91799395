#pragma once

#include <filesystem>

#include "nlr/matrix.hpp"
#include "nlr/rangefinder.hpp"
#include "nlr/rng.hpp"

namespace nlr {

enum class GramSide { left_gram, right_gram };

/// Implicit representation of (lambda I_m + A_hat A_hat^H)^{-1} (left) or
/// (lambda I_n + A_hat^H A_hat)^{-1} (right), where A_hat = Q Q^H A. Stores
/// only (lambda, Q, B, L); apply() works through k-dimensional triangular
/// solves and never forms the full inverse.
///
/// left:  L L^H = lambda I_k + B B^H
/// right: L L^H = I_k + (1/lambda) B B^H
template <typename T>
struct RegularizedInverse {
    GramSide side = GramSide::left_gram;
    double lambda = 0.0;
    Matrix<T> q;  ///< m x k basis
    Matrix<T> b;  ///< k x n projection Q^H A
    Matrix<T> l;  ///< k x k lower-triangular Cholesky factor
    index_t m = 0, n = 0, k = 0;
};

/// Approximate inverse of lambda I_m + A A^H through the detected eps-rank.
/// An optional precomputed basis lets SVD and inversion of the same matrix
/// share one sketch.
template <typename T>
RegularizedInverse<T> gri_left(const Matrix<T>& a, double lambda, double eps, index_t block,
                               RngStream stream, const RangeBasis<T>* basis = nullptr);

/// Approximate inverse of lambda I_n + A^H A.
template <typename T>
RegularizedInverse<T> gri_right(const Matrix<T>& a, double lambda, double eps, index_t block,
                                RngStream stream, const RangeBasis<T>* basis = nullptr);

/// P * X using k-dimensional solves only.
template <typename T>
Matrix<T> apply(const RegularizedInverse<T>& p, const Matrix<T>& x);

/// Explicit dense inverse approximation (m x m or n x n); intended for
/// oracle checks and small problems.
template <typename T>
Matrix<T> materialize(const RegularizedInverse<T>& p);

/// Serializes as <prefix>.q.nlrm, <prefix>.b.nlrm, <prefix>.l.nlrm plus a
/// text manifest <prefix>.manifest (side, lambda, dims).
void save_inverse(const std::filesystem::path& prefix, const RegularizedInverse<double>& p);
RegularizedInverse<double> load_inverse(const std::filesystem::path& prefix);

}  // namespace nlr
