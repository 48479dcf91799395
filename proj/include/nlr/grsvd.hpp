#pragma once

#include <filesystem>
#include <vector>

#include "nlr/matrix.hpp"
#include "nlr/rangefinder.hpp"
#include "nlr/rng.hpp"

namespace nlr {

/// Approximate SVD factorization. An empty factorization (k = 0) represents
/// the zero matrix of the recorded shape (u is m x 0, vh is 0 x n).
template <typename T>
struct SvdApprox {
    Matrix<T> u;               ///< m x k, orthonormal columns
    std::vector<double> sigma; ///< length k, descending, nonnegative
    Matrix<T> vh;              ///< k x n
    index_t k = 0;
    double eps = 0.0;

    index_t rows() const { return u.rows(); }
    index_t cols() const { return vh.cols(); }
};

struct GrsvdOptions {
    /// Replace the Gram-route eigendecomposition of B B^H with a direct thin
    /// SVD of B. The Gram route squares the condition number; the flag exists
    /// for conditioning studies, the default follows the fast path.
    bool direct_svd = false;
    RangefinderOptions rangefinder;
};

/// Adaptive approximate SVD: block range finder at precision eps, projection
/// B = Q^H A, eigendecomposition of B B^H, and back-projection. Negative
/// round-off eigenvalues are clamped to zero, and trailing components with
/// lambda_i <= k * u_roundoff * lambda_1 are dropped before forming
/// Lambda^{-1/2}.
template <typename T>
SvdApprox<T> grsvd(const Matrix<T>& a, double eps, index_t block, RngStream stream,
                   const GrsvdOptions& options = {});

/// The projection/eigendecomposition/back-projection pipeline on a caller
/// supplied orthonormal basis (also used by the fixed-rank baseline).
template <typename T>
SvdApprox<T> svd_from_basis(const Matrix<T>& a, const Matrix<T>& q, double eps,
                            bool direct_svd = false);

/// Same pipeline when B = Q^H A has been accumulated already.
template <typename T>
SvdApprox<T> svd_from_qb(const Matrix<T>& q, const Matrix<T>& b, double eps,
                         bool direct_svd = false);

/// U diag(sigma) V^H; the zero matrix of the recorded shape for k = 0.
template <typename T>
Matrix<T> reconstruct(const SvdApprox<T>& f);

/// Serializes as <prefix>.u.nlrm, <prefix>.sigma.nlrm (k x 1),
/// <prefix>.vh.nlrm plus a text manifest <prefix>.manifest (k, eps, shapes).
void save_svd(const std::filesystem::path& prefix, const SvdApprox<double>& f);
SvdApprox<double> load_svd(const std::filesystem::path& prefix);

}  // namespace nlr
