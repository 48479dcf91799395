#pragma once

#include "nlr/grsvd.hpp"
#include "nlr/matrix.hpp"
#include "nlr/rangefinder.hpp"
#include "nlr/rng.hpp"

namespace nlr {

/// Fixed-rank randomized SVD: Y = A Omega with an n x ell Gaussian sketch,
/// Q = orth(Y), then the same projection/eigendecomposition/back-projection
/// pipeline as the adaptive method, with no adaptive stop.
template <typename T>
SvdApprox<T> rsvd_fixed_rank(const Matrix<T>& a, index_t ell, RngStream stream);

/// Adaptive randomized range finder: grows the basis one column at a time
/// while maintaining a window of `probes` residual-probe vectors, stopping
/// once every window norm falls below tol / (10 * sqrt(2/pi)).
///
/// When the window criterion fires, ||(I - QQ^H)A||_F <= tol * c with high
/// probability for c = 10 * sqrt(min(m, n)); the basis is usually somewhat
/// larger than the eps-rank.
template <typename T>
RangeBasis<T> arrf(const Matrix<T>& a, double tol, index_t probes, RngStream stream);

template <typename T>
struct QbResult {
    Matrix<T> q;  ///< m x k
    Matrix<T> b;  ///< k x n, equal to Q^H A
    index_t k = 0;
};

/// Blocked QB decomposition with a Frobenius error indicator: accumulates
/// B = Q^H A block by block (one reorthogonalization pass per block) and
/// stops when ||A||_F^2 - ||B||_F^2 <= eps * ||A||_F^2.
template <typename T>
QbResult<T> randqb_ei(const Matrix<T>& a, double eps, index_t block, RngStream stream);

}  // namespace nlr
