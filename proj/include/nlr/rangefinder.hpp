#pragma once

#include <vector>

#include "nlr/matrix.hpp"
#include "nlr/rng.hpp"

namespace nlr {

/// Output of the adaptive range finders.
template <typename T>
struct RangeBasis {
    Matrix<T> q;       ///< m x k, orthonormal columns
    index_t k = 0;     ///< detected eps-rank (number of columns of q)
    double eps = 0.0;  ///< precision the run was driven by
    double a_fro = 0.0;///< ||A||_F recorded at entry
    struct DiagSample {
        index_t block_index;  ///< 1-based block (or column) counter
        index_t position;     ///< 1-based position within the block
        double magnitude;     ///< |T_j(l,l)| scanned at that position
    };
    std::vector<DiagSample> diag_trace;
    bool terminated_early = false;  ///< stop rule fired (vs columns exhausted)
};

struct RangefinderOptions {
    /// Re-project each sample block off the accumulated basis a second time.
    /// Off by default; the plain single projection matches the reference
    /// procedure, the flag exists for ill-conditioned inputs.
    bool reorthogonalize = false;
};

inline constexpr index_t default_block_size = 32;

/// Column-at-a-time Gaussian re-normalization. Iterates k = 1, 2, ...: draws
/// a real Gaussian test vector w_k, forms v_k = (I - QQ^H) A w_k and
/// b_kk = ||v_k||_2, stops without appending when b_kk^2 <= ||A||_F^2 * eps/2,
/// otherwise appends v_k / b_kk. For eps = 0 the threshold degenerates; it is
/// replaced by 64 * u_roundoff * ||A||_F (on the magnitude scale) so the run
/// detects the numerical rank.
template <typename T>
RangeBasis<T> renormalize_columnwise(const Matrix<T>& a, double eps, index_t max_cols,
                                     RngStream stream);

/// Precision-induced block Gaussian re-normalization. Processes blocks of
/// `block` test vectors, QR-factors the projected sample Y_j = P_j T_j, and
/// scans diag(T_j) for the smallest l with
///   |T_j(l,l)| <= ||A||_F * sqrt(eps) / sqrt(2);
/// on a hit it appends P_j(:, 1..l-1) and stops. Total columns are capped at
/// min(m, n); reaching the cap without a hit leaves terminated_early false.
/// For eps = 0 the threshold is 64 * u_roundoff * ||A||_F.
template <typename T>
RangeBasis<T> block_rangefinder(const Matrix<T>& a, double eps, index_t block, RngStream stream,
                                const RangefinderOptions& options = {});

/// ||(I - QQ^H) A||_F^2, computed as ||A||_F^2 - ||Q^H A||_F^2 and floored at
/// zero. Q must have orthonormal columns (defect <= 1e-8 * sqrt(k)).
template <typename T>
double residual_energy(const Matrix<T>& a, const Matrix<T>& q);

/// Whether rank(A * Omega) = rank(A), with numerical ranks taken from dense
/// singular values at threshold rank_tol * sigma_max.
template <typename T>
bool is_renormalization_matrix(const Matrix<T>& a, const Matrix<T>& omega, double rank_tol);

/// Count of singular values above rank_tol * sv[0].
index_t numerical_rank(std::span<const double> sv, double rank_tol);

}  // namespace nlr
