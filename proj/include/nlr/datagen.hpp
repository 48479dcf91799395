#pragma once

#include <vector>

#include "nlr/matrix.hpp"
#include "nlr/rng.hpp"

namespace nlr {

/// Frame-major stack of single-channel frames; image-like stacks keep entries
/// in [0, 255].
struct FrameStack {
    index_t height = 0;
    index_t width = 0;
    index_t frames = 0;
    std::vector<double> data;  ///< length height*width*frames, frame-major

    double& at(index_t i, index_t j, index_t t) {
        return data[static_cast<std::size_t>(t * height * width + j * height + i)];
    }
    double at(index_t i, index_t j, index_t t) const {
        return data[static_cast<std::size_t>(t * height * width + j * height + i)];
    }
    RealMatrix frame(index_t t) const;
};

struct RegressionInstance {
    RealMatrix x;
    std::vector<double> beta_true;
    std::vector<double> y;
    double noise_sigma = 0.0;
    std::vector<double> planted_singulars;  ///< |diag(S)| sorted descending
};

struct NearLowRankInstance {
    RealMatrix a;
    std::vector<double> planted_singulars;  ///< descending
};

/// A = U_A Sigma V_A^H with orthonormal factors from QR of Gaussian draws and
/// a spectrum of r uniform(0,1) values plus (n - r) uniform(0,1)*tail values,
/// jointly sorted descending.
RealMatrix near_low_rank(index_t m, index_t n, index_t r, double tail, RngStream stream);
NearLowRankInstance near_low_rank_instance(index_t m, index_t n, index_t r, double tail,
                                           RngStream stream);

/// The spectrum near_low_rank would plant for this stream, without forming
/// the matrix.
std::vector<double> near_low_rank_spectrum(index_t m, index_t n, index_t r, double tail,
                                           RngStream stream);

/// X = U_X S V_X^H with a signed standard-normal spectrum (leading r_eps
/// entries at unit scale, the rest multiplied by tail), beta uniform on
/// [-1, 1], and y = X beta + N(0, noise_sigma^2).
RegressionInstance multicollinear_regression(index_t m, index_t n, index_t r_eps,
                                             double noise_sigma, double tail, RngStream stream);

/// Low-rank spatiotemporal signal (motion_rank separable space x time modes,
/// the first a strictly positive base pattern) plus Gaussian noise, clipped to
/// [0, 255]. Stands in for real frame stacks of the same shape.
FrameStack synthetic_stack(index_t height, index_t width, index_t frames, index_t motion_rank,
                           double noise_level, RngStream stream);

/// (height*width) x frames matrix; column t is frame t flattened column-major.
RealMatrix casorati(const FrameStack& s);
FrameStack uncasorati(const RealMatrix& a, index_t height, index_t width);

}  // namespace nlr
