#pragma once

#include <utility>

#include "nlr/datagen.hpp"
#include "nlr/matrix.hpp"
#include "nlr/rng.hpp"

namespace nlr {

struct DenoiseReport {
    double mse = 0.0;      ///< relative Frobenius error against the input stack
    double psnr_db = 0.0;  ///< 10*log10(255^2 / mse)
    double epi = 0.0;      ///< mean edge preservation index over frames
    index_t k = 0;         ///< detected rank
    double er = 0.0;       ///< retained energy fraction
    double wall_seconds = 0.0;  ///< decomposition time
};

/// Casorati-reshape, adaptive SVD at precision eps, reconstruct, un-reshape,
/// clip to [0, 255]. Metrics compare the denoised stack against the input.
std::pair<FrameStack, DenoiseReport> denoise_stack(const FrameStack& s, double eps,
                                                   index_t block, RngStream stream);

}  // namespace nlr
