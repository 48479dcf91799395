#pragma once

#include <cmath>
#include <cstdint>

#include "nlr/datagen.hpp"
#include "nlr/metrics.hpp"

namespace nlr::test {

// Scans generator seeds for a near-low-rank instance whose planted spectrum
// puts the eps-rank exactly at r with the smallest leading singular value
// clearing the block stop threshold by `margin`. Such instances realize the
// clean-cliff regime in which the detector and the Definition-1.1 oracle
// agree; spectra whose order statistics straddle the threshold make the two
// quantities differ by design of the eps/2 safety factor.
inline std::uint64_t find_clean_instance_seed(index_t m, index_t n, index_t r, double tail,
                                              double eps, double margin,
                                              std::uint64_t base_seed = 1,
                                              std::uint64_t max_scans = 2000000) {
    for (std::uint64_t seed = base_seed; seed < base_seed + max_scans; ++seed) {
        const auto spectrum = near_low_rank_spectrum(m, n, r, tail, RngStream{seed, 0});
        if (eps_rank_from_singulars(spectrum, eps) != r) continue;
        double total = 0.0;
        for (double s : spectrum) total += s * s;
        const double thresh = std::sqrt(total) * std::sqrt(eps) / std::sqrt(2.0);
        if (spectrum[static_cast<std::size_t>(r - 1)] >= margin * thresh) return seed;
    }
    throw std::runtime_error("find_clean_instance_seed: no qualifying seed in range");
}

}  // namespace nlr::test
