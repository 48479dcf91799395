#pragma once

#include <cstdint>
#include <random>
#include <span>

#include "nlr/matrix.hpp"

namespace nlr {

/// Value-type descriptor of a random stream. Two streams with equal
/// (seed, stream_id) produce identical draw sequences. Concurrent trials or
/// benchmark cells use distinct stream_ids.
struct RngStream {
    std::uint64_t seed = 0;
    std::uint64_t stream_id = 0;
};

/// Stateful sampler over one stream.
///
/// The generator and transforms are frozen so sequences are reproducible:
/// an mt19937_64 engine seeded with a splitmix64 hash of (seed, stream_id),
/// uniforms taken as the top 53 bits, and normals via the trigonometric
/// Box-Muller transform (pairs are generated together, the second is cached).
class GaussianSampler {
public:
    explicit GaussianSampler(RngStream stream);

    /// Uniform on [0, 1).
    double uniform01();

    /// Standard normal.
    double normal();

    void fill_normal(std::span<double> out);

private:
    std::mt19937_64 engine_;
    double cached_ = 0.0;
    bool has_cached_ = false;
};

/// rows x cols matrix of i.i.d. standard normal entries, filled in
/// column-major order from a fresh sampler over `stream`. The draw is always
/// real-valued, also when used to sketch complex matrices.
RealMatrix gaussian_matrix(index_t rows, index_t cols, RngStream stream);

/// Same, consuming draws from an existing sampler.
RealMatrix gaussian_matrix(index_t rows, index_t cols, GaussianSampler& sampler);

}  // namespace nlr
