#include "nlr/rng.hpp"

#include <cmath>
#include <numbers>

namespace nlr {

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t mix_stream(RngStream s) {
    return splitmix64(splitmix64(s.seed) ^ splitmix64(s.stream_id ^ 0xD1B54A32D192ED03ULL));
}

}  // namespace

GaussianSampler::GaussianSampler(RngStream stream) : engine_(mix_stream(stream)) {}

double GaussianSampler::uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double GaussianSampler::normal() {
    if (has_cached_) {
        has_cached_ = false;
        return cached_;
    }
    const double u1 = 1.0 - uniform01();  // (0, 1], keeps log finite
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    cached_ = r * std::sin(angle);
    has_cached_ = true;
    return r * std::cos(angle);
}

void GaussianSampler::fill_normal(std::span<double> out) {
    for (double& x : out) x = normal();
}

RealMatrix gaussian_matrix(index_t rows, index_t cols, RngStream stream) {
    GaussianSampler sampler(stream);
    return gaussian_matrix(rows, cols, sampler);
}

RealMatrix gaussian_matrix(index_t rows, index_t cols, GaussianSampler& sampler) {
    if (rows < 1 || cols < 1)
        throw InvalidArgument("gaussian_matrix: dimensions must be positive");
    RealMatrix out(rows, cols);
    sampler.fill_normal(std::span<double>(out.data(), static_cast<std::size_t>(out.size())));
    return out;
}

}  // namespace nlr
