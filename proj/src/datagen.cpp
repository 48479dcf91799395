#include "nlr/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "nlr/kernels.hpp"

namespace nlr {

RealMatrix FrameStack::frame(index_t t) const {
    RealMatrix f(height, width);
    for (index_t j = 0; j < width; ++j)
        for (index_t i = 0; i < height; ++i) f(i, j) = at(i, j, t);
    return f;
}

namespace {

RealMatrix haar_factor(index_t rows, index_t cols, GaussianSampler& sampler) {
    return economy_qr(gaussian_matrix(rows, cols, sampler)).q;
}

// A = (U diag(s)) V^H
RealMatrix assemble(const RealMatrix& u, const std::vector<double>& s, const RealMatrix& v) {
    RealMatrix us = u;
    for (index_t j = 0; j < us.cols(); ++j) {
        const double f = s[static_cast<std::size_t>(j)];
        for (index_t i = 0; i < us.rows(); ++i) us(i, j) *= f;
    }
    return matmul_op(Op::none, us, Op::conj_trans, v);
}

}  // namespace

std::vector<double> near_low_rank_spectrum(index_t m, index_t n, index_t r, double tail,
                                           RngStream stream) {
    if (r < 1 || r > n || n > m) throw InvalidArgument("near_low_rank: need 1 <= r <= n <= m");
    if (tail < 0.0 || tail >= 1.0) throw InvalidArgument("near_low_rank: tail must be in [0, 1)");
    GaussianSampler sampler(stream);
    std::vector<double> spectrum(static_cast<std::size_t>(n));
    for (index_t i = 0; i < r; ++i) spectrum[static_cast<std::size_t>(i)] = sampler.uniform01();
    for (index_t i = r; i < n; ++i)
        spectrum[static_cast<std::size_t>(i)] = sampler.uniform01() * tail;
    std::sort(spectrum.begin(), spectrum.end(), std::greater<double>());
    return spectrum;
}

NearLowRankInstance near_low_rank_instance(index_t m, index_t n, index_t r, double tail,
                                           RngStream stream) {
    // The spectrum is drawn first so callers can predict it from the stream
    // alone (seed scans read it without forming the factors).
    std::vector<double> spectrum = near_low_rank_spectrum(m, n, r, tail, stream);
    GaussianSampler sampler(stream);
    for (index_t i = 0; i < n; ++i) sampler.uniform01();  // skip the spectrum draws
    RealMatrix u = haar_factor(m, n, sampler);
    RealMatrix v = haar_factor(n, n, sampler);
    return {assemble(u, spectrum, v), std::move(spectrum)};
}

RealMatrix near_low_rank(index_t m, index_t n, index_t r, double tail, RngStream stream) {
    return near_low_rank_instance(m, n, r, tail, stream).a;
}

RegressionInstance multicollinear_regression(index_t m, index_t n, index_t r_eps,
                                             double noise_sigma, double tail, RngStream stream) {
    if (r_eps < 1 || r_eps > n || n > m)
        throw InvalidArgument("multicollinear_regression: need 1 <= r_eps <= n <= m");
    if (noise_sigma < 0.0)
        throw InvalidArgument("multicollinear_regression: noise_sigma must be nonnegative");
    if (tail < 0.0 || tail >= 1.0)
        throw InvalidArgument("multicollinear_regression: tail must be in [0, 1)");

    GaussianSampler sampler(stream);
    RealMatrix u = haar_factor(m, n, sampler);
    RealMatrix v = haar_factor(n, n, sampler);

    std::vector<double> diag(static_cast<std::size_t>(n));
    for (index_t i = 0; i < r_eps; ++i) diag[static_cast<std::size_t>(i)] = sampler.normal();
    for (index_t i = r_eps; i < n; ++i)
        diag[static_cast<std::size_t>(i)] = sampler.normal() * tail;

    RegressionInstance out;
    out.x = assemble(u, diag, v);
    out.noise_sigma = noise_sigma;

    out.beta_true.resize(static_cast<std::size_t>(n));
    for (double& b : out.beta_true) b = 2.0 * sampler.uniform01() - 1.0;

    out.y.resize(static_cast<std::size_t>(m));
    RealMatrix beta(n, 1);
    for (index_t i = 0; i < n; ++i) beta(i, 0) = out.beta_true[static_cast<std::size_t>(i)];
    RealMatrix xb = matmul(out.x, beta);
    for (index_t i = 0; i < m; ++i)
        out.y[static_cast<std::size_t>(i)] = xb(i, 0) + noise_sigma * sampler.normal();

    out.planted_singulars.resize(static_cast<std::size_t>(n));
    for (index_t i = 0; i < n; ++i)
        out.planted_singulars[static_cast<std::size_t>(i)] =
            std::abs(diag[static_cast<std::size_t>(i)]);
    std::sort(out.planted_singulars.begin(), out.planted_singulars.end(),
              std::greater<double>());
    return out;
}

namespace {

// A spatial pattern mixing one carrier wave with a second component, scaled to
// max-abs 1. `wl_lo`/`wl_hi` bound the carrier wavelength in pixels.
struct SpatialMode {
    double kx1, ky1, phase1;
    double kx2, ky2, phase2;
    double second_weight;
};

SpatialMode draw_spatial(GaussianSampler& sampler, double wl_lo, double wl_hi,
                         double second_wl_lo, double second_wl_hi, double second_weight) {
    const auto wave = [&](double lo, double hi, double& kx, double& ky, double& phase) {
        const double wavelength = lo + (hi - lo) * sampler.uniform01();
        const double theta = std::numbers::pi * sampler.uniform01();
        kx = std::cos(theta) / wavelength;
        ky = std::sin(theta) / wavelength;
        phase = 2.0 * std::numbers::pi * sampler.uniform01();
    };
    SpatialMode m;
    wave(wl_lo, wl_hi, m.kx1, m.ky1, m.phase1);
    wave(second_wl_lo, second_wl_hi, m.kx2, m.ky2, m.phase2);
    m.second_weight = second_weight;
    return m;
}

double eval_spatial(const SpatialMode& m, index_t i, index_t j) {
    const double x = static_cast<double>(j), y = static_cast<double>(i);
    const double two_pi = 2.0 * std::numbers::pi;
    return std::sin(two_pi * (m.kx1 * x + m.ky1 * y) + m.phase1) +
           m.second_weight * std::sin(two_pi * (m.kx2 * x + m.ky2 * y) + m.phase2);
}

}  // namespace

FrameStack synthetic_stack(index_t height, index_t width, index_t frames, index_t motion_rank,
                           double noise_level, RngStream stream) {
    if (height < 3 || width < 3 || frames < 1)
        throw InvalidArgument("synthetic_stack: stack too small");
    if (motion_rank < 1 || motion_rank > frames || motion_rank > height * width)
        throw InvalidArgument("synthetic_stack: motion_rank out of range");
    if (noise_level < 0.0) throw InvalidArgument("synthetic_stack: negative noise level");

    GaussianSampler sampler(stream);
    FrameStack s{height, width, frames,
                 std::vector<double>(
                     static_cast<std::size_t>(height) * static_cast<std::size_t>(width) *
                     static_cast<std::size_t>(frames))};

    struct Mode {
        std::vector<double> spatial;  // height*width, column-major
        std::vector<double> temporal; // frames
        double amplitude;
    };
    std::vector<Mode> modes;
    modes.reserve(static_cast<std::size_t>(motion_rank));

    for (index_t q = 0; q < motion_rank; ++q) {
        Mode mode;
        mode.spatial.resize(static_cast<std::size_t>(height * width));
        // The base mode carries the edge content (a short-wavelength second
        // component); perturbation modes stay smooth so the base dominates the
        // high-pass energy.
        SpatialMode sm = (q == 0) ? draw_spatial(sampler, 8.0, 14.0, 4.0, 5.5, 0.55)
                                  : draw_spatial(sampler, 14.0, 24.0, 14.0, 24.0, 0.5);
        double max_abs = 0.0;
        for (index_t j = 0; j < width; ++j)
            for (index_t i = 0; i < height; ++i) {
                const double v = eval_spatial(sm, i, j);
                mode.spatial[static_cast<std::size_t>(j * height + i)] = v;
                max_abs = std::max(max_abs, std::abs(v));
            }
        if (max_abs > 0.0)
            for (double& v : mode.spatial) v /= max_abs;

        mode.temporal.resize(static_cast<std::size_t>(frames));
        const double cycles = 0.5 + 3.0 * sampler.uniform01();
        const double psi = 2.0 * std::numbers::pi * sampler.uniform01();
        for (index_t t = 0; t < frames; ++t) {
            const double phase =
                2.0 * std::numbers::pi * cycles * static_cast<double>(t) /
                    static_cast<double>(frames) +
                psi;
            mode.temporal[static_cast<std::size_t>(t)] =
                (q == 0) ? 1.0 + 0.08 * std::sin(phase) : std::sin(phase);
        }
        mode.amplitude = (q == 0) ? 45.0 : 30.0 / std::pow(static_cast<double>(q + 1), 1.3);
        modes.push_back(std::move(mode));
    }

    for (index_t t = 0; t < frames; ++t) {
        for (index_t j = 0; j < width; ++j)
            for (index_t i = 0; i < height; ++i) {
                const std::size_t pix = static_cast<std::size_t>(j * height + i);
                double v = 0.0;
                for (index_t q = 0; q < motion_rank; ++q) {
                    const Mode& mode = modes[static_cast<std::size_t>(q)];
                    const double spatial =
                        (q == 0) ? 140.0 + mode.amplitude * mode.spatial[pix]
                                 : mode.amplitude * mode.spatial[pix];
                    v += spatial * mode.temporal[static_cast<std::size_t>(t)];
                }
                s.at(i, j, t) = v;
            }
    }

    if (noise_level > 0.0)
        for (double& v : s.data) v += noise_level * sampler.normal();
    for (double& v : s.data) v = std::clamp(v, 0.0, 255.0);
    return s;
}

RealMatrix casorati(const FrameStack& s) {
    RealMatrix a(s.height * s.width, s.frames);
    for (index_t t = 0; t < s.frames; ++t) {
        const double* src = s.data.data() + static_cast<std::size_t>(t * s.height * s.width);
        std::copy(src, src + s.height * s.width, a.col(t));
    }
    return a;
}

FrameStack uncasorati(const RealMatrix& a, index_t height, index_t width) {
    if (a.rows() != height * width)
        throw InvalidArgument("uncasorati: row count does not match height*width");
    FrameStack s{height, width, a.cols(),
                 std::vector<double>(static_cast<std::size_t>(a.size()))};
    for (index_t t = 0; t < a.cols(); ++t) {
        const double* src = a.col(t);
        std::copy(src, src + height * width,
                  s.data.data() + static_cast<std::size_t>(t * height * width));
    }
    return s;
}

}  // namespace nlr
