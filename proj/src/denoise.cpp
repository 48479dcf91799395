#include "nlr/denoise.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "nlr/grsvd.hpp"
#include "nlr/metrics.hpp"

namespace nlr {

std::pair<FrameStack, DenoiseReport> denoise_stack(const FrameStack& s, double eps,
                                                   index_t block, RngStream stream) {
    RealMatrix a = casorati(s);

    const auto t0 = std::chrono::steady_clock::now();
    SvdApprox<double> f = grsvd(a, eps, block, stream);
    const auto t1 = std::chrono::steady_clock::now();

    RealMatrix ahat = reconstruct(f);
    for (index_t i = 0; i < ahat.size(); ++i)
        ahat.data()[i] = std::clamp(ahat.data()[i], 0.0, 255.0);
    FrameStack out = uncasorati(ahat, s.height, s.width);

    DenoiseReport report;
    report.k = f.k;
    report.wall_seconds = std::chrono::duration<double>(t1 - t0).count();
    report.mse = reconstruction_error(a, ahat);
    report.psnr_db = psnr(report.mse);

    // Retained energy fraction: ||A_hat||_F^2 / ||A||_F^2, which equals the
    // cumulative squared-singular-value ratio of the truncation.
    double head = 0.0;
    for (double sv : f.sigma) head += sv * sv;
    const double a_fro = frobenius_norm(a);
    report.er = a_fro > 0.0 ? std::min(1.0, head / (a_fro * a_fro)) : 0.0;

    double epi_sum = 0.0;
    for (index_t t = 0; t < s.frames; ++t) epi_sum += epi(s.frame(t), out.frame(t));
    report.epi = epi_sum / static_cast<double>(s.frames);
    return {std::move(out), report};
}

}  // namespace nlr
