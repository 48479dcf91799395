#include <doctest.h>

#include <cmath>

#include "instance_seeds.hpp"
#include "nlr/datagen.hpp"
#include "nlr/metrics.hpp"
#include "nlr/rangefinder.hpp"
#include "test_helpers.hpp"

using namespace nlr;
using namespace nlr::test;

TEST_SUITE_BEGIN("rangefinder");

namespace {

// Explicit projection residual ||(I - QQ^H)A||_F^2, the independent route.
double explicit_residual_sq(const RealMatrix& a, const RealMatrix& q) {
    if (q.cols() == 0) return frobenius_norm(a) * frobenius_norm(a);
    RealMatrix qha = matmul_op(Op::conj_trans, q, Op::none, a);
    RealMatrix g = subtract(a, matmul(q, qha));
    return frobenius_norm(g) * frobenius_norm(g);
}

}  // namespace

TEST_CASE("renormalize_columnwise on the zero matrix") {
    RangeBasis<double> rb = renormalize_columnwise(RealMatrix(9, 6), 0.1, 6, RngStream{1, 0});
    CHECK(rb.k == 0);
    CHECK(rb.q.rows() == 9);
    CHECK(rb.q.cols() == 0);
    CHECK(rb.terminated_early);
}

TEST_CASE("renormalize_columnwise detects an exact rank-1 matrix") {
    RealMatrix a = planted_matrix(15, 10, {0.7}, 3);
    RangeBasis<double> rb = renormalize_columnwise(a, 1e-4, 10, RngStream{4, 0});
    REQUIRE(rb.k == 1);
    CHECK(std::sqrt(explicit_residual_sq(a, rb.q)) <= 1e-12 * frobenius_norm(a));
}

TEST_CASE("renormalize_columnwise splits a 1,1,1e-9 spectrum at eps = 1e-6") {
    RealMatrix a = planted_matrix(10, 8, {1.0, 1.0, 1e-9, 1e-9, 1e-9}, 7);
    int hits = 0;
    for (std::uint64_t trial = 0; trial < 100; ++trial) {
        RangeBasis<double> rb = renormalize_columnwise(a, 1e-6, 8, RngStream{90, trial});
        if (rb.k == 2) ++hits;
    }
    CHECK(hits >= 99);
}

TEST_CASE("renormalize_columnwise validates arguments") {
    RealMatrix a = random_real(6, 4, 11);
    CHECK_THROWS_AS(renormalize_columnwise(a, 1.0, 4, RngStream{}), InvalidArgument);
    CHECK_THROWS_AS(renormalize_columnwise(a, -0.1, 4, RngStream{}), InvalidArgument);
    CHECK_THROWS_AS(renormalize_columnwise(a, 0.1, 0, RngStream{}), InvalidArgument);
    CHECK_THROWS_AS(renormalize_columnwise(a, 0.1, 5, RngStream{}), InvalidArgument);
}

TEST_CASE("renormalize_columnwise with eps = 0 finds the numerical rank") {
    RealMatrix a = planted_matrix(12, 9, {1.0, 0.5, 0.25}, 13);
    RangeBasis<double> rb = renormalize_columnwise(a, 0.0, 9, RngStream{14, 0});
    CHECK(rb.k == 3);
    CHECK(rb.terminated_early);
}

TEST_CASE("block_rangefinder on the zero matrix stops at k = 0") {
    RangeBasis<double> rb = block_rangefinder(RealMatrix(10, 8), 0.1, 4, RngStream{2, 0});
    CHECK(rb.k == 0);
    CHECK(rb.terminated_early);
    REQUIRE(!rb.diag_trace.empty());
    CHECK(rb.diag_trace.back().magnitude == 0.0);
}

TEST_CASE("block_rangefinder captures an exact rank-3 matrix within the first block") {
    RealMatrix a = planted_matrix(200, 150, {1.0, 0.4, 0.2}, 17);
    RangeBasis<double> rb = block_rangefinder(a, 1e-8, 8, RngStream{18, 0});
    REQUIRE(rb.k == 3);
    CHECK(rb.terminated_early);
    CHECK(rb.diag_trace.back().block_index == 1);
    CHECK(std::sqrt(explicit_residual_sq(a, rb.q)) / frobenius_norm(a) <= 1e-10);
}

TEST_CASE("block_rangefinder validates the block size") {
    RealMatrix a = random_real(6, 4, 19);
    CHECK_THROWS_AS(block_rangefinder(a, 0.1, 0, RngStream{}), InvalidArgument);
    CHECK_THROWS_AS(block_rangefinder(a, 0.1, 4, RngStream{}), InvalidArgument);
    CHECK_THROWS_AS(block_rangefinder(a, -0.1, 2, RngStream{}), InvalidArgument);
}

TEST_CASE("block_rangefinder detects the eps-rank on a near-low-rank instance") {
    // The instance is seeded so the planted spectrum cliffs above the stop
    // threshold; there the detector and the Definition-1.1 oracle agree.
    const double eps = 1e-4;
    const std::uint64_t seed = find_clean_instance_seed(500, 400, 50, 1e-8, eps, 4.0);
    auto inst = near_low_rank_instance(500, 400, 50, 1e-8, RngStream{seed, 0});
    const index_t r_eps = eps_rank_oracle(inst.a, eps);
    REQUIRE(r_eps == 50);
    int joint_hits = 0;
    const int trials = 20;
    for (std::uint64_t t = 0; t < trials; ++t) {
        RangeBasis<double> rb = block_rangefinder(inst.a, eps, 16, RngStream{777, t});
        const double rel =
            std::sqrt(explicit_residual_sq(inst.a, rb.q)) / frobenius_norm(inst.a);
        if (rb.k == r_eps && rel <= 1e-2) ++joint_hits;
    }
    CHECK(joint_hits >= 19);
}

TEST_CASE("termination soundness over a seeded corpus") {
    // The stop rule certifies the residual with high frequency, and every
    // conditioned trial captures >= 1 - eps of the spectral energy at the
    // detected rank.
    const double eps = 1e-4;
    const std::uint64_t seed = find_clean_instance_seed(200, 160, 20, 1e-8, eps, 4.0);
    RealMatrix a = near_low_rank(200, 160, 20, 1e-8, RngStream{seed, 0});
    const auto sv = singular_values(a);
    int conditioned = 0;
    const int trials = 100;
    for (std::uint64_t t = 0; t < trials; ++t) {
        RangeBasis<double> rb = block_rangefinder(a, eps, 8, RngStream{500, t});
        const double rel = std::sqrt(explicit_residual_sq(a, rb.q)) / frobenius_norm(a);
        if (rel <= std::sqrt(eps)) {
            ++conditioned;
            CHECK(energy_ratio(sv, rb.k) >= 1.0 - eps);
        }
    }
    CHECK(conditioned >= 95);
}

TEST_CASE("diag_trace respects the stopping invariant") {
    auto inst = near_low_rank_instance(120, 90, 12, 1e-9, RngStream{23, 0});
    RangeBasis<double> rb = block_rangefinder(inst.a, 1e-5, 5, RngStream{24, 0});
    REQUIRE(rb.terminated_early);
    const double thresh = rb.a_fro * std::sqrt(rb.eps) / std::sqrt(2.0);
    REQUIRE(!rb.diag_trace.empty());
    CHECK(rb.diag_trace.back().magnitude <= thresh);
    for (std::size_t i = 0; i + 1 < rb.diag_trace.size(); ++i)
        CHECK(rb.diag_trace[i].magnitude > thresh);
}

TEST_CASE("Pythagorean identity on range-finder outputs") {
    for (std::uint64_t t = 0; t < 5; ++t) {
        RealMatrix a = near_low_rank(80, 60, 10, 1e-6, RngStream{600 + t, 0});
        RangeBasis<double> rb = block_rangefinder(a, 1e-4, 7, RngStream{700 + t, 0});
        const double total = frobenius_norm(a) * frobenius_norm(a);
        double captured = 0.0;
        if (rb.k > 0) {
            RealMatrix qha = matmul_op(Op::conj_trans, rb.q, Op::none, a);
            captured = frobenius_norm(qha) * frobenius_norm(qha);
        }
        const double residual = explicit_residual_sq(a, rb.q);
        CHECK(std::abs(total - captured - residual) <= 1e-9 * total);
    }
}

TEST_CASE("residual is non-increasing as columns are appended") {
    RealMatrix a = near_low_rank(60, 45, 8, 1e-4, RngStream{25, 0});
    RangeBasis<double> rb = block_rangefinder(a, 1e-6, 4, RngStream{26, 0});
    double prev = frobenius_norm(a) * frobenius_norm(a);
    for (index_t j = 1; j <= rb.k; ++j) {
        const double e = residual_energy(a, rb.q.left_cols(j));
        CHECK(e <= prev * (1.0 + 1e-12) + 1e-12);
        prev = e;
    }
}

TEST_CASE("expectation identity for the projected probe energy") {
    RealMatrix a = near_low_rank(60, 40, 6, 1e-5, RngStream{27, 0});
    RangeBasis<double> rb = block_rangefinder(a, 1e-3, 5, RngStream{28, 0});
    const double target = residual_energy(a, rb.q);

    // Fresh probes w: b^2 = ||(I - QQ^H) A w||^2.
    RealMatrix qha = matmul_op(Op::conj_trans, rb.q, Op::none, a);
    RealMatrix g = subtract(a, matmul(rb.q, qha));
    const index_t trials = 20000;
    GaussianSampler sampler(RngStream{29, 0});
    RealMatrix w(a.cols(), 1);
    double sum = 0.0, sum_sq = 0.0;
    for (index_t t = 0; t < trials; ++t) {
        for (index_t i = 0; i < a.cols(); ++i) w(i, 0) = sampler.normal();
        RealMatrix gw = matmul(g, w);
        const double b_sq = frobenius_norm(gw) * frobenius_norm(gw);
        sum += b_sq;
        sum_sq += b_sq * b_sq;
    }
    const double mean = sum / trials;
    const double var = sum_sq / trials - mean * mean;
    CHECK(std::abs(mean - target) <= 3.0 * std::sqrt(var / trials));
}

TEST_CASE("residual_energy") {
    RealMatrix a = planted_matrix(30, 12, {1.0, 0.5, 0.2}, 31);
    RangeBasis<double> rb = block_rangefinder(a, 1e-10, 6, RngStream{32, 0});
    REQUIRE(rb.k == 3);
    CHECK(residual_energy(a, rb.q) <= 1e-10 * frobenius_norm(a) * frobenius_norm(a));

    CHECK(residual_energy(a, RealMatrix(30, 0)) ==
          doctest::Approx(frobenius_norm(a) * frobenius_norm(a)));

    RealMatrix b = random_real(25, 15, 33);
    RealMatrix y = matmul(b, random_real(15, 5, 34));
    RealMatrix q = economy_qr(y).q;
    const double fast = residual_energy(b, q);
    const double slow = explicit_residual_sq(b, q);
    CHECK(std::abs(fast - slow) <= 1e-9 * std::max(fast, slow));

    RealMatrix not_ortho = scale(q, 2.0);
    CHECK_THROWS_AS(residual_energy(b, not_ortho), InvalidArgument);
    CHECK_THROWS_AS(residual_energy(b, RealMatrix(24, 3)), InvalidArgument);
}

TEST_CASE("is_renormalization_matrix") {
    RealMatrix a = planted_matrix(10, 8, {1.0, 0.5}, 35);
    RealMatrix omega = random_real(8, 2, 36);
    CHECK(is_renormalization_matrix(a, omega, 1e-10));

    // A single coordinate probe cannot reproduce a generic rank-2 range.
    RealMatrix e1(8, 1);
    e1(0, 0) = 1.0;
    CHECK_FALSE(is_renormalization_matrix(a, e1, 1e-10));

    CHECK(is_renormalization_matrix(RealMatrix(6, 4), random_real(4, 2, 37), 1e-10));
    CHECK_THROWS_AS(is_renormalization_matrix(a, random_real(7, 2, 38), 1e-10),
                    InvalidArgument);
}

TEST_CASE("Gaussian sketches preserve rank across 100 instances") {
    int ok = 0;
    for (std::uint64_t t = 0; t < 100; ++t) {
        const index_t rank = 1 + static_cast<index_t>(t % 5);
        std::vector<double> sigma;
        for (index_t i = 0; i < rank; ++i)
            sigma.push_back(1.0 / static_cast<double>(i + 1));
        RealMatrix a = planted_matrix(12, 9, sigma, 800 + t);
        RealMatrix omega = gaussian_matrix(9, rank, RngStream{900 + t, 0});
        if (is_renormalization_matrix(a, omega, 1e-10)) ++ok;
    }
    CHECK(ok == 100);
}

TEST_CASE("rank invariance under full-rank multiplication") {
    for (std::uint64_t t = 0; t < 100; ++t) {
        RealMatrix a = random_real(8, 5, 1000 + t);   // full column rank a.s.
        RealMatrix b = random_real(5, 4, 1100 + t);
        RealMatrix c = random_real(4, 6, 1200 + t);   // full row rank a.s.
        const auto rank_of = [](const RealMatrix& x) {
            return numerical_rank(singular_values(x), 1e-10);
        };
        CHECK(rank_of(matmul(matmul(a, b), c)) == rank_of(b));
    }
}

TEST_CASE("block_rangefinder handles complex inputs") {
    GaussianSampler sampler(RngStream{39, 0});
    ComplexMatrix u(20, 2), vh(2, 15);
    for (index_t i = 0; i < u.size(); ++i) u.data()[i] = cdouble(sampler.normal(), sampler.normal());
    for (index_t i = 0; i < vh.size(); ++i)
        vh.data()[i] = cdouble(sampler.normal(), sampler.normal());
    ComplexMatrix a = matmul(u, vh);
    RangeBasis<cdouble> rb = block_rangefinder(a, 1e-10, 4, RngStream{40, 0});
    CHECK(rb.k == 2);
    ComplexMatrix qha = matmul_op(Op::conj_trans, rb.q, Op::none, a);
    ComplexMatrix res = subtract(a, matmul(rb.q, qha));
    CHECK(frobenius_norm(res) <= 1e-10 * frobenius_norm(a));
}

TEST_SUITE_END();
