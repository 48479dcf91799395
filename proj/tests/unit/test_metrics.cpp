#include <doctest.h>

#include <cmath>

#include "nlr/metrics.hpp"
#include "test_helpers.hpp"

using namespace nlr;
using namespace nlr::test;

TEST_SUITE_BEGIN("metrics");

TEST_CASE("eps_rank on a two-value spectrum") {
    const std::vector<double> sv = {4.0, 3.0};
    CHECK(eps_rank_from_singulars(sv, 0.4) == 1);  // 16/25 = 0.64 >= 0.6
    CHECK(eps_rank_from_singulars(sv, 0.0) == 2);
    CHECK_THROWS_AS(eps_rank_from_singulars(sv, 1.0), InvalidArgument);
    CHECK_THROWS_AS(eps_rank_from_singulars(std::vector<double>{0.0, 0.0}, 0.1),
                    InvalidArgument);
}

TEST_CASE("eps_rank_oracle rejects the zero matrix and is monotone in eps") {
    CHECK_THROWS_AS(eps_rank_oracle(RealMatrix(4, 3), 0.1), InvalidArgument);

    RealMatrix a = planted_matrix(30, 20, {1.0, 0.6, 0.3, 0.1, 0.04}, 5);
    index_t prev = 21;
    for (double eps : {0.0, 1e-6, 1e-3, 1e-2, 0.1, 0.5}) {
        const index_t r = eps_rank_oracle(a, eps);
        CHECK(r <= prev);
        prev = r;
    }
}

TEST_CASE("reconstruction_error") {
    RealMatrix a = random_real(6, 5, 61);
    CHECK(reconstruction_error(a, a) == 0.0);
    CHECK(reconstruction_error(a, RealMatrix(6, 5)) == doctest::Approx(1.0));
    CHECK_THROWS_AS(reconstruction_error(a, RealMatrix(5, 6)), InvalidArgument);
    CHECK_THROWS_AS(reconstruction_error(RealMatrix(6, 5), a), InvalidArgument);
}

TEST_CASE("singular_value_error") {
    const std::vector<double> exact = {2.0};
    const std::vector<double> approx = {std::sqrt(2.0)};
    CHECK(singular_value_error(exact, exact, 1) == 0.0);
    CHECK(singular_value_error(exact, approx, 1) == doctest::Approx(0.5));
    const std::vector<double> with_zero = {1.0, 0.0};
    CHECK_THROWS_AS(singular_value_error(with_zero, with_zero, 2), InvalidArgument);
    CHECK_THROWS_AS(singular_value_error(exact, approx, 2), InvalidArgument);
}

TEST_CASE("orthogonality_defect") {
    RealMatrix q = economy_qr(random_real(12, 4, 71)).q;
    CHECK(orthogonality_defect(q) <= 1e-14);

    RealMatrix u(3, 1);
    u(0, 0) = 2.0;  // U^H U = [[4]]
    CHECK(orthogonality_defect(u) == doctest::Approx(3.0));
}

TEST_CASE("energy_ratio") {
    const std::vector<double> sv = {4.0, 3.0};
    CHECK(energy_ratio(sv, 2) == doctest::Approx(1.0));
    CHECK(energy_ratio(sv, 1) == doctest::Approx(0.64));
    CHECK_THROWS_AS(energy_ratio(std::vector<double>{0.0}, 1), InvalidArgument);
    CHECK_THROWS_AS(energy_ratio(sv, 3), InvalidArgument);
}

TEST_CASE("psnr reference points") {
    CHECK(psnr(255.0 * 255.0) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(psnr(0.2) == doctest::Approx(55.1213).epsilon(1e-4));
    CHECK(psnr(1.0) == doctest::Approx(48.1308).epsilon(1e-4));
    CHECK_THROWS_AS(psnr(0.0), InvalidArgument);
    CHECK_THROWS_AS(psnr(-1.0), InvalidArgument);
}

TEST_CASE("psnr is strictly decreasing in e_mse") {
    double prev = psnr(1e-6);
    for (double e : {1e-4, 1e-2, 0.5, 1.0, 10.0, 1000.0}) {
        const double v = psnr(e);
        CHECK(v < prev);
        prev = v;
    }
}

TEST_CASE("epi") {
    RealMatrix img(8, 9);
    GaussianSampler sampler(RngStream{81, 0});
    for (index_t i = 0; i < img.size(); ++i)
        img.data()[i] = 100.0 + 30.0 * sampler.normal();

    CHECK(epi(img, img) == 1.0);

    RealMatrix anti(8, 9);
    for (index_t i = 0; i < img.size(); ++i) anti.data()[i] = -img.data()[i] + 55.0;
    CHECK(epi(img, anti) == doctest::Approx(-1.0).epsilon(1e-12));

    RealMatrix flat(8, 9);
    for (index_t i = 0; i < flat.size(); ++i) flat.data()[i] = 42.0;
    CHECK_THROWS_AS(epi(img, flat), UndefinedMetric);
    CHECK_THROWS_AS(epi(img, RealMatrix(9, 8)), InvalidArgument);
    CHECK_THROWS_AS(epi(RealMatrix(2, 2), RealMatrix(2, 2)), InvalidArgument);
}

TEST_SUITE_END();
