#include <doctest.h>

#include <cmath>
#include <cstring>
#include <fstream>

#include "nlr/kernels.hpp"
#include "nlr/matrix.hpp"
#include "nlr/matrix_io.hpp"
#include "nlr/metrics.hpp"
#include "nlr/rng.hpp"
#include "test_helpers.hpp"

using namespace nlr;
using namespace nlr::test;

TEST_SUITE_BEGIN("matcore");

TEST_CASE("gaussian_matrix is deterministic per stream") {
    RealMatrix a = gaussian_matrix(1, 1, RngStream{42, 0});
    RealMatrix b = gaussian_matrix(1, 1, RngStream{42, 0});
    CHECK(a(0, 0) == b(0, 0));

    RealMatrix c = gaussian_matrix(8, 8, RngStream{42, 1});
    RealMatrix d = gaussian_matrix(8, 8, RngStream{42, 1});
    CHECK(std::memcmp(c.data(), d.data(), sizeof(double) * 64) == 0);

    RealMatrix e = gaussian_matrix(8, 8, RngStream{42, 2});
    CHECK(std::memcmp(c.data(), e.data(), sizeof(double) * 64) != 0);
}

TEST_CASE("gaussian_matrix sample moments match the standard normal") {
    const index_t n = 10000;
    RealMatrix draws = gaussian_matrix(n, 1, RngStream{7, 0});
    double mean = 0.0;
    for (index_t i = 0; i < n; ++i) mean += draws(i, 0);
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (index_t i = 0; i < n; ++i) var += (draws(i, 0) - mean) * (draws(i, 0) - mean);
    var /= static_cast<double>(n - 1);
    CHECK(std::abs(mean) < 4.0 / std::sqrt(static_cast<double>(n)));
    CHECK(std::abs(var - 1.0) < 0.05);
}

TEST_CASE("gaussian_matrix entries are finite and dims validated") {
    RealMatrix a = gaussian_matrix(3, 2, RngStream{1, 5});
    CHECK(all_finite(a));
    CHECK_THROWS_AS(gaussian_matrix(0, 2, RngStream{}), InvalidArgument);
    CHECK_THROWS_AS(gaussian_matrix(2, 0, RngStream{}), InvalidArgument);
}

TEST_CASE("matmul identity and hand examples") {
    RealMatrix a = random_real(3, 4, 11);
    RealMatrix prod = matmul(RealMatrix::identity(3), a);
    CHECK(rel_fro_error(a, prod) == 0.0);

    RealMatrix b(2, 2);
    b(0, 0) = 1; b(0, 1) = 2; b(1, 0) = 3; b(1, 1) = 4;
    RealMatrix ones(2, 1);
    ones(0, 0) = 1; ones(1, 0) = 1;
    RealMatrix r = matmul(b, ones);
    CHECK(r(0, 0) == doctest::Approx(3.0));
    CHECK(r(1, 0) == doctest::Approx(7.0));
}

TEST_CASE("matmul agrees with the triple-loop oracle") {
    RealMatrix a = random_real(5, 4, 21);
    RealMatrix b = random_real(4, 3, 22);
    RealMatrix fast = matmul(a, b);
    RealMatrix slow = matmul_oracle(a, b);
    CHECK(rel_fro_error(slow, fast) < 1e-13);

    ComplexMatrix ca = random_complex(5, 4, 23);
    ComplexMatrix cb = random_complex(4, 3, 24);
    ComplexMatrix cfast = matmul(ca, cb);
    ComplexMatrix cslow = matmul_oracle(ca, cb);
    CHECK(frobenius_norm(subtract(cslow, cfast)) < 1e-13 * frobenius_norm(cslow));
}

TEST_CASE("matmul validates shapes and promotes mixed kinds") {
    RealMatrix a = random_real(3, 4, 31);
    RealMatrix b = random_real(3, 4, 32);
    CHECK_THROWS_AS(matmul(a, b), InvalidArgument);

    ComplexMatrix cb = random_complex(4, 2, 33);
    ComplexMatrix mixed = matmul(a, cb);
    ComplexMatrix direct = matmul(to_complex(a), cb);
    CHECK(frobenius_norm(subtract(mixed, direct)) == 0.0);
}

TEST_CASE("hermitian_transpose") {
    RealMatrix a(2, 2);
    a(0, 0) = 1; a(0, 1) = 2; a(1, 0) = 3; a(1, 1) = 4;
    RealMatrix at = hermitian_transpose(a);
    CHECK(at(0, 0) == 1.0);
    CHECK(at(0, 1) == 3.0);
    CHECK(at(1, 0) == 2.0);
    CHECK(at(1, 1) == 4.0);

    ComplexMatrix c(1, 1);
    c(0, 0) = cdouble(0.0, 1.0);
    ComplexMatrix ch = hermitian_transpose(c);
    CHECK(ch(0, 0) == cdouble(0.0, -1.0));

    RealMatrix b = random_real(4, 6, 41);
    CHECK(rel_fro_error(b, hermitian_transpose(hermitian_transpose(b))) == 0.0);
}

TEST_CASE("economy_qr on an orthonormal input gives R = I") {
    RealMatrix q0 = economy_qr(random_real(12, 5, 51)).q;
    QrResult<double> qr = economy_qr(q0);
    RealMatrix eye = RealMatrix::identity(5);
    CHECK(frobenius_norm(subtract(qr.r, eye)) < 1e-12);
}

TEST_CASE("economy_qr 3-4-5 column") {
    RealMatrix a(2, 1);
    a(0, 0) = 3; a(1, 0) = 4;
    QrResult<double> qr = economy_qr(a);
    CHECK(qr.r(0, 0) == doctest::Approx(5.0).epsilon(1e-14));
    CHECK(qr.q(0, 0) == doctest::Approx(0.6).epsilon(1e-14));
    CHECK(qr.q(1, 0) == doctest::Approx(0.8).epsilon(1e-14));
}

TEST_CASE("economy_qr residuals and orthogonality") {
    QrResult<double> qr = economy_qr(random_real(20, 8, 61));
    RealMatrix a = random_real(20, 8, 61);
    CHECK(orthogonality_defect(qr.q) * std::sqrt(8.0) <= 1e-12);
    CHECK(rel_fro_error(a, matmul(qr.q, qr.r)) <= 1e-13);
}

TEST_CASE("economy_qr property: residual, orthogonality, nonnegative diagonal") {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        const index_t m = 10 + static_cast<index_t>(seed) * 17;
        const index_t n = 3 + static_cast<index_t>(seed) * 5;
        RealMatrix a = random_real(m, n, 100 + seed);
        QrResult<double> qr = economy_qr(a);
        CHECK(frobenius_norm(subtract(matmul(qr.q, qr.r), a)) <= 1e-12 * frobenius_norm(a));
        RealMatrix g = matmul_op(Op::conj_trans, qr.q, Op::none, qr.q);
        for (index_t i = 0; i < n; ++i) g(i, i) -= 1.0;
        CHECK(frobenius_norm(g) <= 1e-12 * std::sqrt(static_cast<double>(n)));
        for (index_t i = 0; i < n; ++i) CHECK(qr.r(i, i) >= 0.0);

        ComplexMatrix ca = random_complex(m, n, 200 + seed);
        QrResult<cdouble> cqr = economy_qr(ca);
        CHECK(frobenius_norm(subtract(matmul(cqr.q, cqr.r), ca)) <= 1e-12 * frobenius_norm(ca));
        for (index_t i = 0; i < n; ++i) {
            CHECK(cqr.r(i, i).imag() == doctest::Approx(0.0).epsilon(1e-14));
            CHECK(cqr.r(i, i).real() >= 0.0);
        }
    }
    CHECK_THROWS_AS(economy_qr(random_real(3, 5, 1)), InvalidArgument);
}

TEST_CASE("hermitian_eig on a diagonal matrix sorts descending") {
    RealMatrix c(3, 3);
    c(0, 0) = 2; c(1, 1) = 5; c(2, 2) = 1;
    EigResult<double> eig = hermitian_eig(c);
    CHECK(eig.eigenvalues[0] == doctest::Approx(5.0));
    CHECK(eig.eigenvalues[1] == doctest::Approx(2.0));
    CHECK(eig.eigenvalues[2] == doctest::Approx(1.0));
    // Eigenvectors of a diagonal matrix are coordinate axes.
    for (index_t j = 0; j < 3; ++j) {
        double max_abs = 0.0;
        for (index_t i = 0; i < 3; ++i) max_abs = std::max(max_abs, std::abs(eig.u(i, j)));
        CHECK(max_abs == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("hermitian_eig of a Gram matrix is PSD up to round-off") {
    RealMatrix b = random_real(6, 9, 71);
    RealMatrix c = matmul_op(Op::none, b, Op::conj_trans, b);
    EigResult<double> eig = hermitian_eig(c);
    for (double lam : eig.eigenvalues) CHECK(lam >= -1e-12 * eig.eigenvalues[0]);
}

TEST_CASE("hermitian_eig reconstruction") {
    RealMatrix g = random_real(10, 10, 81);
    RealMatrix c = add(g, hermitian_transpose(g));
    EigResult<double> eig = hermitian_eig(c);
    RealMatrix ul = eig.u;
    for (index_t j = 0; j < 10; ++j)
        for (index_t i = 0; i < 10; ++i) ul(i, j) *= eig.eigenvalues[static_cast<std::size_t>(j)];
    CHECK(rel_fro_error(c, matmul_op(Op::none, ul, Op::conj_trans, eig.u)) <= 1e-12);

    ComplexMatrix cg = random_complex(8, 8, 82);
    ComplexMatrix cc = add(cg, hermitian_transpose(cg));
    EigResult<cdouble> ceig = hermitian_eig(cc);
    ComplexMatrix cul = ceig.u;
    for (index_t j = 0; j < 8; ++j)
        for (index_t i = 0; i < 8; ++i)
            cul(i, j) *= ceig.eigenvalues[static_cast<std::size_t>(j)];
    CHECK(frobenius_norm(subtract(matmul_op(Op::none, cul, Op::conj_trans, ceig.u), cc)) <=
          1e-12 * frobenius_norm(cc));
}

TEST_CASE("hermitian_eig reconstruction up to 200x200") {
    RealMatrix g = random_real(200, 200, 83);
    RealMatrix c = add(g, hermitian_transpose(g));
    EigResult<double> eig = hermitian_eig(c);
    RealMatrix ul = eig.u;
    for (index_t j = 0; j < 200; ++j)
        for (index_t i = 0; i < 200; ++i)
            ul(i, j) *= eig.eigenvalues[static_cast<std::size_t>(j)];
    CHECK(frobenius_norm(subtract(matmul_op(Op::none, ul, Op::conj_trans, eig.u), c)) <=
          1e-11 * frobenius_norm(c));
}

TEST_CASE("hermitian_eig validates input") {
    CHECK_THROWS_AS(hermitian_eig(random_real(3, 4, 1)), InvalidArgument);
    RealMatrix skew(4, 4);
    skew(0, 1) = 1.0;  // clearly not symmetric
    CHECK_THROWS_AS(hermitian_eig(skew), InvalidArgument);
}

TEST_CASE("cholesky hand examples") {
    RealMatrix s = scale(RealMatrix::identity(2), 4.0);
    RealMatrix l = cholesky(s);
    CHECK(rel_fro_error(scale(RealMatrix::identity(2), 2.0), l) < 1e-15);

    RealMatrix t(2, 2);
    t(0, 0) = 5; t(0, 1) = 2; t(1, 0) = 2; t(1, 1) = 1;
    RealMatrix lt = cholesky(t);
    CHECK(lt(0, 0) == doctest::Approx(std::sqrt(5.0)).epsilon(1e-14));
    CHECK(lt(1, 0) == doctest::Approx(2.0 / std::sqrt(5.0)).epsilon(1e-14));
    CHECK(lt(1, 1) == doctest::Approx(1.0 / std::sqrt(5.0)).epsilon(1e-14));
    CHECK(lt(0, 1) == 0.0);
}

TEST_CASE("cholesky of a regularized Gram matrix") {
    RealMatrix b = random_real(7, 10, 91);
    RealMatrix s = matmul_op(Op::none, b, Op::conj_trans, b);
    for (index_t i = 0; i < 7; ++i) s(i, i) += 1.0;
    RealMatrix l = cholesky(s);
    CHECK(rel_fro_error(s, matmul_op(Op::none, l, Op::conj_trans, l)) <= 1e-13);
    for (index_t i = 0; i < 7; ++i) CHECK(l(i, i) > 0.0);
}

TEST_CASE("cholesky rejects indefinite input") {
    RealMatrix s = scale(RealMatrix::identity(3), -1.0);
    CHECK_THROWS_AS(cholesky(s), DecompositionFailure);
}

TEST_CASE("triangular_solve") {
    RealMatrix b = random_real(4, 3, 101);
    RealMatrix x = triangular_solve(RealMatrix::identity(4), b, Side::left, false);
    CHECK(rel_fro_error(b, x) == 0.0);

    RealMatrix l(2, 2);
    l(0, 0) = 2; l(1, 1) = 4;
    RealMatrix rhs(2, 1);
    rhs(0, 0) = 2; rhs(1, 0) = 8;
    RealMatrix sol = triangular_solve(l, rhs, Side::left, false);
    CHECK(sol(0, 0) == doctest::Approx(1.0));
    CHECK(sol(1, 0) == doctest::Approx(2.0));

    // Random well-conditioned lower-triangular system.
    RealMatrix lw(6, 6);
    GaussianSampler sampler(RngStream{31, 7});
    for (index_t j = 0; j < 6; ++j) {
        for (index_t i = j + 1; i < 6; ++i) lw(i, j) = 0.3 * sampler.normal();
        lw(j, j) = 2.0 + sampler.uniform01();
    }
    RealMatrix rhs2 = random_real(6, 4, 102);
    RealMatrix x2 = triangular_solve(lw, rhs2, Side::left, false);
    CHECK(rel_fro_error(rhs2, matmul(lw, x2)) <= 1e-12);

    // Transposed and right-side variants.
    RealMatrix xt = triangular_solve(lw, rhs2, Side::left, true);
    CHECK(rel_fro_error(rhs2, matmul_op(Op::conj_trans, lw, Op::none, xt)) <= 1e-12);
    RealMatrix rhs3 = random_real(4, 6, 103);
    RealMatrix xr = triangular_solve(lw, rhs3, Side::right, false);
    CHECK(rel_fro_error(rhs3, matmul(xr, lw)) <= 1e-12);

    RealMatrix singular(2, 2);
    singular(1, 0) = 1.0;
    CHECK_THROWS_AS(triangular_solve(singular, rhs, Side::left, false), SingularTriangular);
}

TEST_CASE("frobenius_norm") {
    CHECK(frobenius_norm(RealMatrix::identity(4)) == doctest::Approx(2.0).epsilon(1e-15));
    RealMatrix a(1, 2);
    a(0, 0) = 3; a(0, 1) = 4;
    CHECK(frobenius_norm(a) == doctest::Approx(5.0).epsilon(1e-15));

    RealMatrix b = random_real(9, 6, 111);
    const auto sv = singular_values(b);
    double acc = 0.0;
    for (double s : sv) acc += s * s;
    CHECK(frobenius_norm(b) == doctest::Approx(std::sqrt(acc)).epsilon(1e-12));
}

TEST_CASE("nlrm round trip is bit exact") {
    TempDir dir;
    const auto path = dir.path() / "a.nlrm";
    RealMatrix a = random_real(7, 5, 121);
    write_matrix(path, a);
    RealMatrix back = expect_real(read_matrix(path));
    REQUIRE(back.rows() == 7);
    REQUIRE(back.cols() == 5);
    CHECK(std::memcmp(a.data(), back.data(), sizeof(double) * 35) == 0);

    const auto cpath = dir.path() / "c.nlrm";
    ComplexMatrix c = random_complex(4, 6, 122);
    write_matrix(cpath, c);
    AnyMatrix any = read_matrix(cpath);
    auto* cm = std::get_if<ComplexMatrix>(&any);
    REQUIRE(cm != nullptr);
    CHECK(std::memcmp(c.data(), cm->data(), sizeof(cdouble) * 24) == 0);
}

TEST_CASE("nlrm format errors carry byte offsets") {
    TempDir dir;
    const auto bad_magic = dir.path() / "bad.nlrm";
    {
        std::ofstream out(bad_magic, std::ios::binary);
        out << "XXXX---------------------------";
    }
    CHECK_THROWS_AS(read_matrix(bad_magic), FormatError);

    const auto good = dir.path() / "good.nlrm";
    write_matrix(good, random_real(3, 3, 131));
    {
        // Truncate the payload.
        std::filesystem::resize_file(good, 24 + 8 * 4);
    }
    CHECK_THROWS_AS(read_matrix(good), FormatError);

    const auto bad_kind = dir.path() / "kind.nlrm";
    write_matrix(bad_kind, random_real(2, 2, 132));
    {
        std::fstream f(bad_kind, std::ios::binary | std::ios::in | std::ios::out);
        f.seekp(5);
        f.put(7);  // unknown scalar kind
    }
    CHECK_THROWS_AS(read_matrix(bad_kind), FormatError);
}

TEST_CASE("csv import and export") {
    TempDir dir;
    const auto path = dir.path() / "m.csv";
    {
        std::ofstream out(path);
        out << "1,2\n3,4\n";
    }
    RealMatrix a = read_matrix_csv(path);
    REQUIRE(a.rows() == 2);
    REQUIRE(a.cols() == 2);
    CHECK(a(0, 0) == 1.0);
    CHECK(a(0, 1) == 2.0);
    CHECK(a(1, 0) == 3.0);
    CHECK(a(1, 1) == 4.0);

    // 17 significant digits round-trip doubles exactly.
    RealMatrix b = random_real(4, 3, 141);
    const auto out_path = dir.path() / "out.csv";
    write_matrix_csv(out_path, b);
    RealMatrix back = read_matrix_csv(out_path);
    CHECK(std::memcmp(b.data(), back.data(), sizeof(double) * 12) == 0);

    const auto ragged = dir.path() / "ragged.csv";
    {
        std::ofstream out(ragged);
        out << "1,2\n3\n";
    }
    CHECK_THROWS_AS(read_matrix_csv(ragged), FormatError);
}

TEST_CASE("Gaussian sketch expectation identity") {
    // For fixed S and a real Gaussian column w, E ||S w||^2 = ||S||_F^2.
    RealMatrix s = random_real(5, 5, 151);
    const double target = frobenius_norm(s) * frobenius_norm(s);
    const index_t trials = 20000;
    GaussianSampler sampler(RngStream{152, 0});
    RealMatrix w(5, 1);
    double sum = 0.0, sum_sq = 0.0;
    for (index_t t = 0; t < trials; ++t) {
        for (index_t i = 0; i < 5; ++i) w(i, 0) = sampler.normal();
        RealMatrix sw = matmul(s, w);
        const double e = frobenius_norm(sw) * frobenius_norm(sw);
        sum += e;
        sum_sq += e * e;
    }
    const double mean = sum / trials;
    const double var = sum_sq / trials - mean * mean;
    const double stderr_mean = std::sqrt(var / trials);
    CHECK(std::abs(mean - target) <= 3.0 * stderr_mean);
}

TEST_SUITE_END();
