#include "nlr/gri.hpp"

#include <cstdio>
#include <fstream>

#include "nlr/kernels.hpp"
#include "nlr/matrix_io.hpp"

namespace nlr {

namespace {

// Solves (L L^H) X = B via two triangular solves.
template <typename T>
Matrix<T> gram_solve(const Matrix<T>& l, const Matrix<T>& b) {
    Matrix<T> y = triangular_solve(l, b, Side::left, false);
    return triangular_solve(l, y, Side::left, true);
}

template <typename T>
RegularizedInverse<T> build(const Matrix<T>& a, double lambda, double eps, index_t block,
                            RngStream stream, const RangeBasis<T>* basis, GramSide side) {
    if (lambda <= 0.0) throw InvalidArgument("gri: lambda must be positive");
    if (eps < 0.0 || eps >= 1.0) throw InvalidArgument("gri: eps must be in [0, 1)");

    RegularizedInverse<T> p;
    p.side = side;
    p.lambda = lambda;
    p.m = a.rows();
    p.n = a.cols();

    if (basis) {
        if (basis->q.rows() != a.rows())
            throw InvalidArgument("gri: supplied basis does not match the matrix");
        p.q = basis->q;
    } else {
        p.q = block_rangefinder(a, eps, block, stream).q;
    }
    p.k = p.q.cols();
    p.b = matmul_op(Op::conj_trans, p.q, Op::none, a);

    Matrix<T> gram = matmul_op(Op::none, p.b, Op::conj_trans, p.b);
    if (side == GramSide::left_gram) {
        for (index_t i = 0; i < p.k; ++i) gram(i, i) += T(lambda);
    } else {
        const double inv_lambda = 1.0 / lambda;
        for (index_t i = 0; i < p.k * p.k; ++i) gram.data()[i] *= T(inv_lambda);
        for (index_t i = 0; i < p.k; ++i) gram(i, i) += T(1);
    }
    try {
        p.l = cholesky(gram);
    } catch (const DecompositionFailure& e) {
        // lambda > 0 makes the small Gram positive definite by construction.
        throw NumericError(std::string("gri: internal consistency failure: ") + e.what());
    }
    return p;
}

}  // namespace

template <typename T>
RegularizedInverse<T> gri_left(const Matrix<T>& a, double lambda, double eps, index_t block,
                               RngStream stream, const RangeBasis<T>* basis) {
    return build(a, lambda, eps, block, stream, basis, GramSide::left_gram);
}

template <typename T>
RegularizedInverse<T> gri_right(const Matrix<T>& a, double lambda, double eps, index_t block,
                                RngStream stream, const RangeBasis<T>* basis) {
    return build(a, lambda, eps, block, stream, basis, GramSide::right_gram);
}

template <typename T>
Matrix<T> apply(const RegularizedInverse<T>& p, const Matrix<T>& x) {
    const double inv_lambda = 1.0 / p.lambda;
    if (p.side == GramSide::left_gram) {
        if (x.rows() != p.m) throw InvalidArgument("apply: X must have m rows (left case)");
        Matrix<T> out = scale(x, T(inv_lambda));
        if (p.k == 0) return out;
        Matrix<T> w = matmul_op(Op::conj_trans, p.q, Op::none, x);  // k x c
        Matrix<T> solved = gram_solve(p.l, w);
        for (index_t i = 0; i < solved.size(); ++i)
            solved.data()[i] -= T(inv_lambda) * w.data()[i];
        gemm_view<T>(Op::none, Op::none, p.m, x.cols(), p.k, T{1}, p.q.data(), p.q.rows(),
                     solved.data(), solved.rows(), T{1}, out.data(), out.rows());
        return out;
    }
    if (x.rows() != p.n) throw InvalidArgument("apply: X must have n rows (right case)");
    Matrix<T> out = scale(x, T(inv_lambda));
    if (p.k == 0) return out;
    Matrix<T> bx = matmul(p.b, x);  // k x c
    Matrix<T> solved = gram_solve(p.l, bx);
    gemm_view<T>(Op::conj_trans, Op::none, p.n, x.cols(), p.k,
                 T(-inv_lambda * inv_lambda), p.b.data(), p.b.rows(), solved.data(),
                 solved.rows(), T{1}, out.data(), out.rows());
    return out;
}

template <typename T>
Matrix<T> materialize(const RegularizedInverse<T>& p) {
    const double inv_lambda = 1.0 / p.lambda;
    if (p.side == GramSide::left_gram) {
        Matrix<T> out = scale(Matrix<T>::identity(p.m), T(inv_lambda));
        if (p.k == 0) return out;
        Matrix<T> w = gram_solve(p.l, Matrix<T>::identity(p.k));  // (L L^H)^{-1}
        for (index_t i = 0; i < p.k; ++i) w(i, i) -= T(inv_lambda);
        Matrix<T> qw = matmul(p.q, w);
        gemm_view<T>(Op::none, Op::conj_trans, p.m, p.m, p.k, T{1}, qw.data(), qw.rows(),
                     p.q.data(), p.q.rows(), T{1}, out.data(), out.rows());
        return out;
    }
    Matrix<T> out = scale(Matrix<T>::identity(p.n), T(inv_lambda));
    if (p.k == 0) return out;
    Matrix<T> w = gram_solve(p.l, Matrix<T>::identity(p.k));
    Matrix<T> wb = matmul(w, p.b);  // k x n
    gemm_view<T>(Op::conj_trans, Op::none, p.n, p.n, p.k, T(-inv_lambda * inv_lambda),
                 p.b.data(), p.b.rows(), wb.data(), wb.rows(), T{1}, out.data(), out.rows());
    return out;
}

void save_inverse(const std::filesystem::path& prefix, const RegularizedInverse<double>& p) {
    const std::string base = prefix.string();
    write_matrix(base + ".q.nlrm", p.q);
    write_matrix(base + ".b.nlrm", p.b);
    write_matrix(base + ".l.nlrm", p.l);
    std::ofstream manifest(base + ".manifest", std::ios::trunc);
    if (!manifest) throw FormatError("save_inverse: cannot open " + base + ".manifest");
    char lambda_buf[64];
    std::snprintf(lambda_buf, sizeof lambda_buf, "%.17g", p.lambda);
    manifest << "side = " << (p.side == GramSide::left_gram ? "left" : "right") << "\n"
             << "lambda = " << lambda_buf << "\n"
             << "m = " << p.m << "\n"
             << "n = " << p.n << "\n"
             << "k = " << p.k << "\n";
}

RegularizedInverse<double> load_inverse(const std::filesystem::path& prefix) {
    const std::string base = prefix.string();
    RegularizedInverse<double> p;
    p.q = expect_real(read_matrix(base + ".q.nlrm"));
    p.b = expect_real(read_matrix(base + ".b.nlrm"));
    p.l = expect_real(read_matrix(base + ".l.nlrm"));

    std::ifstream manifest(base + ".manifest");
    if (!manifest) throw FormatError("load_inverse: cannot open " + base + ".manifest");
    std::string key, eq, value;
    bool side_seen = false, lambda_seen = false;
    while (manifest >> key >> eq >> value) {
        if (key == "side") {
            if (value == "left")
                p.side = GramSide::left_gram;
            else if (value == "right")
                p.side = GramSide::right_gram;
            else
                throw FormatError("load_inverse: unknown side '" + value + "'");
            side_seen = true;
        } else if (key == "lambda") {
            p.lambda = std::stod(value);
            lambda_seen = true;
        } else if (key == "m") {
            p.m = std::stoll(value);
        } else if (key == "n") {
            p.n = std::stoll(value);
        } else if (key == "k") {
            p.k = std::stoll(value);
        } else {
            throw FormatError("load_inverse: unknown manifest key '" + key + "'");
        }
    }
    if (!side_seen || !lambda_seen)
        throw FormatError("load_inverse: manifest missing side or lambda");
    if (p.lambda <= 0.0) throw FormatError("load_inverse: lambda must be positive");
    if (p.q.cols() != p.k || p.b.rows() != p.k || p.l.rows() != p.k || p.l.cols() != p.k ||
        p.q.rows() != p.m || p.b.cols() != p.n)
        throw FormatError("load_inverse: inconsistent payload shapes");
    return p;
}

template RegularizedInverse<double> gri_left(const Matrix<double>&, double, double, index_t,
                                             RngStream, const RangeBasis<double>*);
template RegularizedInverse<cdouble> gri_left(const Matrix<cdouble>&, double, double, index_t,
                                              RngStream, const RangeBasis<cdouble>*);
template RegularizedInverse<double> gri_right(const Matrix<double>&, double, double, index_t,
                                              RngStream, const RangeBasis<double>*);
template RegularizedInverse<cdouble> gri_right(const Matrix<cdouble>&, double, double, index_t,
                                               RngStream, const RangeBasis<cdouble>*);
template Matrix<double> apply(const RegularizedInverse<double>&, const Matrix<double>&);
template Matrix<cdouble> apply(const RegularizedInverse<cdouble>&, const Matrix<cdouble>&);
template Matrix<double> materialize(const RegularizedInverse<double>&);
template Matrix<cdouble> materialize(const RegularizedInverse<cdouble>&);

}  // namespace nlr
