#include "nlr/grsvd.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "nlr/kernels.hpp"
#include "nlr/matrix_io.hpp"

namespace nlr {

template <typename T>
SvdApprox<T> svd_from_qb(const Matrix<T>& q, const Matrix<T>& b, double eps, bool direct_svd) {
    const index_t m = q.rows(), n = b.cols();
    const index_t k0 = q.cols();
    if (b.rows() != k0) throw InvalidArgument("svd_from_qb: Q and B ranks differ");

    SvdApprox<T> out;
    out.eps = eps;
    if (k0 == 0) {
        out.u = Matrix<T>(m, 0);
        out.vh = Matrix<T>(0, n);
        return out;
    }

    if (direct_svd) {
        SvdResult<T> svd = thin_svd(b);
        const double s1 = svd.sigma.empty() ? 0.0 : svd.sigma[0];
        const double floor = static_cast<double>(k0) * unit_roundoff * s1 * s1;
        index_t k = 0;
        while (k < static_cast<index_t>(svd.sigma.size())) {
            const double lam = svd.sigma[static_cast<std::size_t>(k)] *
                               svd.sigma[static_cast<std::size_t>(k)];
            if (lam <= floor) break;
            ++k;
        }
        out.k = k;
        out.sigma.assign(svd.sigma.begin(), svd.sigma.begin() + k);
        out.u = matmul(q, svd.u.left_cols(k));
        out.vh = Matrix<T>(k, n);
        for (index_t j = 0; j < n; ++j)
            for (index_t i = 0; i < k; ++i) out.vh(i, j) = svd.vh(i, j);
        return out;
    }

    Matrix<T> c = matmul_op(Op::none, b, Op::conj_trans, b);
    EigResult<T> eig = hermitian_eig(c);
    for (double& lam : eig.eigenvalues) lam = std::max(lam, 0.0);

    const double lam1 = eig.eigenvalues.empty() ? 0.0 : eig.eigenvalues[0];
    const double floor = static_cast<double>(k0) * unit_roundoff * lam1;
    index_t k = 0;
    while (k < k0 && eig.eigenvalues[static_cast<std::size_t>(k)] > floor) ++k;

    out.k = k;
    out.sigma.resize(static_cast<std::size_t>(k));
    for (index_t i = 0; i < k; ++i)
        out.sigma[static_cast<std::size_t>(i)] =
            std::sqrt(eig.eigenvalues[static_cast<std::size_t>(i)]);

    Matrix<T> u_head = eig.u.left_cols(k);
    out.u = matmul(q, u_head);
    // vh = Lambda^{-1/2} U^H B over the retained components
    out.vh = matmul_op(Op::conj_trans, u_head, Op::none, b);
    for (index_t i = 0; i < k; ++i) {
        const double inv = 1.0 / out.sigma[static_cast<std::size_t>(i)];
        for (index_t j = 0; j < n; ++j) out.vh(i, j) *= T(inv);
    }
    return out;
}

template <typename T>
SvdApprox<T> svd_from_basis(const Matrix<T>& a, const Matrix<T>& q, double eps,
                            bool direct_svd) {
    if (q.rows() != a.rows()) throw InvalidArgument("svd_from_basis: Q and A row counts differ");
    if (q.cols() == 0) {
        SvdApprox<T> out;
        out.eps = eps;
        out.u = Matrix<T>(a.rows(), 0);
        out.vh = Matrix<T>(0, a.cols());
        return out;
    }
    Matrix<T> b = matmul_op(Op::conj_trans, q, Op::none, a);
    return svd_from_qb(q, b, eps, direct_svd);
}

template <typename T>
SvdApprox<T> grsvd(const Matrix<T>& a, double eps, index_t block, RngStream stream,
                   const GrsvdOptions& options) {
    RangeBasis<T> basis = block_rangefinder(a, eps, block, stream, options.rangefinder);
    return svd_from_basis(a, basis.q, eps, options.direct_svd);
}

template <typename T>
Matrix<T> reconstruct(const SvdApprox<T>& f) {
    if (f.k == 0) return Matrix<T>(f.rows(), f.cols());
    Matrix<T> us = f.u;
    for (index_t j = 0; j < f.k; ++j) {
        const T s = T(f.sigma[static_cast<std::size_t>(j)]);
        for (index_t i = 0; i < us.rows(); ++i) us(i, j) *= s;
    }
    return matmul(us, f.vh);
}

void save_svd(const std::filesystem::path& prefix, const SvdApprox<double>& f) {
    const std::string base = prefix.string();
    write_matrix(base + ".u.nlrm", f.u);
    RealMatrix sigma(f.k, 1);
    for (index_t i = 0; i < f.k; ++i) sigma(i, 0) = f.sigma[static_cast<std::size_t>(i)];
    write_matrix(base + ".sigma.nlrm", sigma);
    write_matrix(base + ".vh.nlrm", f.vh);
    std::ofstream manifest(base + ".manifest", std::ios::trunc);
    if (!manifest) throw FormatError("save_svd: cannot open " + base + ".manifest");
    char eps_buf[64];
    std::snprintf(eps_buf, sizeof eps_buf, "%.17g", f.eps);
    manifest << "k = " << f.k << "\n"
             << "eps = " << eps_buf << "\n"
             << "m = " << f.rows() << "\n"
             << "n = " << f.cols() << "\n";
}

SvdApprox<double> load_svd(const std::filesystem::path& prefix) {
    const std::string base = prefix.string();
    SvdApprox<double> f;
    f.u = expect_real(read_matrix(base + ".u.nlrm"));
    RealMatrix sigma = expect_real(read_matrix(base + ".sigma.nlrm"));
    f.vh = expect_real(read_matrix(base + ".vh.nlrm"));
    f.sigma.assign(sigma.data(), sigma.data() + sigma.size());
    f.k = f.u.cols();

    std::ifstream manifest(base + ".manifest");
    if (!manifest) throw FormatError("load_svd: cannot open " + base + ".manifest");
    std::string key, eq;
    while (manifest >> key >> eq) {
        if (key == "k") {
            index_t k;
            manifest >> k;
            if (k != f.k) throw FormatError("load_svd: manifest rank disagrees with payload");
        } else if (key == "eps") {
            std::string tok;
            manifest >> tok;
            f.eps = std::stod(tok);
        } else if (key == "m") {
            index_t m;
            manifest >> m;
            if (m != f.rows()) throw FormatError("load_svd: manifest rows disagree with payload");
        } else if (key == "n") {
            index_t n;
            manifest >> n;
            if (n != f.cols()) throw FormatError("load_svd: manifest cols disagree with payload");
        } else {
            throw FormatError("load_svd: unknown manifest key '" + key + "'");
        }
    }
    if (static_cast<index_t>(f.sigma.size()) != f.k || f.vh.rows() != f.k)
        throw FormatError("load_svd: inconsistent factor shapes");
    return f;
}

template SvdApprox<double> grsvd(const Matrix<double>&, double, index_t, RngStream,
                                 const GrsvdOptions&);
template SvdApprox<cdouble> grsvd(const Matrix<cdouble>&, double, index_t, RngStream,
                                  const GrsvdOptions&);
template SvdApprox<double> svd_from_basis(const Matrix<double>&, const Matrix<double>&, double,
                                          bool);
template SvdApprox<cdouble> svd_from_basis(const Matrix<cdouble>&, const Matrix<cdouble>&,
                                           double, bool);
template SvdApprox<double> svd_from_qb(const Matrix<double>&, const Matrix<double>&, double,
                                       bool);
template SvdApprox<cdouble> svd_from_qb(const Matrix<cdouble>&, const Matrix<cdouble>&, double,
                                        bool);
template Matrix<double> reconstruct(const SvdApprox<double>&);
template Matrix<cdouble> reconstruct(const SvdApprox<cdouble>&);

}  // namespace nlr
