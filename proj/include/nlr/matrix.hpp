#pragma once

#include <complex>
#include <cstdint>
#include <type_traits>
#include <vector>

#include "nlr/errors.hpp"

namespace nlr {

using index_t = std::int64_t;
using cdouble = std::complex<double>;

enum class ScalarKind : std::uint8_t { real64 = 0, complex128 = 1 };

/// Unit round-off of the working precision (half the machine epsilon).
inline constexpr double unit_roundoff = 1.1102230246251565e-16;

template <typename T>
struct scalar_traits;

template <>
struct scalar_traits<double> {
    static constexpr ScalarKind kind = ScalarKind::real64;
    static double conj(double x) { return x; }
    static double abs_sq(double x) { return x * x; }
};

template <>
struct scalar_traits<cdouble> {
    static constexpr ScalarKind kind = ScalarKind::complex128;
    static cdouble conj(cdouble x) { return std::conj(x); }
    static double abs_sq(cdouble x) { return std::norm(x); }
};

/// Dense column-major matrix over real64 or complex128 scalars.
///
/// Storage is contiguous with leading dimension equal to rows(); entry (i, j)
/// lives at data()[i + j * rows()]. Matrices are value types: operations
/// return fresh matrices and never mutate their inputs.
template <typename T>
class Matrix {
    static_assert(std::is_same_v<T, double> || std::is_same_v<T, cdouble>,
                  "Matrix supports real64 and complex128 scalars");

public:
    using value_type = T;

    Matrix() = default;

    /// Zero-initialized rows x cols matrix. Either dimension may be zero.
    Matrix(index_t rows, index_t cols) : rows_(rows), cols_(cols) {
        if (rows < 0 || cols < 0)
            throw InvalidArgument("Matrix: negative dimension");
        data_.assign(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), T{});
    }

    Matrix(index_t rows, index_t cols, std::vector<T> data)
        : rows_(rows), cols_(cols), data_(std::move(data)) {
        if (rows < 0 || cols < 0)
            throw InvalidArgument("Matrix: negative dimension");
        if (data_.size() != static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols))
            throw InvalidArgument("Matrix: data length does not match rows*cols");
    }

    static Matrix identity(index_t n) {
        Matrix m(n, n);
        for (index_t i = 0; i < n; ++i) m(i, i) = T{1};
        return m;
    }

    index_t rows() const noexcept { return rows_; }
    index_t cols() const noexcept { return cols_; }
    index_t size() const noexcept { return rows_ * cols_; }
    bool empty() const noexcept { return size() == 0; }

    T& operator()(index_t i, index_t j) noexcept { return data_[i + j * rows_]; }
    const T& operator()(index_t i, index_t j) const noexcept { return data_[i + j * rows_]; }

    T* data() noexcept { return data_.data(); }
    const T* data() const noexcept { return data_.data(); }

    T* col(index_t j) noexcept { return data_.data() + j * rows_; }
    const T* col(index_t j) const noexcept { return data_.data() + j * rows_; }

    /// Copy of the leading k columns.
    Matrix left_cols(index_t k) const {
        Matrix out(rows_, k);
        std::copy(data_.data(), data_.data() + rows_ * k, out.data());
        return out;
    }

    ScalarKind kind() const noexcept { return scalar_traits<T>::kind; }

private:
    index_t rows_ = 0;
    index_t cols_ = 0;
    std::vector<T> data_;
};

using RealMatrix = Matrix<double>;
using ComplexMatrix = Matrix<cdouble>;

/// (A^H)_{ij} = conj(A_{ji}); plain transpose for real matrices.
template <typename T>
Matrix<T> hermitian_transpose(const Matrix<T>& a);

/// sqrt(sum |a_ij|^2); zero for an empty matrix.
template <typename T>
double frobenius_norm(const Matrix<T>& a);

template <typename T>
Matrix<T> add(const Matrix<T>& a, const Matrix<T>& b);

template <typename T>
Matrix<T> subtract(const Matrix<T>& a, const Matrix<T>& b);

template <typename T>
Matrix<T> scale(const Matrix<T>& a, T factor);

ComplexMatrix to_complex(const RealMatrix& a);

/// True when every entry is finite (no NaN/Inf).
template <typename T>
bool all_finite(const Matrix<T>& a);

}  // namespace nlr
