#include "nlr/matrix.hpp"

#include <cmath>

namespace nlr {

template <typename T>
Matrix<T> hermitian_transpose(const Matrix<T>& a) {
    Matrix<T> out(a.cols(), a.rows());
    for (index_t j = 0; j < a.cols(); ++j)
        for (index_t i = 0; i < a.rows(); ++i)
            out(j, i) = scalar_traits<T>::conj(a(i, j));
    return out;
}

template <typename T>
double frobenius_norm(const Matrix<T>& a) {
    double acc = 0.0;
    const T* p = a.data();
    const index_t n = a.size();
    for (index_t i = 0; i < n; ++i) acc += scalar_traits<T>::abs_sq(p[i]);
    return std::sqrt(acc);
}

template <typename T>
static void check_same_shape(const Matrix<T>& a, const Matrix<T>& b, const char* op) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw InvalidArgument(std::string(op) + ": shape mismatch");
}

template <typename T>
Matrix<T> add(const Matrix<T>& a, const Matrix<T>& b) {
    check_same_shape(a, b, "add");
    Matrix<T> out(a.rows(), a.cols());
    for (index_t i = 0; i < a.size(); ++i) out.data()[i] = a.data()[i] + b.data()[i];
    return out;
}

template <typename T>
Matrix<T> subtract(const Matrix<T>& a, const Matrix<T>& b) {
    check_same_shape(a, b, "subtract");
    Matrix<T> out(a.rows(), a.cols());
    for (index_t i = 0; i < a.size(); ++i) out.data()[i] = a.data()[i] - b.data()[i];
    return out;
}

template <typename T>
Matrix<T> scale(const Matrix<T>& a, T factor) {
    Matrix<T> out(a.rows(), a.cols());
    for (index_t i = 0; i < a.size(); ++i) out.data()[i] = a.data()[i] * factor;
    return out;
}

ComplexMatrix to_complex(const RealMatrix& a) {
    ComplexMatrix out(a.rows(), a.cols());
    for (index_t i = 0; i < a.size(); ++i) out.data()[i] = cdouble(a.data()[i], 0.0);
    return out;
}

template <typename T>
bool all_finite(const Matrix<T>& a) {
    const T* p = a.data();
    for (index_t i = 0; i < a.size(); ++i) {
        if constexpr (std::is_same_v<T, double>) {
            if (!std::isfinite(p[i])) return false;
        } else {
            if (!std::isfinite(p[i].real()) || !std::isfinite(p[i].imag())) return false;
        }
    }
    return true;
}

template Matrix<double> hermitian_transpose(const Matrix<double>&);
template Matrix<cdouble> hermitian_transpose(const Matrix<cdouble>&);
template double frobenius_norm(const Matrix<double>&);
template double frobenius_norm(const Matrix<cdouble>&);
template Matrix<double> add(const Matrix<double>&, const Matrix<double>&);
template Matrix<cdouble> add(const Matrix<cdouble>&, const Matrix<cdouble>&);
template Matrix<double> subtract(const Matrix<double>&, const Matrix<double>&);
template Matrix<cdouble> subtract(const Matrix<cdouble>&, const Matrix<cdouble>&);
template Matrix<double> scale(const Matrix<double>&, double);
template Matrix<cdouble> scale(const Matrix<cdouble>&, cdouble);
template bool all_finite(const Matrix<double>&);
template bool all_finite(const Matrix<cdouble>&);

}  // namespace nlr
