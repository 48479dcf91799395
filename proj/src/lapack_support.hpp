#pragma once

// Private LAPACK/CBLAS bindings. Keep this header out of the public include
// tree; translation units that talk to LAPACK include it first.

#include <complex>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include <cblas.h>

#include <limits>

#include "nlr/errors.hpp"
#include "nlr/matrix.hpp"

namespace nlr::detail {

inline lapack_int to_lapack(index_t n, const char* context) {
    if (n < 0 || n > std::numeric_limits<lapack_int>::max())
        throw InvalidArgument(std::string(context) + ": dimension out of range for LAPACK");
    return static_cast<lapack_int>(n);
}

}  // namespace nlr::detail
