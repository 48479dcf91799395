#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nlr {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A caller violated an operation precondition (bad dimensions, bad range, ...).
class InvalidArgument : public Error {
public:
    explicit InvalidArgument(const std::string& what) : Error(what) {}
};

/// An on-disk payload could not be parsed. Carries the byte offset at which
/// parsing stopped (line number for text formats).
class FormatError : public Error {
public:
    FormatError(const std::string& what, std::size_t byte_offset)
        : Error(what + " (at byte " + std::to_string(byte_offset) + ")"),
          byte_offset_(byte_offset) {}
    explicit FormatError(const std::string& what) : Error(what), byte_offset_(0) {}

    std::size_t byte_offset() const noexcept { return byte_offset_; }

private:
    std::size_t byte_offset_;
};

/// A numerical procedure failed (maps to CLI exit code 4).
class NumericError : public Error {
public:
    explicit NumericError(const std::string& what) : Error(what) {}
};

/// Cholesky (or another factorization) hit a non-positive-definite pivot.
class DecompositionFailure : public NumericError {
public:
    explicit DecompositionFailure(const std::string& what) : NumericError(what) {}
};

/// A triangular solve met a zero diagonal entry.
class SingularTriangular : public NumericError {
public:
    explicit SingularTriangular(const std::string& what) : NumericError(what) {}
};

/// A metric is undefined on the given input (e.g. zero-variance image).
class UndefinedMetric : public NumericError {
public:
    explicit UndefinedMetric(const std::string& what) : NumericError(what) {}
};

/// An estimator is undefined on the given input (e.g. zero pilot coefficients).
class UndefinedEstimator : public NumericError {
public:
    explicit UndefinedEstimator(const std::string& what) : NumericError(what) {}
};

}  // namespace nlr
