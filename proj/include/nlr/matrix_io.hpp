#pragma once

#include <filesystem>
#include <variant>

#include "nlr/matrix.hpp"

namespace nlr {

using AnyMatrix = std::variant<RealMatrix, ComplexMatrix>;

/// Binary matrix format ".nlrm":
///   bytes 0-3   magic "NLRM"
///   byte  4     version, currently 1
///   byte  5     scalar kind (0 = real64, 1 = complex128)
///   bytes 6-7   reserved, zero
///   bytes 8-15  rows, unsigned 64-bit little-endian
///   bytes 16-23 cols, unsigned 64-bit little-endian
///   then rows*cols IEEE-754 doubles, column-major, little-endian
///   (complex entries as re,im pairs).
AnyMatrix read_matrix(const std::filesystem::path& path);
void write_matrix(const std::filesystem::path& path, const RealMatrix& a);
void write_matrix(const std::filesystem::path& path, const ComplexMatrix& a);
void write_matrix(const std::filesystem::path& path, const AnyMatrix& a);

/// The real64 payload of an AnyMatrix; throws InvalidArgument on complex input.
RealMatrix expect_real(AnyMatrix a);

/// CSV import/export for real matrices: comma-separated, one row per line,
/// at least 17 significant digits on export.
RealMatrix read_matrix_csv(const std::filesystem::path& path);
void write_matrix_csv(const std::filesystem::path& path, const RealMatrix& a);

}  // namespace nlr
