#include "nlr/matrix_io.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace nlr {

namespace {

constexpr std::array<char, 4> kMagic = {'N', 'L', 'R', 'M'};
constexpr std::uint8_t kVersion = 1;
constexpr std::size_t kHeaderBytes = 24;

void put_u64_le(std::ostream& out, std::uint64_t v) {
    std::array<unsigned char, 8> b;
    for (int i = 0; i < 8; ++i) b[static_cast<std::size_t>(i)] = (v >> (8 * i)) & 0xFF;
    out.write(reinterpret_cast<const char*>(b.data()), 8);
}

std::uint64_t get_u64_le(const unsigned char* b) {
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
    return v;
}

void put_f64_le(std::ostream& out, double x) {
    std::uint64_t bits;
    std::memcpy(&bits, &x, 8);
    put_u64_le(out, bits);
}

double get_f64_le(const unsigned char* b) {
    const std::uint64_t bits = get_u64_le(b);
    double x;
    std::memcpy(&x, &bits, 8);
    return x;
}

template <typename T>
void write_nlrm(const std::filesystem::path& path, const Matrix<T>& a) {
    if (!all_finite(a)) throw InvalidArgument("write_matrix: matrix has non-finite entries");
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw FormatError("write_matrix: cannot open " + path.string());
    out.write(kMagic.data(), 4);
    out.put(static_cast<char>(kVersion));
    out.put(static_cast<char>(scalar_traits<T>::kind));
    out.put(0);
    out.put(0);
    put_u64_le(out, static_cast<std::uint64_t>(a.rows()));
    put_u64_le(out, static_cast<std::uint64_t>(a.cols()));
    const T* p = a.data();
    for (index_t i = 0; i < a.size(); ++i) {
        if constexpr (std::is_same_v<T, double>) {
            put_f64_le(out, p[i]);
        } else {
            put_f64_le(out, p[i].real());
            put_f64_le(out, p[i].imag());
        }
    }
    if (!out) throw FormatError("write_matrix: write failed for " + path.string());
}

template <typename T>
Matrix<T> read_payload(std::ifstream& in, std::uint64_t rows, std::uint64_t cols,
                       const std::filesystem::path& path) {
    Matrix<T> a(static_cast<index_t>(rows), static_cast<index_t>(cols));
    constexpr std::size_t scalar_bytes = std::is_same_v<T, double> ? 8 : 16;
    std::array<unsigned char, 16> buf;
    for (index_t i = 0; i < a.size(); ++i) {
        in.read(reinterpret_cast<char*>(buf.data()), scalar_bytes);
        if (!in)
            throw FormatError("read_matrix: truncated payload in " + path.string(),
                              kHeaderBytes + static_cast<std::size_t>(i) * scalar_bytes);
        double re = get_f64_le(buf.data());
        if constexpr (std::is_same_v<T, double>) {
            if (!std::isfinite(re))
                throw FormatError("read_matrix: non-finite entry in " + path.string(),
                                  kHeaderBytes + static_cast<std::size_t>(i) * scalar_bytes);
            a.data()[i] = re;
        } else {
            double im = get_f64_le(buf.data() + 8);
            if (!std::isfinite(re) || !std::isfinite(im))
                throw FormatError("read_matrix: non-finite entry in " + path.string(),
                                  kHeaderBytes + static_cast<std::size_t>(i) * scalar_bytes);
            a.data()[i] = cdouble(re, im);
        }
    }
    return a;
}

}  // namespace

AnyMatrix read_matrix(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("read_matrix: cannot open " + path.string());
    std::array<unsigned char, kHeaderBytes> header;
    in.read(reinterpret_cast<char*>(header.data()), kHeaderBytes);
    if (!in) throw FormatError("read_matrix: truncated header in " + path.string(),
                               static_cast<std::size_t>(in.gcount()));
    if (std::memcmp(header.data(), kMagic.data(), 4) != 0)
        throw FormatError("read_matrix: bad magic in " + path.string(), 0);
    if (header[4] != kVersion)
        throw FormatError("read_matrix: unsupported version in " + path.string(), 4);
    if (header[6] != 0 || header[7] != 0)
        throw FormatError("read_matrix: nonzero reserved bytes in " + path.string(), 6);
    const std::uint64_t rows = get_u64_le(header.data() + 8);
    const std::uint64_t cols = get_u64_le(header.data() + 16);
    if (rows > (1ull << 31) || cols > (1ull << 31))
        throw FormatError("read_matrix: implausible dimensions in " + path.string(), 8);
    switch (header[5]) {
        case static_cast<std::uint8_t>(ScalarKind::real64):
            return read_payload<double>(in, rows, cols, path);
        case static_cast<std::uint8_t>(ScalarKind::complex128):
            return read_payload<cdouble>(in, rows, cols, path);
        default:
            throw FormatError("read_matrix: unknown scalar kind in " + path.string(), 5);
    }
}

void write_matrix(const std::filesystem::path& path, const RealMatrix& a) {
    write_nlrm(path, a);
}

void write_matrix(const std::filesystem::path& path, const ComplexMatrix& a) {
    write_nlrm(path, a);
}

void write_matrix(const std::filesystem::path& path, const AnyMatrix& a) {
    std::visit([&](const auto& m) { write_nlrm(path, m); }, a);
}

RealMatrix expect_real(AnyMatrix a) {
    if (auto* m = std::get_if<RealMatrix>(&a)) return std::move(*m);
    throw InvalidArgument("expected a real64 matrix");
}

RealMatrix read_matrix_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("read_matrix_csv: cannot open " + path.string());
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t offset = 0;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::size_t line_start = offset;
        offset += line.size() + 1;
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            try {
                std::size_t used = 0;
                double v = std::stod(cell, &used);
                while (used < cell.size() && std::isspace(static_cast<unsigned char>(cell[used])))
                    ++used;
                if (used != cell.size()) throw std::invalid_argument(cell);
                if (!std::isfinite(v)) throw std::invalid_argument(cell);
                row.push_back(v);
            } catch (const std::exception&) {
                throw FormatError("read_matrix_csv: bad cell '" + cell + "' on line " +
                                      std::to_string(line_no) + " of " + path.string(),
                                  line_start);
            }
        }
        if (!rows.empty() && row.size() != rows.front().size())
            throw FormatError("read_matrix_csv: ragged row on line " + std::to_string(line_no) +
                                  " of " + path.string(),
                              line_start);
        rows.push_back(std::move(row));
    }
    if (rows.empty()) return RealMatrix(0, 0);
    RealMatrix a(static_cast<index_t>(rows.size()), static_cast<index_t>(rows.front().size()));
    for (index_t i = 0; i < a.rows(); ++i)
        for (index_t j = 0; j < a.cols(); ++j)
            a(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    return a;
}

void write_matrix_csv(const std::filesystem::path& path, const RealMatrix& a) {
    if (!all_finite(a)) throw InvalidArgument("write_matrix_csv: non-finite entries");
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw FormatError("write_matrix_csv: cannot open " + path.string());
    char buf[64];
    for (index_t i = 0; i < a.rows(); ++i) {
        for (index_t j = 0; j < a.cols(); ++j) {
            std::snprintf(buf, sizeof buf, "%.17g", a(i, j));
            if (j) out << ',';
            out << buf;
        }
        out << '\n';
    }
    if (!out) throw FormatError("write_matrix_csv: write failed for " + path.string());
}

}  // namespace nlr
