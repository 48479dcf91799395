#pragma once

#include <cstdint>

namespace nlr::flops {

/// Thread-local tally of matrix-multiply volume (m*k*n per GEMM). Used by the
/// bench harness as a hardware-independent cost proxy; factorizations are not
/// counted, only multiplies.
std::uint64_t current() noexcept;
void add(std::uint64_t volume) noexcept;
void reset() noexcept;

/// Snapshot helper: volume accumulated since construction.
class Scope {
public:
    Scope() : start_(current()) {}
    std::uint64_t elapsed() const noexcept { return current() - start_; }

private:
    std::uint64_t start_;
};

}  // namespace nlr::flops
