#include "nlr/flops.hpp"

namespace nlr::flops {

namespace {
thread_local std::uint64_t counter = 0;
}

std::uint64_t current() noexcept { return counter; }
void add(std::uint64_t volume) noexcept { counter += volume; }
void reset() noexcept { counter = 0; }

}  // namespace nlr::flops
