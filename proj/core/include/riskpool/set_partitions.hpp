#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace riskpool {

inline constexpr std::size_t kMaxPartitionedSetSize = 8;

/// Bell numbers B(0..8).
inline constexpr std::uint64_t kBellNumbers[] = {1, 1, 2, 5, 15, 52, 203, 877, 4140};

std::uint64_t bell_number(std::size_t n);

/// Restricted growth strings of length n (a[0] = 0, a[i] <= 1 + max(a[0..i-1])),
/// one per set partition of {0..n-1}, in lexicographic order. n <= 8.
std::vector<std::vector<std::uint8_t>> restricted_growth_strings(std::size_t n);

}  // namespace riskpool
