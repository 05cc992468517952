#include "riskpool/set_partitions.hpp"

#include <algorithm>
#include <string>

#include "riskpool/numeric.hpp"

namespace riskpool {

std::uint64_t bell_number(std::size_t n) {
  if (n > kMaxPartitionedSetSize) throw Error("Bell number table stops at n = 8");
  return kBellNumbers[n];
}

std::vector<std::vector<std::uint8_t>> restricted_growth_strings(std::size_t n) {
  if (n > kMaxPartitionedSetSize) {
    throw Error("set partition enumeration is limited to " + std::to_string(kMaxPartitionedSetSize) +
                " elements, got " + std::to_string(n));
  }
  std::vector<std::vector<std::uint8_t>> out;
  out.reserve(bell_number(n));
  if (n == 0) {
    out.emplace_back();
    return out;
  }
  std::vector<std::uint8_t> a(n, 0);
  // prefix_max[i] = max(a[0..i-1])
  std::vector<std::uint8_t> prefix_max(n, 0);
  while (true) {
    out.push_back(a);
    // Rightmost position that can still be incremented.
    std::size_t i = n - 1;
    while (i > 0 && a[i] > prefix_max[i]) --i;
    if (i == 0) break;
    ++a[i];
    for (std::size_t j = i + 1; j < n; ++j) {
      a[j] = 0;
      prefix_max[j] = std::max(prefix_max[j - 1], a[j - 1]);
    }
  }
  return out;
}

}  // namespace riskpool
