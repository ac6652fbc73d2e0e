#include "gt/rng.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace gt {

std::vector<int> random_ksubset(std::mt19937_64& gen, int n, int k) {
  if (k < 0 || k > n) throw std::invalid_argument("random_ksubset: bad k");
  std::vector<int> items(static_cast<std::size_t>(n));
  std::iota(items.begin(), items.end(), 1);
  for (int i = 0; i < k; ++i) {
    std::uint64_t j =
        static_cast<std::uint64_t>(i) +
        bounded_u64(gen, static_cast<std::uint64_t>(n - i));
    std::swap(items[static_cast<std::size_t>(i)],
              items[static_cast<std::size_t>(j)]);
  }
  items.resize(static_cast<std::size_t>(k));
  std::sort(items.begin(), items.end());
  return items;
}

}  // namespace gt
