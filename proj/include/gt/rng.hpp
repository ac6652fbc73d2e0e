#ifndef GT_RNG_HPP
#define GT_RNG_HPP

#include <cstdint>
#include <random>
#include <vector>

namespace gt {

// All randomness in the library flows through std::mt19937_64, whose output
// sequence is pinned by the C++ standard, plus the two helpers below.
// uniform_int_distribution is never used: its mapping is
// implementation-defined and would break cross-platform reproducibility.

// SplitMix64 step; used to derive independent sub-seeds from a base seed.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t salt) {
  std::uint64_t s = base ^ (0x9e3779b97f4a7c15ull * (salt + 1));
  return splitmix64(s);
}

// Unbiased draw from [0, bound) by rejection; bound >= 1.
inline std::uint64_t bounded_u64(std::mt19937_64& gen, std::uint64_t bound) {
  std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    std::uint64_t r = gen();
    if (r >= threshold) return r % bound;
  }
}

// k distinct values from {1, ..., n}, ascending; partial Fisher-Yates.
std::vector<int> random_ksubset(std::mt19937_64& gen, int n, int k);

}  // namespace gt

#endif
