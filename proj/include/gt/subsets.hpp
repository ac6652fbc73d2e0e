#ifndef GT_SUBSETS_HPP
#define GT_SUBSETS_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace gt {

// C(n, k) capped at `cap` so enumeration-budget decisions never overflow.
std::uint64_t binomial_capped(int n, int k, std::uint64_t cap);

// rank-th k-subset of {0..n-1} in lexicographic order of index vectors.
std::vector<int> unrank_ksubset(int n, int k, std::uint64_t rank);

// Advances `sel` to the next k-subset in lexicographic order; false at end.
bool next_ksubset(std::vector<int>& sel, int n);

struct ScanLimits {
  std::uint64_t max_enumeration = 0;  // 0 = use default_enum_budget()
  int threads = 0;                    // 0 = auto
  std::uint64_t sample_count = 200000;
  std::uint64_t sample_seed = 1;
};

// Enumeration budget: GT_ENUM_BUDGET env override, default 10^7 subsets.
std::uint64_t default_enum_budget();
std::uint64_t resolve_enum_budget(const ScanLimits& limits);
int resolve_threads(const ScanLimits& limits, std::uint64_t work_items);

// Applies `check` to every k-subset of {0..n-1} (as sorted index vectors),
// sharded across threads. Returns the lexicographically first subset for
// which `check` returned false, if any. Results do not depend on the
// thread count.
struct ScanOutcome {
  bool all_passed = true;
  std::uint64_t checked = 0;
  std::optional<std::vector<int>> first_failure;
};

ScanOutcome scan_ksubsets(int n, int k,
                          const std::function<bool(const std::vector<int>&)>& check,
                          int threads);

// Same contract but over `count` seeded random k-subsets (with repetition
// possible); used when exhaustive enumeration exceeds the budget.
ScanOutcome scan_ksubsets_sampled(int n, int k, std::uint64_t count,
                                  std::uint64_t seed,
                                  const std::function<bool(const std::vector<int>&)>& check);

}  // namespace gt

#endif
