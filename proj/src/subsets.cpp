#include "gt/subsets.hpp"

#include <algorithm>
#include <cstdlib>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>

#include "gt/rng.hpp"

namespace gt {

std::uint64_t binomial_capped(int n, int k, std::uint64_t cap) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  // Exact running product; saturates at cap to dodge overflow.
  std::uint64_t result = 1;
  for (int i = 1; i <= k; ++i) {
    std::uint64_t num = static_cast<std::uint64_t>(n - k + i);
    if (result > cap / num + 1) {
      // Conservative: even before dividing we are past cap * i.
      result = cap + 1;
    } else {
      result = result * num / static_cast<std::uint64_t>(i);
    }
    if (result > cap) return cap + 1;
  }
  return result;
}

std::vector<int> unrank_ksubset(int n, int k, std::uint64_t rank) {
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(k));
  int next = 0;
  for (int remaining = k; remaining > 0; --remaining) {
    for (int candidate = next;; ++candidate) {
      if (n - candidate - 1 < remaining - 1) {
        throw std::out_of_range("subset rank out of range");
      }
      std::uint64_t block =
          binomial_capped(n - candidate - 1, remaining - 1, UINT64_MAX - 1);
      if (rank < block) {
        out.push_back(candidate);
        next = candidate + 1;
        break;
      }
      rank -= block;
    }
  }
  return out;
}

bool next_ksubset(std::vector<int>& sel, int n) {
  int k = static_cast<int>(sel.size());
  if (k == 0) return false;
  int i = k - 1;
  while (i >= 0 && sel[static_cast<std::size_t>(i)] == n - k + i) --i;
  if (i < 0) return false;
  ++sel[static_cast<std::size_t>(i)];
  for (int j = i + 1; j < k; ++j) {
    sel[static_cast<std::size_t>(j)] = sel[static_cast<std::size_t>(j - 1)] + 1;
  }
  return true;
}

std::uint64_t default_enum_budget() {
  if (const char* env = std::getenv("GT_ENUM_BUDGET")) {
    char* end = nullptr;
    unsigned long long parsed = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && parsed > 0) return parsed;
  }
  return 10'000'000ull;
}

std::uint64_t resolve_enum_budget(const ScanLimits& limits) {
  return limits.max_enumeration ? limits.max_enumeration
                                : default_enum_budget();
}

int resolve_threads(const ScanLimits& limits, std::uint64_t work_items) {
  if (limits.threads > 0) return limits.threads;
  unsigned hw = std::thread::hardware_concurrency();
  int cap = static_cast<int>(std::max(1u, std::min(hw, 8u)));
  if (work_items < 65536) return 1;
  return cap;
}

ScanOutcome scan_ksubsets(
    int n, int k, const std::function<bool(const std::vector<int>&)>& check,
    int threads) {
  ScanOutcome outcome;
  if (k < 0 || k > n) return outcome;  // no subsets, vacuous pass
  std::uint64_t total = binomial_capped(n, k, UINT64_MAX - 1);
  if (total == 0) return outcome;
  outcome.checked = total;
  if (k == 0) {
    std::vector<int> empty;
    if (!check(empty)) {
      outcome.all_passed = false;
      outcome.first_failure = empty;
    }
    return outcome;
  }

  threads = std::max(1, std::min<int>(threads, static_cast<int>(
                                                   std::min<std::uint64_t>(
                                                       total, 64))));
  std::vector<std::uint64_t> fail_rank(static_cast<std::size_t>(threads),
                                       UINT64_MAX);
  std::vector<std::thread> workers;
  std::uint64_t chunk = (total + static_cast<std::uint64_t>(threads) - 1) /
                        static_cast<std::uint64_t>(threads);

  auto run_shard = [&](int shard) {
    std::uint64_t begin = chunk * static_cast<std::uint64_t>(shard);
    std::uint64_t end = std::min(total, begin + chunk);
    if (begin >= end) return;
    std::vector<int> sel = unrank_ksubset(n, k, begin);
    for (std::uint64_t rank = begin; rank < end; ++rank) {
      if (!check(sel)) {
        fail_rank[static_cast<std::size_t>(shard)] = rank;
        return;
      }
      if (rank + 1 < end && !next_ksubset(sel, n)) break;
    }
  };

  if (threads == 1) {
    run_shard(0);
  } else {
    workers.reserve(static_cast<std::size_t>(threads));
    for (int s = 0; s < threads; ++s) workers.emplace_back(run_shard, s);
    for (auto& w : workers) w.join();
  }

  std::uint64_t best = UINT64_MAX;
  for (std::uint64_t r : fail_rank) best = std::min(best, r);
  if (best != UINT64_MAX) {
    outcome.all_passed = false;
    outcome.first_failure = unrank_ksubset(n, k, best);
  }
  return outcome;
}

ScanOutcome scan_ksubsets_sampled(
    int n, int k, std::uint64_t count, std::uint64_t seed,
    const std::function<bool(const std::vector<int>&)>& check) {
  ScanOutcome outcome;
  if (k < 0 || k > n) return outcome;
  std::mt19937_64 gen(seed);
  for (std::uint64_t i = 0; i < count; ++i) {
    std::vector<int> items = random_ksubset(gen, n, k);
    for (int& v : items) --v;  // helpers speak 0-based here
    ++outcome.checked;
    if (!check(items)) {
      outcome.all_passed = false;
      outcome.first_failure = items;
      return outcome;
    }
  }
  return outcome;
}

}  // namespace gt
