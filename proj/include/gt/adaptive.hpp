#ifndef GT_ADAPTIVE_HPP
#define GT_ADAPTIVE_HPP

#include "gt/core.hpp"

namespace gt {

// Halves a pool by ascending item index: the first floor(|pool|/2) items
// and the remainder. A singleton passes through unchanged. Throws
// std::logic_error on an empty pool.
std::vector<Pool> split(const Pool& pool);

struct AdaptiveOptions {
  // When D < delta^2 the estimator returns D/delta with no tests. Setting
  // this spends one global pool test first so that d = 0 still maps to 0.
  bool zero_check_when_trivial = false;
};

// Pools tested in one round, their answers, and singletons carried forward
// without re-testing. Captured only when a trace sink is supplied.
struct AdaptiveRound {
  std::vector<Pool> tested;
  std::vector<std::uint8_t> answers;
  std::vector<Pool> carried;
};

struct AdaptiveTrace {
  std::vector<AdaptiveRound> rounds;
};

// Adaptive halving estimator. Keeps a frontier of disjoint pools known to
// contain defectives, splits and tests while the frontier is no larger
// than D/delta^2 (exact rational guard), and outputs either the exact
// count (all-singleton frontier) or |frontier| * delta.
EstimateReport estimate_adaptive(TestOracle& oracle,
                                 const EstimationProblem& problem,
                                 const AdaptiveOptions& options = {},
                                 AdaptiveTrace* trace = nullptr);

}  // namespace gt

#endif
