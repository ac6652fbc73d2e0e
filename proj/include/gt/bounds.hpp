#ifndef GT_BOUNDS_HPP
#define GT_BOUNDS_HPP

#include <functional>

#include "gt/ratio.hpp"

namespace gt::bounds {

// All bound expressions are reported normalized: unit leading constants,
// base-2 logarithms. log2 terms are evaluated as certified rational lower
// bounds with granularity 1/kLog2Grid, exact whenever the argument is a
// power of two, so "value <= budget" assertions computed from these are
// never optimistic.
inline constexpr unsigned kLog2Grid = 4096;

// floor(log2(x^K))/K for K = kLog2Grid; requires x > 0.
Rat log2_lower(const Rat& x);

// (D/delta^2) * log2(n/D); requires D <= n.
Rat lower_bound_value(int n, int upper_d, const Rat& delta);

// 2*(D/delta^2)*(log2 n - log2(D/delta^2)) + 2*(D/delta^2);
// requires D >= delta^2.
Rat adaptive_budget(int n, int upper_d, const Rat& delta);

// Test budget of the full run in (2) above plus the documented +2
// rounding slack.
Rat adaptive_budget_with_slack(int n, int upper_d, const Rat& delta);

struct LadderBudget {
  Rat planned_sum;  // sum of the per-level formula over executed levels
  Rat majorant;     // (c*D/delta^2) * [r*log2(n/D) + r^2*log2(delta)], r = delta/(delta-1)
};

LadderBudget ladder_budget(int n, int upper_d, const Rat& delta,
                           const std::function<Rat(const Rat& ell)>& tester_t_formula,
                           const Rat& c_family, const Rat& min_ell);

}  // namespace gt::bounds

#endif
