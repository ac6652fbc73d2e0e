#ifndef GT_LADDER_HPP
#define GT_LADDER_HPP

#include <iosfwd>
#include <memory>

#include "gt/core.hpp"

namespace gt {

// Non-adaptive threshold tester contract: given the answers to its design,
// run() must return 0 whenever d < ell/delta^2 and 1 whenever
// d >= ell/delta. Behaviour in between is unconstrained.
class ThresholdTester {
 public:
  virtual ~ThresholdTester() = default;
  virtual const PoolingDesign& design() const = 0;
  virtual int run(const std::vector<std::uint8_t>& answers) const = 0;
  virtual Rat ell() const = 0;
  virtual Rat delta() const = 0;
  int tests() const { return design().t(); }
};

class TesterFactory {
 public:
  virtual ~TesterFactory() = default;
  // Smallest ell this family accepts; the planner truncates levels below it.
  virtual Rat min_ell() const = 0;
  virtual std::unique_ptr<ThresholdTester> make(const Rat& ell) = 0;
  virtual Method method() const = 0;
};

// Single policy for runs where the global pool fires but no level does:
// estimate the geometric midpoint of the residual range [1, ell_last/delta).
// The report is flagged bottom_gap when that range is wider than delta^2,
// i.e. when the factor guarantee cannot be promised.
enum class BottomRungPolicy { geometric_midpoint };

std::string policy_name(BottomRungPolicy policy);

struct LadderLevel {
  int index = 0;  // i in ell = D/delta^i
  Rat ell;
  std::unique_ptr<ThresholdTester> tester;
};

struct LadderPlan {
  int n = 0;
  int upper_d = 0;
  Rat delta;
  Method method = Method::bernoulli_ladder;
  std::vector<LadderLevel> levels;
  Pool global_pool;
  BottomRungPolicy policy = BottomRungPolicy::geometric_midpoint;

  std::uint64_t planned_tests() const;  // sum of level tests + 1 global pool
};

// Levels at ell = D/delta^i for i = 0..ceil(log D/log delta), truncated at
// the factory's min_ell, plus the global all-items pool. Requires
// D >= delta^2; smaller D short-circuits at the estimator entry points.
LadderPlan plan(const EstimationProblem& problem, TesterFactory& factory);

struct LadderRun {
  EstimateReport report;
  int fired_level = -1;  // index into plan.levels, -1 when none fired
  std::vector<int> verdicts;
  std::uint8_t global_answer = 0;
};

// Answers every level design and the global pool first, then folds the
// verdicts; no answer influences which tests are asked.
LadderRun estimate_ladder(TestOracle& oracle, const LadderPlan& plan);

// GTPLAN v1: manifest line, then each level's GTDESIGN block in order.
void write_plan(std::ostream& out, const LadderPlan& plan);

}  // namespace gt

#endif
