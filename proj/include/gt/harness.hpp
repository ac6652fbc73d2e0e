#ifndef GT_HARNESS_HPP
#define GT_HARNESS_HPP

#include <iosfwd>
#include <optional>

#include "gt/bernoulli.hpp"
#include "gt/condenser.hpp"
#include "gt/core.hpp"
#include "gt/expander.hpp"
#include "gt/ladder.hpp"

namespace gt {

Method parse_method(const std::string& name);

struct RunRecord {
  int n = 0;
  int d = 0;
  int upper_d = 0;
  Rat delta;
  Method method = Method::adaptive;
  std::uint64_t tests = 0;
  Rat estimate;
  bool within_factor = false;
  Rat bound_ref;
  std::uint64_t seed = 0;
  bool bottom_gap = false;

  std::string csv_row() const;
};

// d/delta <= estimate <= d*delta, with d = 0 <=> estimate = 0.
bool within_factor(int d, const Rat& estimate, const Rat& delta);

extern const char* kCsvHeader;  // n,d,D,delta,method,tests,estimate,ok,bound_ref,seed

struct RunOptions {
  bool zero_check_when_trivial = false;
  std::uint64_t design_seed = 1;
  BuildOptions bernoulli;
  ExpanderSearchOptions expander;
  CondenserSearchOptions condenser;
  ScanLimits limits;
};

std::unique_ptr<TesterFactory> make_factory(Method method, int n,
                                            const Rat& delta,
                                            const RunOptions& options);

// Runs one estimation against a fresh simulated oracle and fills the record.
RunRecord run_estimate(Method method, int n, const DefectiveSet& hidden,
                       int upper_d, const Rat& delta,
                       const RunOptions& options = {});

// Ladder entry point shared by every non-adaptive method; applies the
// D < delta^2 short-circuit before planning.
EstimateReport estimate_with_ladder(TestOracle& oracle,
                                    const EstimationProblem& problem,
                                    TesterFactory& factory,
                                    const RunOptions& options = {});

// Reconstructs a threshold tester from a stored design (bernoulli,
// expander or condenser kinds).
std::unique_ptr<ThresholdTester> tester_from_design(PoolingDesign design);

// GTPLAN reader matching write_plan.
LadderPlan read_plan(std::istream& in);

// One-level plan around a stored design, plus the global pool.
LadderPlan plan_from_single_design(PoolingDesign design);

struct SweepGrid {
  std::vector<Method> methods;
  std::vector<int> n_values;
  std::vector<int> upper_d_values;
  std::vector<Rat> delta_values;
  std::vector<int> d_values;
  std::uint64_t set_seed = 1;
};

// Rows in method-major grid order; combinations with d > D or D > n are
// skipped. Defective sets are seeded per run, so reruns are byte-identical.
void run_sweep(std::ostream& out, const SweepGrid& grid,
               const RunOptions& options = {});

}  // namespace gt

#endif
