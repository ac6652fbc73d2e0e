#include "gt/ladder.hpp"

#include "gt/bounds.hpp"
#include "gt/design_io.hpp"

namespace gt {

std::string policy_name(BottomRungPolicy policy) {
  switch (policy) {
    case BottomRungPolicy::geometric_midpoint: return "geometric-midpoint";
  }
  throw std::logic_error("unknown policy");
}

std::uint64_t LadderPlan::planned_tests() const {
  std::uint64_t total = 1;  // global pool
  for (const LadderLevel& level : levels) {
    total += static_cast<std::uint64_t>(level.tester->tests());
  }
  return total;
}

LadderPlan plan(const EstimationProblem& problem, TesterFactory& factory) {
  if (rat_of(problem.upper_d) < problem.delta_sq()) {
    throw std::invalid_argument("plan() needs D >= delta^2");
  }
  LadderPlan out;
  out.n = problem.n;
  out.upper_d = problem.upper_d;
  out.delta = problem.delta;
  out.method = factory.method();
  out.global_pool = Pool::all(problem.n);

  // q = ceil(log D / log delta) = least q with delta^q >= D.
  int q = 0;
  for (Rat power = 1; power < rat_of(problem.upper_d); power *= problem.delta) {
    ++q;
  }

  Rat min_ell = factory.min_ell();
  Rat ell = rat_of(problem.upper_d);
  for (int i = 0; i <= q && ell >= min_ell; ++i, ell /= problem.delta) {
    LadderLevel level;
    level.index = i;
    level.ell = ell;
    level.tester = factory.make(ell);
    if (level.tester->design().n != problem.n) {
      throw dimension_error("tester design width mismatch");
    }
    out.levels.push_back(std::move(level));
  }
  return out;
}

LadderRun estimate_ladder(TestOracle& oracle, const LadderPlan& plan) {
  if (oracle.n() != plan.n) {
    throw dimension_error("oracle universe does not match plan");
  }
  LadderRun run;
  const std::uint64_t ledger_before = oracle.queries_made();

  // Batch phase: gather every answer before computing any verdict.
  std::vector<std::vector<std::uint8_t>> level_answers;
  level_answers.reserve(plan.levels.size());
  for (const LadderLevel& level : plan.levels) {
    level_answers.push_back(oracle.answer_design(level.tester->design()));
  }
  run.global_answer =
      static_cast<std::uint8_t>(oracle.answer_pool(plan.global_pool));

  run.verdicts.reserve(plan.levels.size());
  for (std::size_t i = 0; i < plan.levels.size(); ++i) {
    run.verdicts.push_back(plan.levels[i].tester->run(level_answers[i]));
    if (run.fired_level < 0 && run.verdicts.back() == 1) {
      run.fired_level = static_cast<int>(i);
    }
  }

  EstimateReport& report = run.report;
  report.method = plan.method;
  report.bound_reference =
      bounds::lower_bound_value(plan.n, plan.upper_d, plan.delta);

  if (run.fired_level >= 0) {
    // d_hat = D / delta^(r+1) = ell_r / delta.
    report.estimate =
        plan.levels[static_cast<std::size_t>(run.fired_level)].ell /
        plan.delta;
  } else if (run.global_answer == 0) {
    report.estimate = 0;
  } else {
    // Residual range [1, L): L = ell_last/delta below the deepest level,
    // or the whole [1, D] when no level could be planned.
    Rat residual_top = plan.levels.empty()
                           ? rat_of(plan.upper_d)
                           : plan.levels.back().ell / plan.delta;
    report.estimate = sqrt_rat_lower(residual_top);
    report.bottom_gap = residual_top > plan.delta * plan.delta;
  }

  report.tests_used = oracle.queries_made() - ledger_before;
  return run;
}

void write_plan(std::ostream& out, const LadderPlan& plan) {
  out << "GTPLAN v1 D=" << plan.upper_d
      << " delta=" << rational_to_string(plan.delta)
      << " levels=" << plan.levels.size()
      << " policy=" << policy_name(plan.policy) << "\n";
  for (const LadderLevel& level : plan.levels) {
    write_design(out, level.tester->design());
  }
}

}  // namespace gt
