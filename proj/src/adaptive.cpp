#include "gt/adaptive.hpp"

#include <algorithm>

#include "gt/bounds.hpp"

namespace gt {

std::vector<Pool> split(const Pool& pool) {
  std::vector<int> items = pool.indices();
  if (items.empty()) throw std::logic_error("cannot split an empty pool");
  if (items.size() == 1) return {pool};
  std::size_t half = items.size() / 2;
  std::span<const int> lo(items.data(), half);
  std::span<const int> hi(items.data() + half, items.size() - half);
  return {Pool::from_indices(pool.width(), lo),
          Pool::from_indices(pool.width(), hi)};
}

EstimateReport estimate_adaptive(TestOracle& oracle,
                                 const EstimationProblem& problem,
                                 const AdaptiveOptions& options,
                                 AdaptiveTrace* trace) {
  if (oracle.n() != problem.n) {
    throw dimension_error("oracle universe does not match problem");
  }
  EstimateReport report;
  report.method = Method::adaptive;
  report.bound_reference =
      bounds::lower_bound_value(problem.n, problem.upper_d, problem.delta);
  const std::uint64_t ledger_before = oracle.queries_made();

  const Rat frontier_cap =
      rat_of(problem.upper_d) / problem.delta_sq();  // D / delta^2

  if (frontier_cap < 1) {
    // D < delta^2: answer without splitting.
    if (options.zero_check_when_trivial &&
        oracle.answer_pool(Pool::all(problem.n)) == 0) {
      report.estimate = 0;
    } else {
      report.estimate = rat_of(problem.upper_d) / problem.delta;
    }
    report.tests_used = oracle.queries_made() - ledger_before;
    return report;
  }

  struct Node {
    Pool pool;
    bool known_positive;
  };
  std::vector<Node> frontier;
  frontier.push_back({Pool::all(problem.n), false});

  for (;;) {
    if (rat_of(static_cast<std::int64_t>(frontier.size())) > frontier_cap) {
      report.estimate =
          rat_of(static_cast<std::int64_t>(frontier.size())) * problem.delta;
      break;
    }

    std::vector<Node> positives;
    AdaptiveRound round;
    auto test_into = [&](Pool&& candidate) {
      int answer = oracle.answer_pool(candidate);
      if (trace) {
        round.tested.push_back(candidate);
        round.answers.push_back(static_cast<std::uint8_t>(answer));
      }
      if (answer == 1) positives.push_back({std::move(candidate), true});
    };

    for (Node& node : frontier) {
      if (node.known_positive && node.pool.count() == 1) {
        // A positive singleton is settled; re-testing it buys nothing.
        if (trace) round.carried.push_back(node.pool);
        positives.push_back(std::move(node));
        continue;
      }
      std::vector<Pool> halves = split(node.pool);
      for (Pool& half : halves) test_into(std::move(half));
    }
    if (trace) trace->rounds.push_back(std::move(round));

    bool all_singletons = std::all_of(
        positives.begin(), positives.end(),
        [](const Node& node) { return node.pool.count() == 1; });
    if (all_singletons) {
      report.estimate = rat_of(static_cast<std::int64_t>(positives.size()));
      break;
    }
    frontier = std::move(positives);
  }

  report.tests_used = oracle.queries_made() - ledger_before;
  return report;
}

}  // namespace gt
