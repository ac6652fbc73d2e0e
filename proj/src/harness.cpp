#include "gt/harness.hpp"

#include <ostream>
#include <sstream>

#include "gt/adaptive.hpp"
#include "gt/bounds.hpp"
#include "gt/design_io.hpp"
#include "gt/rng.hpp"

namespace gt {

const char* kCsvHeader = "n,d,D,delta,method,tests,estimate,ok,bound_ref,seed";

Method parse_method(const std::string& name) {
  if (name == "adaptive") return Method::adaptive;
  if (name == "bernoulli" || name == "bernoulli-ladder") {
    return Method::bernoulli_ladder;
  }
  if (name == "expander" || name == "expander-ladder") {
    return Method::expander_ladder;
  }
  if (name == "condenser" || name == "condenser-ladder") {
    return Method::condenser_ladder;
  }
  throw std::invalid_argument("unknown method: " + name);
}

bool within_factor(int d, const Rat& estimate, const Rat& delta) {
  if (d == 0) return estimate == 0;
  Rat d_rat = rat_of(d);
  return d_rat / delta <= estimate && estimate <= d_rat * delta;
}

std::string RunRecord::csv_row() const {
  std::ostringstream os;
  os << n << ',' << d << ',' << upper_d << ','
     << rational_to_string(delta) << ',' << method_name(method) << ','
     << tests << ',' << rational_to_string(estimate) << ','
     << (within_factor ? 1 : 0) << ',' << rational_to_string(bound_ref) << ','
     << seed;
  return os.str();
}

std::unique_ptr<TesterFactory> make_factory(Method method, int n,
                                            const Rat& delta,
                                            const RunOptions& options) {
  switch (method) {
    case Method::bernoulli_ladder:
      return std::make_unique<BernoulliTesterFactory>(
          n, delta, options.design_seed, options.bernoulli, options.limits);
    case Method::expander_ladder:
      return std::make_unique<ExpanderTesterFactory>(
          n, delta, options.design_seed, options.expander, options.limits);
    case Method::condenser_ladder:
      return std::make_unique<CondenserTesterFactory>(
          n, delta, options.design_seed, options.condenser, options.limits);
    case Method::adaptive:
      break;
  }
  throw std::invalid_argument("adaptive method has no tester factory");
}

EstimateReport estimate_with_ladder(TestOracle& oracle,
                                    const EstimationProblem& problem,
                                    TesterFactory& factory,
                                    const RunOptions& options) {
  if (rat_of(problem.upper_d) < problem.delta_sq()) {
    EstimateReport report;
    report.method = factory.method();
    report.bound_reference =
        bounds::lower_bound_value(problem.n, problem.upper_d, problem.delta);
    const std::uint64_t before = oracle.queries_made();
    if (options.zero_check_when_trivial &&
        oracle.answer_pool(Pool::all(problem.n)) == 0) {
      report.estimate = 0;
    } else {
      report.estimate = rat_of(problem.upper_d) / problem.delta;
    }
    report.tests_used = oracle.queries_made() - before;
    return report;
  }
  LadderPlan ladder = plan(problem, factory);
  return estimate_ladder(oracle, ladder).report;
}

RunRecord run_estimate(Method method, int n, const DefectiveSet& hidden,
                       int upper_d, const Rat& delta,
                       const RunOptions& options) {
  EstimationProblem problem(n, upper_d, delta);
  TestOracle oracle(n, hidden);
  EstimateReport report;
  if (method == Method::adaptive) {
    AdaptiveOptions adaptive_options;
    adaptive_options.zero_check_when_trivial = options.zero_check_when_trivial;
    report = estimate_adaptive(oracle, problem, adaptive_options);
  } else {
    std::unique_ptr<TesterFactory> factory =
        make_factory(method, n, delta, options);
    report = estimate_with_ladder(oracle, problem, *factory, options);
  }
  RunRecord record;
  record.n = n;
  record.d = hidden.size();
  record.upper_d = upper_d;
  record.delta = delta;
  record.method = method;
  record.tests = report.tests_used;
  record.estimate = report.estimate;
  record.within_factor = within_factor(record.d, report.estimate, delta);
  record.bound_ref = report.bound_reference;
  record.seed = options.design_seed;
  record.bottom_gap = report.bottom_gap;
  return record;
}

namespace {

// Fixed-design tester: replays the decision rule recorded in the meta.
class StoredBernoulliTester : public ThresholdTester {
 public:
  explicit StoredBernoulliTester(PoolingDesign design)
      : design_(std::move(design)), spec_(spec_from_design(design_)) {}
  const PoolingDesign& design() const override { return design_; }
  int run(const std::vector<std::uint8_t>& answers) const override {
    return decide(spec_, answers).output;
  }
  Rat ell() const override { return spec_.ell; }
  Rat delta() const override { return spec_.delta; }

 private:
  PoolingDesign design_;
  BernoulliSpec spec_;
};

class StoredExpanderTester : public ThresholdTester {
 public:
  explicit StoredExpanderTester(PoolingDesign design)
      : design_(std::move(design)),
        k_(std::stoi(meta_at(design_, "k"))),
        a_(parse_rational(meta_at(design_, "a"))),
        ell_(parse_rational(meta_at(design_, "ell"))),
        delta_(parse_rational(meta_at(design_, "delta"))) {}
  const PoolingDesign& design() const override { return design_; }
  int run(const std::vector<std::uint8_t>& answers) const override {
    std::int64_t positives = 0;
    for (std::uint8_t x : answers) positives += (x != 0);
    return rat_of(positives) >= a_ * rat_of(k_) ? 1 : 0;
  }
  Rat ell() const override { return ell_; }
  Rat delta() const override { return delta_; }

 private:
  PoolingDesign design_;
  int k_;
  Rat a_;
  Rat ell_;
  Rat delta_;
};

class StoredCondenserTester : public ThresholdTester {
 public:
  explicit StoredCondenserTester(PoolingDesign design)
      : design_(std::move(design)),
        condenser_(condenser_from_design(design_)),
        ell_(parse_rational(meta_at(design_, "ell"))),
        delta_(parse_rational(meta_at(design_, "delta"))) {}
  const PoolingDesign& design() const override { return design_; }
  int run(const std::vector<std::uint8_t>& answers) const override {
    return condenser_verdict(condenser_, answers);
  }
  Rat ell() const override { return ell_; }
  Rat delta() const override { return delta_; }

 private:
  PoolingDesign design_;
  Condenser condenser_;
  Rat ell_;
  Rat delta_;
};

}  // namespace

std::unique_ptr<ThresholdTester> tester_from_design(PoolingDesign design) {
  design.check();
  switch (design.kind) {
    case DesignKind::bernoulli:
      return std::make_unique<StoredBernoulliTester>(std::move(design));
    case DesignKind::expander:
      return std::make_unique<StoredExpanderTester>(std::move(design));
    case DesignKind::condenser:
      return std::make_unique<StoredCondenserTester>(std::move(design));
    case DesignKind::identity:
      break;
  }
  throw std::invalid_argument("design kind is not a threshold tester");
}

LadderPlan read_plan(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("empty plan stream");
  std::istringstream header(line);
  std::string magic, version, token;
  header >> magic >> version;
  if (magic != "GTPLAN" || version != "v1") {
    throw std::invalid_argument("not a GTPLAN v1 header");
  }
  LadderPlan plan;
  std::size_t levels = 0;
  while (header >> token) {
    std::size_t eq = token.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("malformed plan header token");
    }
    std::string key = token.substr(0, eq);
    std::string value = token.substr(eq + 1);
    if (key == "D") plan.upper_d = std::stoi(value);
    else if (key == "delta") plan.delta = parse_rational(value);
    else if (key == "levels") levels = std::stoul(value);
    else if (key == "policy") {
      if (value != policy_name(BottomRungPolicy::geometric_midpoint)) {
        throw std::invalid_argument("unknown bottom-rung policy: " + value);
      }
    } else {
      throw std::invalid_argument("unknown plan header key: " + key);
    }
  }
  for (std::size_t i = 0; i < levels; ++i) {
    PoolingDesign design = read_design(in);
    DesignKind kind = design.kind;
    LadderLevel level;
    level.index = static_cast<int>(i);
    level.tester = tester_from_design(std::move(design));
    level.ell = level.tester->ell();
    plan.n = level.tester->design().n;
    plan.method = parse_method(design_kind_name(kind));
    plan.levels.push_back(std::move(level));
  }
  if (plan.levels.empty()) {
    throw std::invalid_argument("plan has no levels");
  }
  plan.global_pool = Pool::all(plan.n);
  return plan;
}

LadderPlan plan_from_single_design(PoolingDesign design) {
  LadderPlan plan;
  plan.n = design.n;
  plan.delta = parse_rational(meta_at(design, "delta"));
  plan.method = parse_method(design_kind_name(design.kind));
  LadderLevel level;
  level.index = 0;
  level.tester = tester_from_design(std::move(design));
  level.ell = level.tester->ell();
  plan.upper_d = static_cast<int>(to_i64(ceil_rat(level.ell)));
  plan.levels.push_back(std::move(level));
  plan.global_pool = Pool::all(plan.n);
  return plan;
}

void run_sweep(std::ostream& out, const SweepGrid& grid,
               const RunOptions& options) {
  out << kCsvHeader << "\n";
  std::uint64_t run_index = 0;
  for (Method method : grid.methods) {
    for (int n : grid.n_values) {
      for (int upper_d : grid.upper_d_values) {
        if (upper_d > n || upper_d < 1) continue;
        for (const Rat& delta : grid.delta_values) {
          for (int d : grid.d_values) {
            ++run_index;
            if (d > upper_d || d > n || d < 0) continue;
            std::mt19937_64 gen(derive_seed(grid.set_seed, run_index));
            std::vector<int> items = random_ksubset(gen, n, d);
            DefectiveSet hidden(n, items);
            RunRecord record =
                run_estimate(method, n, hidden, upper_d, delta, options);
            out << record.csv_row() << "\n";
          }
        }
      }
    }
  }
}

}  // namespace gt
