// gt: build pooling designs, estimate defective counts against a simulated
// oracle, and sweep parameter grids to CSV.
//
// Exit codes: 0 success (every estimate within factor unless --no-check),
// 1 estimate outside the factor, 2 usage error, 3 construction failure,
// 4 exhaustive validation failure.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "gt/adaptive.hpp"
#include "gt/bernoulli.hpp"
#include "gt/bounds.hpp"
#include "gt/condenser.hpp"
#include "gt/core.hpp"
#include "gt/design_io.hpp"
#include "gt/expander.hpp"
#include "gt/harness.hpp"
#include "gt/ladder.hpp"
#include "gt/rng.hpp"

namespace {

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  if (text.empty()) return out;
  std::stringstream ss(text);
  std::string piece;
  while (std::getline(ss, piece, ',')) {
    std::size_t dots = piece.find("..");
    if (dots != std::string::npos) {
      int lo = std::stoi(piece.substr(0, dots));
      int hi = std::stoi(piece.substr(dots + 2));
      for (int v = lo; v <= hi; ++v) out.push_back(v);
    } else {
      out.push_back(std::stoi(piece));
    }
  }
  return out;
}

std::vector<gt::Rat> parse_rat_list(const std::string& text) {
  std::vector<gt::Rat> out;
  std::stringstream ss(text);
  std::string piece;
  while (std::getline(ss, piece, ',')) {
    out.push_back(gt::parse_rational(piece));
  }
  return out;
}

struct DefectiveChoice {
  std::string explicit_list;
  bool have_list = false;
  int count = -1;
  std::uint64_t set_seed = 1;
};

gt::DefectiveSet resolve_defectives(const DefectiveChoice& choice, int n) {
  if (choice.have_list) {
    std::vector<int> items = parse_int_list(choice.explicit_list);
    return gt::DefectiveSet(n, items);
  }
  if (choice.count < 0) {
    throw CLI::ValidationError(
        "--defectives", "need --defectives or --defectives-count");
  }
  std::mt19937_64 gen(choice.set_seed);
  std::vector<int> items = gt::random_ksubset(gen, n, choice.count);
  return gt::DefectiveSet(n, items);
}

int cmd_estimate(const std::string& method_name, int n,
                 const DefectiveChoice& defectives, int upper_d,
                 const std::string& delta_text, std::uint64_t seed,
                 const std::string& design_path, bool zero_check,
                 bool no_check) {
  gt::Method method = gt::parse_method(method_name);
  gt::Rat delta = gt::parse_rational(delta_text);
  gt::RunOptions options;
  options.zero_check_when_trivial = zero_check;
  options.design_seed = seed;

  gt::DefectiveSet hidden = resolve_defectives(defectives, n);
  gt::RunRecord record;

  if (!design_path.empty()) {
    if (method == gt::Method::adaptive) {
      throw CLI::ValidationError("--design",
                                 "adaptive estimation takes no design file");
    }
    std::ifstream in(design_path);
    if (!in) throw std::runtime_error("cannot open " + design_path);
    std::string first_line;
    std::getline(in, first_line);
    in.seekg(0);
    gt::LadderPlan plan = first_line.rfind("GTPLAN", 0) == 0
                              ? gt::read_plan(in)
                              : gt::plan_from_single_design(gt::read_design(in));
    if (plan.n != n) throw std::runtime_error("design width does not match --n");
    gt::TestOracle oracle(n, hidden);
    gt::EstimateReport report = gt::estimate_ladder(oracle, plan).report;
    record.n = n;
    record.d = hidden.size();
    record.upper_d = upper_d;
    record.delta = delta;
    record.method = method;
    record.tests = report.tests_used;
    record.estimate = report.estimate;
    record.within_factor = gt::within_factor(record.d, report.estimate, delta);
    record.bound_ref = report.bound_reference;
    record.seed = seed;
  } else {
    record = gt::run_estimate(method, n, hidden, upper_d, delta, options);
  }

  std::cout << gt::kCsvHeader << "\n" << record.csv_row() << "\n";
  if (record.bottom_gap) std::cerr << "note: bottom-gap run\n";
  return (no_check || record.within_factor) ? 0 : 1;
}

int validation_exit(bool pass, const std::string& mode, const std::string& what) {
  std::cerr << what << (pass ? " PASS" : " FAIL") << " (" << mode << ")\n";
  if (!pass && mode == "exhaustive") return 4;
  return 0;
}

int cmd_build_design(const std::string& kind, const std::string& out_path,
                     std::uint64_t seed, const std::string& validate,
                     bool emit_design, int n, const std::string& ell_text,
                     const std::string& delta_text, int max_resamples,
                     int max_t_doublings, const std::string& t_scale_text,
                     int right_m, int reg_degree, int expander_k,
                     const std::string& expander_a, int nhat, int that,
                     int mhat, int cond_k, int cond_kprime,
                     const std::string& eps_text,
                     const std::string& cond_source) {
  gt::ScanLimits limits;
  auto open_out = [&](auto&& writer) {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + out_path);
    writer(out);
  };

  if (kind == "identity") {
    open_out([&](std::ostream& out) { gt::write_design(out, gt::identity_design(n)); });
    std::cerr << "identity design PASS (trivial)\n";
    return 0;
  }

  if (kind == "bernoulli") {
    gt::Rat ell = gt::parse_rational(ell_text);
    gt::Rat delta = gt::parse_rational(delta_text);
    if (validate == "off") {
      gt::BernoulliSpec spec = gt::make_spec(n, ell, delta);
      if (t_scale_text != "1") {
        gt::Rat scale = gt::parse_rational(t_scale_text);
        spec.t = std::max<std::int64_t>(
            1, gt::to_i64(gt::ceil_rat(gt::rat_of(spec.t) * scale)));
      }
      open_out([&](std::ostream& out) {
        gt::write_design(out, gt::sample_design(spec, seed));
      });
      return 0;
    }
    gt::BuildOptions options;
    options.max_resamples = max_resamples;
    options.max_t_doublings = max_t_doublings;
    options.t_scale = gt::parse_rational(t_scale_text);
    if (validate == "sampled") limits.max_enumeration = 1;  // force sampling
    gt::BuildResult result = gt::build_valid_tester(n, ell, delta, seed,
                                                    options, limits);
    open_out([&](std::ostream& out) { gt::write_design(out, result.design); });
    std::cerr << "bernoulli " << result.validation.summary() << "\n";
    return 0;
  }

  if (kind == "expander") {
    gt::BipartiteGraph graph =
        reg_degree == right_m && right_m == n && reg_degree == 1
            ? gt::identity_graph(n)
            : gt::random_regular_graph(n, right_m, reg_degree, seed);
    bool pass = true;
    std::string mode = "off";
    if (validate != "off") {
      if (validate == "sampled") limits.max_enumeration = 1;
      gt::ExpansionCertificate cert = gt::validate_expansion(
          graph, expander_k, gt::parse_rational(expander_a), limits);
      pass = cert.pass;
      mode = cert.checked == gt::ValidationMode::exhaustive ? "exhaustive"
                                                            : "sampled";
      if (cert.witness) {
        std::ostringstream os;
        os << "witness:";
        for (int v : *cert.witness) os << ' ' << v + 1;
        std::cerr << os.str() << "\n";
      }
    }
    if (emit_design) {
      open_out([&](std::ostream& out) {
        gt::write_design(out, gt::design_from_graph(graph));
      });
    } else {
      open_out([&](std::ostream& out) { gt::write_graph(out, graph); });
    }
    return validation_exit(pass, mode, "expansion");
  }

  if (kind == "condenser") {
    gt::Rat eps = gt::parse_rational(eps_text);
    gt::Condenser condenser =
        cond_source == "injective"
            ? gt::injective_condenser(nhat, that, cond_k, cond_kprime, eps)
            : gt::search_condenser(nhat, that, mhat, cond_k, cond_kprime, eps,
                                   seed, 50, limits);
    bool pass = true;
    std::string mode = "off";
    if (validate != "off") {
      if (validate == "sampled") limits.max_enumeration = 1;
      gt::CondenserValidation result =
          gt::validate_condenser_operational(condenser, limits);
      pass = result.pass;
      mode = result.mode == gt::ValidationMode::exhaustive ? "exhaustive"
                                                           : "sampled";
    }
    if (emit_design) {
      open_out([&](std::ostream& out) {
        gt::write_design(out, gt::induce_design(condenser));
      });
    } else {
      open_out([&](std::ostream& out) { gt::write_condenser(out, condenser); });
    }
    return validation_exit(pass, mode, "condenser");
  }

  throw CLI::ValidationError("--kind", "unknown design kind " + kind);
}

int cmd_sweep(const std::string& methods_text, const std::string& n_text,
              const std::string& upper_d_text, const std::string& delta_text,
              const std::string& d_text, std::uint64_t seed,
              std::uint64_t set_seed, const std::string& out_path,
              bool zero_check, bool no_check) {
  gt::SweepGrid grid;
  std::stringstream ss(methods_text);
  std::string piece;
  while (std::getline(ss, piece, ',')) {
    grid.methods.push_back(gt::parse_method(piece));
  }
  grid.n_values = parse_int_list(n_text);
  grid.upper_d_values = parse_int_list(upper_d_text);
  grid.delta_values = parse_rat_list(delta_text);
  grid.d_values = parse_int_list(d_text);
  grid.set_seed = set_seed;

  gt::RunOptions options;
  options.zero_check_when_trivial = zero_check;
  options.design_seed = seed;

  std::ostringstream csv;
  gt::run_sweep(csv, grid, options);
  if (out_path == "-") {
    std::cout << csv.str();
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + out_path);
    out << csv.str();
  }
  if (no_check) return 0;
  // ok column is the 8th field
  std::istringstream lines(csv.str());
  std::string line;
  std::getline(lines, line);  // header
  while (std::getline(lines, line)) {
    std::size_t pos = 0;
    for (int field = 0; field < 7; ++field) pos = line.find(',', pos) + 1;
    if (line[pos] == '0') return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"deterministic group-testing toolkit"};
  app.require_subcommand(1);

  // estimate
  auto* estimate = app.add_subcommand(
      "estimate", "run one estimator against a simulated oracle");
  std::string method = "adaptive", delta_text = "2/1", design_path;
  int n = 0, upper_d = 0;
  std::uint64_t seed = 1;
  DefectiveChoice defectives;
  bool zero_check = false, no_check = false;
  estimate->add_option("--method", method,
                       "adaptive|bernoulli|expander|condenser");
  estimate->add_option("--n", n, "item count")->required();
  auto* list_opt =
      estimate->add_option("--defectives", defectives.explicit_list,
                           "comma list of 1-based defective items");
  estimate->add_option("--defectives-count", defectives.count,
                       "sample this many defectives");
  estimate->add_option("--set-seed", defectives.set_seed,
                       "seed for sampled defective sets");
  estimate->add_option("--upper-d", upper_d, "upper bound D on d")->required();
  estimate->add_option("--delta", delta_text, "factor as p/q")->required();
  estimate->add_option("--seed", seed, "design construction seed");
  estimate->add_option("--design", design_path,
                       "GTDESIGN/GTPLAN file; skips construction");
  estimate->add_flag("--zero-check", zero_check,
                     "spend one global test when D < delta^2");
  estimate->add_flag("--no-check", no_check, "exit 0 even outside the factor");

  // build-design
  auto* build = app.add_subcommand("build-design",
                                   "construct and store a pooling design");
  std::string kind = "bernoulli", out_path, validate = "exhaustive";
  std::string ell_text = "8/1", t_scale_text = "1", expander_a = "1/1";
  std::string eps_text = "2/3", cond_source = "search";
  bool emit_design = false;
  int right_m = 0, reg_degree = 4, expander_k = 1;
  int nhat = 3, that = 1, mhat = 3, cond_k = 1, cond_kprime = 1;
  int max_resamples = 20, max_t_doublings = 3;
  build->add_option("--kind", kind, "bernoulli|expander|condenser|identity")
      ->required();
  build->add_option("--out", out_path, "output file")->required();
  build->add_option("--seed", seed, "construction seed");
  build->add_option("--validate", validate, "exhaustive|sampled|off");
  build->add_flag("--emit-design", emit_design,
                  "write the induced GTDESIGN instead of GTGRAPH/GTCOND");
  build->add_option("--n", n, "item count");
  build->add_option("--ell", ell_text, "threshold scale as p/q");
  build->add_option("--delta", delta_text, "factor as p/q");
  build->add_option("--max-resamples", max_resamples);
  build->add_option("--max-t-doublings", max_t_doublings);
  build->add_option("--t-scale", t_scale_text,
                    "experimental scaling of the formula t");
  build->add_option("--m", right_m, "right vertex count (expander)");
  build->add_option("--reg-degree", reg_degree, "left degree (expander)");
  build->add_option("--expander-k", expander_k, "certificate k");
  build->add_option("--expander-a", expander_a, "certificate a as p/q");
  build->add_option("--nhat", nhat);
  build->add_option("--that", that);
  build->add_option("--mhat", mhat);
  build->add_option("--cond-k", cond_k);
  build->add_option("--cond-kprime", cond_kprime);
  build->add_option("--eps", eps_text, "condenser eps as p/q");
  build->add_option("--cond-source", cond_source, "injective|search");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "grid of runs to CSV");
  std::string methods_text = "adaptive", n_text, upper_d_text, d_text;
  std::string deltas_text = "2/1", sweep_out = "-";
  std::uint64_t set_seed = 1;
  sweep->add_option("--methods", methods_text, "comma list of methods");
  sweep->add_option("--n-list", n_text, "e.g. 8,12")->required();
  sweep->add_option("--upper-d-list", upper_d_text, "e.g. 4,8")->required();
  sweep->add_option("--delta-list", deltas_text, "e.g. 3/2,2/1");
  sweep->add_option("--d-list", d_text, "e.g. 0..8")->required();
  sweep->add_option("--seed", seed, "design construction seed");
  sweep->add_option("--set-seed", set_seed, "defective sampling seed");
  sweep->add_option("--out", sweep_out, "CSV path or - for stdout");
  sweep->add_flag("--zero-check", zero_check);
  sweep->add_flag("--no-check", no_check);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return 2;
  }

  try {
    if (estimate->parsed()) {
      defectives.have_list = list_opt->count() > 0;
      return cmd_estimate(method, n, defectives, upper_d, delta_text, seed,
                          design_path, zero_check, no_check);
    }
    if (build->parsed()) {
      return cmd_build_design(kind, out_path, seed, validate, emit_design, n,
                              ell_text, delta_text, max_resamples,
                              max_t_doublings, t_scale_text, right_m,
                              reg_degree, expander_k, expander_a, nhat, that,
                              mhat, cond_k, cond_kprime, eps_text, cond_source);
    }
    if (sweep->parsed()) {
      return cmd_sweep(methods_text, n_text, upper_d_text, deltas_text, d_text,
                       seed, set_seed, sweep_out, zero_check, no_check);
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const gt::construction_error& e) {
    std::cerr << "construction failure: " << e.what();
    if (!e.best_attempt.empty()) std::cerr << " [" << e.best_attempt << "]";
    std::cerr << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
