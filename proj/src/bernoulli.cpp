#include "gt/bernoulli.hpp"

#include <sstream>

#include "gt/design_io.hpp"
#include "gt/realnum.hpp"
#include "gt/rng.hpp"

namespace gt {

namespace {

constexpr unsigned kEnclosureBits = 140;

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (char c : text) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ull;
  }
  return h;
}

std::vector<std::uint64_t> rows_as_words(const PoolingDesign& design) {
  if (design.n > 64) {
    throw dimension_error("validator supports n <= 64");
  }
  std::vector<std::uint64_t> words;
  words.reserve(design.rows.size());
  for (const Pool& row : design.rows) {
    words.push_back(row.words().empty() ? 0 : row.words()[0]);
  }
  return words;
}

std::uint64_t mask_of(const std::vector<int>& zero_based) {
  std::uint64_t m = 0;
  for (int i : zero_based) m |= std::uint64_t{1} << i;
  return m;
}

std::vector<int> to_one_based(const std::vector<int>& zero_based) {
  std::vector<int> out(zero_based);
  for (int& v : out) ++v;
  return out;
}

}  // namespace

std::int64_t BernoulliSpec::d1() const {
  return to_i64(floor_rat(ell / (delta * delta)));
}

std::int64_t BernoulliSpec::d2() const {
  return to_i64(floor_rat(ell / delta)) + 1;
}

std::int64_t BernoulliSpec::zero_threshold(std::int64_t rows) const {
  return to_i64(ceil_rat(eta * rat_of(rows)));
}

Rat solve_c(const Rat& ell, const Rat& delta) {
  if (delta <= 1) throw std::invalid_argument("need delta > 1");
  Rat x = delta * delta / ell;
  if (x > Rat(1, 2)) {
    throw std::domain_error("no root in [1/2,2]: need ell >= 2*delta^2");
  }
  RatInterval target = exp_neg_enclosure(x, kEnclosureBits);
  // g(c) = (1 - x/c) - e^{-x} is increasing in c and brackets zero on
  // [1/2, 2] for every x in (0, 1/2].
  Rat lo(1, 2), hi(2);
  if (1 - x / lo > target.hi || 1 - x / hi < target.lo) {
    throw std::domain_error("no root in [1/2,2]");
  }
  for (int iter = 0; iter < 160; ++iter) {
    Rat mid = (lo + hi) / 2;
    Rat g = 1 - x / mid;
    if (g > target.hi) {
      hi = mid;
    } else if (g < target.lo) {
      lo = mid;
    } else {
      return mid;  // within the enclosure of the root itself
    }
  }
  return (lo + hi) / 2;
}

BernoulliSpec make_spec(int n, const Rat& ell, const Rat& delta) {
  if (n < 1) throw std::invalid_argument("need n >= 1");
  Rat delta_sq = delta * delta;
  if (ell < 2 * delta_sq) {
    throw std::invalid_argument("need ell >= 2*delta^2");
  }
  if (ell > rat_of(n) * delta_sq) {
    throw std::invalid_argument("need ell <= n*delta^2");
  }
  BernoulliSpec spec;
  spec.n = n;
  spec.ell = ell;
  spec.delta = delta;
  spec.c = solve_c(ell, delta);
  spec.p = delta_sq / (spec.c * ell);
  spec.p_threshold = to_u64(floor_rat(spec.p * Rat(Int(1) << 64)));

  RatInterval inv_e = exp_neg_enclosure(Rat(1), kEnclosureBits);
  spec.eta = inv_e.mid() * (Rat(1, 2) + Rat(1, 2) / delta);

  // t = ceil( 54 e^2 * ell/(delta-1)^2 * ln(4 e delta^2 n / ell) ).
  RatInterval e_iv = e_enclosure(kEnclosureBits);
  RatInterval c_prime = ival_scale(ival_mul(e_iv, e_iv), Rat(54));
  RatInterval log_arg = ival_scale(e_iv, 4 * delta_sq * rat_of(n) / ell);
  RatInterval log_iv{ln_enclosure(log_arg.lo, kEnclosureBits).lo,
                     ln_enclosure(log_arg.hi, kEnclosureBits).hi};
  Rat scale = ell / ((delta - 1) * (delta - 1));
  RatInterval t_iv = ival_scale(ival_mul(c_prime, log_iv), scale);
  spec.t_formula = t_iv.mid();
  spec.t = to_i64(ceil_rat(spec.t_formula));
  return spec;
}

PoolingDesign sample_design(const BernoulliSpec& spec, std::uint64_t seed) {
  PoolingDesign design;
  design.kind = DesignKind::bernoulli;
  design.n = spec.n;
  design.seed = seed;
  design.rows.reserve(static_cast<std::size_t>(spec.t));
  const bool always = spec.p >= 1;
  std::mt19937_64 gen(seed);
  for (std::int64_t r = 0; r < spec.t; ++r) {
    Pool row(spec.n);
    for (int j = 1; j <= spec.n; ++j) {
      std::uint64_t draw = gen();
      if (always || draw < spec.p_threshold) row.set(j);
    }
    design.rows.push_back(std::move(row));
  }
  design.meta["ell"] = rational_to_string(spec.ell);
  design.meta["delta"] = rational_to_string(spec.delta);
  design.meta["c"] = rational_to_string(spec.c);
  design.meta["eta"] = rational_to_string(spec.eta);
  design.meta["p_thr"] = std::to_string(spec.p_threshold);
  design.meta["t_formula"] = rational_to_string(spec.t_formula);
  design.meta["rng"] = "mt19937_64 row-major one draw per cell";
  return design;
}

BernoulliSpec spec_from_design(const PoolingDesign& design) {
  if (design.kind != DesignKind::bernoulli) {
    throw std::invalid_argument("not a bernoulli design");
  }
  BernoulliSpec spec;
  spec.n = design.n;
  spec.ell = parse_rational(meta_at(design, "ell"));
  spec.delta = parse_rational(meta_at(design, "delta"));
  spec.c = parse_rational(meta_at(design, "c"));
  spec.eta = parse_rational(meta_at(design, "eta"));
  spec.p = spec.delta * spec.delta / (spec.c * spec.ell);
  spec.p_threshold = std::stoull(meta_at(design, "p_thr"));
  spec.t_formula = parse_rational(meta_at(design, "t_formula"));
  spec.t = design.t();
  return spec;
}

ThresholdVerdict decide(const BernoulliSpec& spec,
                        const std::vector<std::uint8_t>& answers) {
  if (static_cast<std::int64_t>(answers.size()) != spec.t) {
    throw dimension_error("answer vector length does not match t");
  }
  ThresholdVerdict verdict;
  for (std::uint8_t a : answers) verdict.zero_count += (a == 0);
  verdict.threshold = spec.eta * rat_of(spec.t);
  verdict.output =
      verdict.zero_count >= spec.zero_threshold(spec.t) ? 0 : 1;
  return verdict;
}

std::string DesignValidation::summary() const {
  std::ostringstream os;
  os << (pass ? "PASS" : "FAIL")
     << (mode == ValidationMode::exhaustive ? " exhaustive" : " sampled")
     << " d1=" << d1 << " checked=" << checked_low << " d2=" << d2
     << " checked=" << checked_high;
  if (witness) {
    os << " witness_size=" << witness->size()
       << " expected=" << witness_expected;
  }
  return os.str();
}

DesignValidation validate_design(const PoolingDesign& design,
                                 const BernoulliSpec& spec,
                                 const ScanLimits& limits) {
  design.check();
  if (design.n != spec.n) throw dimension_error("design/spec n mismatch");
  const std::vector<std::uint64_t> rows = rows_as_words(design);
  const std::int64_t t = static_cast<std::int64_t>(rows.size());

  DesignValidation result;
  result.d1 = spec.d1();
  result.d2 = spec.d2();
  const std::int64_t zero_needed = spec.zero_threshold(t);
  // Final zero count < zero_needed  <=>  positive count > t - zero_needed.
  const std::int64_t ones_needed = t - zero_needed + 1;

  // Early-exit scans; both verdict directions are monotone in the counter.
  auto decides_zero = [&](std::uint64_t mask) {
    std::int64_t zeros = 0;
    std::int64_t remaining = t;
    for (std::uint64_t row : rows) {
      zeros += ((row & mask) == 0);
      if (zeros >= zero_needed) return true;
      --remaining;
      if (zeros + remaining < zero_needed) return false;
    }
    return zeros >= zero_needed;
  };
  auto decides_one = [&](std::uint64_t mask) {
    std::int64_t ones = 0;
    std::int64_t remaining = t;
    for (std::uint64_t row : rows) {
      ones += ((row & mask) != 0);
      if (ones >= ones_needed) return true;
      --remaining;
      if (ones + remaining < ones_needed) return false;
    }
    return ones >= ones_needed;
  };

  const std::uint64_t budget = resolve_enum_budget(limits);

  auto run_side = [&](std::int64_t size, bool expect_zero,
                      std::uint64_t& checked, double& coverage) -> bool {
    if (size < 0 || size > design.n) {
      checked = 0;
      return true;  // no sets of this size exist
    }
    auto check = [&](const std::vector<int>& subset) {
      std::uint64_t mask = mask_of(subset);
      return expect_zero ? decides_zero(mask) : !decides_zero(mask);
    };
    std::uint64_t count =
        binomial_capped(design.n, static_cast<int>(size), budget);
    ScanOutcome outcome;
    if (count <= budget) {
      std::uint64_t work = count * static_cast<std::uint64_t>(t) / 64;
      outcome = scan_ksubsets(design.n, static_cast<int>(size), check,
                              resolve_threads(limits, work));
      coverage = 1.0;
    } else {
      result.mode = ValidationMode::sampled;
      outcome = scan_ksubsets_sampled(design.n, static_cast<int>(size),
                                      limits.sample_count, limits.sample_seed,
                                      check);
      coverage = static_cast<double>(outcome.checked) /
                 static_cast<double>(count);
    }
    checked = outcome.checked;
    if (!outcome.all_passed) {
      result.witness = to_one_based(*outcome.first_failure);
      result.witness_expected = expect_zero ? 0 : 1;
      return false;
    }
    return true;
  };

  bool low_ok =
      run_side(result.d1, true, result.checked_low, result.coverage_low);
  bool high_ok =
      low_ok &&
      run_side(result.d2, false, result.checked_high, result.coverage_high);
  result.pass = low_ok && high_ok;
  return result;
}

BuildResult build_valid_tester(int n, const Rat& ell, const Rat& delta,
                               std::uint64_t seed, const BuildOptions& options,
                               const ScanLimits& limits) {
  return build_valid_tester(make_spec(n, ell, delta), seed, options, limits);
}

BuildResult build_valid_tester(const BernoulliSpec& base_spec,
                               std::uint64_t seed, const BuildOptions& options,
                               const ScanLimits& limits) {
  BernoulliSpec spec = base_spec;
  if (options.t_scale != 1) {
    if (sgn(options.t_scale) <= 0) {
      throw std::invalid_argument("t_scale must be positive");
    }
    spec.t = std::max<std::int64_t>(
        1, to_i64(ceil_rat(rat_of(base_spec.t) * options.t_scale)));
  }
  std::string best;
  for (int doubling = 0; doubling <= options.max_t_doublings; ++doubling) {
    BernoulliSpec attempt_spec = spec;
    attempt_spec.t = spec.t << doubling;
    for (int attempt = 0; attempt <= options.max_resamples; ++attempt) {
      std::uint64_t attempt_seed =
          (doubling == 0 && attempt == 0)
              ? seed
              : derive_seed(seed, static_cast<std::uint64_t>(doubling) << 32 |
                                      static_cast<std::uint64_t>(attempt));
      PoolingDesign design = sample_design(attempt_spec, attempt_seed);
      DesignValidation validation = validate_design(design, attempt_spec, limits);
      if (validation.pass) {
        BuildResult result;
        result.design = std::move(design);
        result.spec = attempt_spec;
        result.resamples_used = attempt;
        result.doublings_used = doubling;
        result.validation = std::move(validation);
        return result;
      }
      best = "t=" + std::to_string(attempt_spec.t) + " seed=" +
             std::to_string(attempt_seed) + " " + validation.summary();
    }
  }
  throw construction_error("bernoulli tester construction exhausted", best);
}

BernoulliTester::BernoulliTester(BuildResult build) : build_(std::move(build)) {}

int BernoulliTester::run(const std::vector<std::uint8_t>& answers) const {
  return decide(build_.spec, answers).output;
}

BernoulliTesterFactory::BernoulliTesterFactory(int n, Rat delta,
                                               std::uint64_t base_seed,
                                               BuildOptions options,
                                               ScanLimits limits)
    : n_(n),
      delta_(std::move(delta)),
      base_seed_(base_seed),
      options_(std::move(options)),
      limits_(limits) {}

Rat BernoulliTesterFactory::min_ell() const { return 2 * delta_ * delta_; }

std::unique_ptr<ThresholdTester> BernoulliTesterFactory::make(const Rat& ell) {
  std::uint64_t seed = derive_seed(base_seed_, fnv1a(rational_to_string(ell)));
  return std::make_unique<BernoulliTester>(
      build_valid_tester(n_, ell, delta_, seed, options_, limits_));
}

}  // namespace gt
