#ifndef GT_BERNOULLI_HPP
#define GT_BERNOULLI_HPP

#include <optional>

#include "gt/core.hpp"
#include "gt/ladder.hpp"
#include "gt/subsets.hpp"

namespace gt {

// Parameters of one Bernoulli threshold tester at scale ell.
//
// c is the root of (1 - delta^2/(c*ell))^(ell/delta^2) = 1/e, held as an
// exact rational from a 140-bit bisection; p = delta^2/(c*ell); eta is a
// high-precision rational stand-in for (1/e)(1/2 + 1/(2*delta)). A design
// file embeds all of these, so replaying a file never recomputes them.
struct BernoulliSpec {
  int n = 0;
  Rat ell;
  Rat delta;
  Rat c;
  Rat p;
  std::uint64_t p_threshold = 0;  // floor(p * 2^64); cells fire on draw < this
  Rat eta;
  std::int64_t t = 0;
  Rat t_formula;  // 54e^2 * ell/(delta-1)^2 * ln(4e*delta^2*n/ell), pre-ceiling

  // Boundary sizes certified by the validator.
  std::int64_t d1() const;  // floor(ell/delta^2): largest "output 0" size
  std::int64_t d2() const;  // floor(ell/delta)+1: smallest "output 1" size
  // zero_count >= eta*t as an integer comparison: zero_count >= this.
  std::int64_t zero_threshold(std::int64_t rows) const;
};

// Root of the defining equation, by bisection over [1/2, 2] with exact
// rational sign tests against an e^{-x} enclosure. Requires ell >= 2*delta^2.
Rat solve_c(const Rat& ell, const Rat& delta);

// Requires 2*delta^2 <= ell <= n*delta^2.
BernoulliSpec make_spec(int n, const Rat& ell, const Rat& delta);

// t x n design, each cell an independent Bernoulli(p) draw from
// mt19937_64(seed), row-major, one 64-bit draw per cell.
PoolingDesign sample_design(const BernoulliSpec& spec, std::uint64_t seed);

// Rebuilds the spec recorded in a bernoulli design's header/meta.
BernoulliSpec spec_from_design(const PoolingDesign& design);

struct ThresholdVerdict {
  int output = 0;
  std::int64_t zero_count = 0;
  Rat threshold;  // eta * t, exact
};

// output 0 iff zero_count >= eta*t (exact rational comparison).
ThresholdVerdict decide(const BernoulliSpec& spec,
                        const std::vector<std::uint8_t>& answers);

enum class ValidationMode { exhaustive, sampled };

struct DesignValidation {
  bool pass = false;
  ValidationMode mode = ValidationMode::exhaustive;
  std::int64_t d1 = 0;
  std::int64_t d2 = 0;
  std::uint64_t checked_low = 0;
  std::uint64_t checked_high = 0;
  // Fraction of each boundary stratum covered (1 when exhaustive).
  double coverage_low = 1.0;
  double coverage_high = 1.0;
  // Lexicographically first violating defective set, 1-based.
  std::optional<std::vector<int>> witness;
  int witness_expected = 0;

  std::string summary() const;
};

// Certifies the tester contract at the boundary sizes d1 (every set must
// decide 0) and d2 (every set must decide 1). Answer monotonicity extends
// the certificate to all sizes <= d1 and >= d2. Falls back to seeded
// sampling past the enumeration budget. Requires n <= 64.
DesignValidation validate_design(const PoolingDesign& design,
                                 const BernoulliSpec& spec,
                                 const ScanLimits& limits = {});

struct BuildOptions {
  int max_resamples = 20;     // extra seeds tried per t after the first
  int max_t_doublings = 3;
  Rat t_scale = Rat(1);       // experimental scaling of the formula t
};

struct BuildResult {
  PoolingDesign design;
  BernoulliSpec spec;  // t reflects any doubling
  int resamples_used = 0;
  int doublings_used = 0;
  DesignValidation validation;
};

// Samples seeds (and on repeated failure doubles t) until a design passes
// validate_design; throws construction_error when the budget is exhausted.
BuildResult build_valid_tester(int n, const Rat& ell, const Rat& delta,
                               std::uint64_t seed, const BuildOptions& options = {},
                               const ScanLimits& limits = {});
BuildResult build_valid_tester(const BernoulliSpec& spec, std::uint64_t seed,
                               const BuildOptions& options = {},
                               const ScanLimits& limits = {});

class BernoulliTester : public ThresholdTester {
 public:
  explicit BernoulliTester(BuildResult build);
  const PoolingDesign& design() const override { return build_.design; }
  int run(const std::vector<std::uint8_t>& answers) const override;
  Rat ell() const override { return build_.spec.ell; }
  Rat delta() const override { return build_.spec.delta; }
  const BuildResult& build() const { return build_; }

 private:
  BuildResult build_;
};

class BernoulliTesterFactory : public TesterFactory {
 public:
  BernoulliTesterFactory(int n, Rat delta, std::uint64_t base_seed,
                         BuildOptions options = {}, ScanLimits limits = {});
  Rat min_ell() const override;  // 2 * delta^2
  std::unique_ptr<ThresholdTester> make(const Rat& ell) override;
  Method method() const override { return Method::bernoulli_ladder; }

 private:
  int n_;
  Rat delta_;
  std::uint64_t base_seed_;
  BuildOptions options_;
  ScanLimits limits_;
};

}  // namespace gt

#endif
