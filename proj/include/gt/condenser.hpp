#ifndef GT_CONDENSER_HPP
#define GT_CONDENSER_HPP

#include <iosfwd>
#include <optional>

#include "gt/core.hpp"
#include "gt/ladder.hpp"
#include "gt/subsets.hpp"

namespace gt {

// A function F : {0,1}^n_hat x {0,1}^t_hat -> {0,1}^m_hat held as an
// explicit table, plus the decoder parameters (k, k_prime, eps) the
// induced tester runs with. Desk scale: n_hat <= 6, t_hat <= 4, m_hat <= 6.
struct Condenser {
  int n_hat = 0;
  int t_hat = 0;
  int m_hat = 0;
  int k = 0;
  int k_prime = 0;
  Rat eps;
  std::uint64_t seed = 0;
  std::vector<std::uint16_t> table;  // index (s << t_hat) | y

  std::uint32_t eval(std::uint32_t s, std::uint32_t y) const;
  int items() const { return 1 << n_hat; }
  int seeds() const { return 1 << t_hat; }
  int values() const { return 1 << m_hat; }
  // Largest size that must decode to 0: ceil((1-eps)*2^k_prime) - 1.
  std::int64_t zero_certified_size() const;
  void check() const;
};

// F(s, y) = s; value width equals item width.
Condenser injective_condenser(int n_hat, int t_hat, int k, int k_prime,
                              Rat eps);

struct InduceBudget {
  std::uint64_t max_rows = 1u << 20;
  std::uint64_t max_items = 1u << 20;
};

// Rows indexed by (r, j), r major: row (r, j) pools item s iff F(s, r) = j.
PoolingDesign induce_design(const Condenser& condenser,
                            const InduceBudget& budget = {});

// S_r = the set of values observed positive inside row block r, one
// bitmask per r over the 2^m_hat values.
struct MixtureSets {
  int t_hat = 0;
  int m_hat = 0;
  std::vector<std::uint64_t> sets;

  bool contains(std::uint32_t r, std::uint32_t value) const {
    return (sets[r] >> value) & 1u;
  }
  int size_of(std::uint32_t r) const;
};

MixtureSets mixture_from_answers(const Condenser& condenser,
                                 const std::vector<std::uint8_t>& answers);
// Equivalent fast path: S_r = { F(s, r) : s defective }. The equality of
// the two routes is covered by tests.
MixtureSets mixture_from_defectives(const Condenser& condenser,
                                    const std::vector<int>& items_0based);

// Fraction of seeds r with F(s, r) in S_r, exact over 2^t_hat.
Rat coverage_fraction(const Condenser& condenser, std::uint32_t s,
                      const MixtureSets& sets);

// 1 iff the number of fully covered columns reaches 2^k + 1.
int condenser_verdict(const Condenser& condenser,
                      const std::vector<std::uint8_t>& answers);
int condenser_verdict_sets(const Condenser& condenser, const MixtureSets& sets);

struct CondenserValidation {
  bool pass = false;
  ValidationMode mode = ValidationMode::exhaustive;
  std::int64_t zero_side_max = 0;  // sizes 0..this must decode 0
  std::int64_t one_side_size = 0;  // this size must decode 1
  std::uint64_t checked = 0;
  std::optional<std::vector<int>> witness;  // 0-based items
  int witness_expected = 0;
};

// Operational stand-in for the entropy condition: every defective set of
// size <= zero_certified_size() decodes 0 and every set of size 2^k + 1
// decodes 1. Coverage monotonicity extends both directions.
CondenserValidation validate_condenser_operational(const Condenser& condenser,
                                                   const ScanLimits& limits = {});

// Seeded random function tables until one validates; construction_error
// on exhaustion.
Condenser search_condenser(int n_hat, int t_hat, int m_hat, int k, int k_prime,
                           const Rat& eps, std::uint64_t seed,
                           int max_tries = 50, const ScanLimits& limits = {});

struct CondenserParams {
  int k_prime = 0;
  int k = 0;
};

// eps = 2/3 convention: k_prime = ceil(log2(ell/((1-eps)*delta^2))) and the
// largest k with 2^k < ell/delta. Throws when no such k exists or when the
// decode ranges would overlap.
CondenserParams condenser_params_for(const Rat& ell, const Rat& delta,
                                     const Rat& eps);

// GTCOND v1 header plus 2^(n_hat+t_hat) lines "s y F(s,y)" in hex, s major.
void write_condenser(std::ostream& out, const Condenser& condenser);
std::string condenser_to_string(const Condenser& condenser);
Condenser read_condenser(std::istream& in);
Condenser read_condenser_file(const std::string& path);
void write_condenser_file(const std::string& path, const Condenser& condenser);

// Recovers the function table from an induced design (kind = condenser).
Condenser condenser_from_design(const PoolingDesign& design);

class CondenserTester : public ThresholdTester {
 public:
  CondenserTester(Condenser condenser, Rat ell, Rat delta);
  const PoolingDesign& design() const override { return design_; }
  int run(const std::vector<std::uint8_t>& answers) const override;
  Rat ell() const override { return ell_; }
  Rat delta() const override { return delta_; }
  const Condenser& condenser() const { return condenser_; }

 private:
  Condenser condenser_;
  PoolingDesign design_;
  Rat ell_;
  Rat delta_;
};

struct CondenserSearchOptions {
  Rat eps = Rat(2, 3);
  int max_tries = 50;
};

class CondenserTesterFactory : public TesterFactory {
 public:
  CondenserTesterFactory(int n, Rat delta, std::uint64_t base_seed,
                         CondenserSearchOptions options = {},
                         ScanLimits limits = {});
  Rat min_ell() const override;  // delta^2
  std::unique_ptr<ThresholdTester> make(const Rat& ell) override;
  Method method() const override { return Method::condenser_ladder; }

 private:
  int n_;
  int n_hat_;
  Rat delta_;
  std::uint64_t base_seed_;
  CondenserSearchOptions options_;
  ScanLimits limits_;
};

}  // namespace gt

#endif
