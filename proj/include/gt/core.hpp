#ifndef GT_CORE_HPP
#define GT_CORE_HPP

#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "gt/ratio.hpp"

namespace gt {

struct dimension_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Thrown when a sample-and-validate search exhausts its budget. Carries a
// short description of the best attempt seen so the caller can report it.
struct construction_error : std::runtime_error {
  explicit construction_error(const std::string& what,
                              std::string best = std::string())
      : std::runtime_error(what), best_attempt(std::move(best)) {}
  std::string best_attempt;
};

// A set of items encoded as a bit vector of width n. Items are 1-based:
// bit j of the mask holds item j+1. One Pool is one group test.
class Pool {
 public:
  Pool() = default;
  explicit Pool(int width);

  static Pool all(int width);
  static Pool from_indices(int width, std::span<const int> items_1based);

  int width() const { return width_; }
  bool test(int item_1based) const;
  void set(int item_1based);
  void reset(int item_1based);

  int count() const;
  bool empty() const { return count() == 0; }
  bool intersects(const Pool& other) const;
  bool is_subset_of(const Pool& other) const;

  Pool operator|(const Pool& other) const;
  Pool operator&(const Pool& other) const;
  bool operator==(const Pool& other) const = default;

  // Ascending 1-based item indices.
  std::vector<int> indices() const;

  // Row encoding used by design files: the mask read as an integer
  // (item j+1 at weight 2^j), lowercase hex, zero-padded to ceil(n/4)
  // digits.
  std::string to_hex() const;
  static Pool from_hex(int width, const std::string& hex);

  const std::vector<std::uint64_t>& words() const { return words_; }

 private:
  void check_item(int item_1based) const;
  int width_ = 0;
  std::vector<std::uint64_t> words_;
};

struct ItemUniverse {
  int n = 0;
  explicit ItemUniverse(int n_items);
};

// The hidden set I. Estimator code never sees it; it exists to build a
// TestOracle and to let harnesses compute ground truth they already know.
class DefectiveSet {
 public:
  DefectiveSet(int width, std::span<const int> items_1based);
  static DefectiveSet from_mask(Pool mask);

  int width() const { return mask_.width(); }
  int size() const { return mask_.count(); }
  const Pool& mask() const { return mask_; }

 private:
  explicit DefectiveSet(Pool mask) : mask_(std::move(mask)) {}
  Pool mask_;
};

enum class DesignKind { bernoulli, expander, condenser, identity };

std::string design_kind_name(DesignKind kind);
DesignKind parse_design_kind(const std::string& name);

// A t x n boolean test matrix plus the metadata needed to replay its
// construction and its decision rule. meta is an ordered key/value map so
// serialization is canonical.
struct PoolingDesign {
  DesignKind kind = DesignKind::identity;
  int n = 0;
  std::uint64_t seed = 0;
  std::vector<Pool> rows;
  std::map<std::string, std::string> meta;

  int t() const { return static_cast<int>(rows.size()); }
  void check() const;  // every row width equals n
};

PoolingDesign identity_design(int n);

enum class Method { adaptive, bernoulli_ladder, expander_ladder, condenser_ladder };

std::string method_name(Method m);

// n items, an upper bound on the defective count, and the multiplicative
// estimation factor (a rational > 1).
struct EstimationProblem {
  int n = 0;
  int upper_d = 0;
  Rat delta;

  EstimationProblem(int n_items, int upper_bound, Rat factor);
  Rat delta_sq() const { return delta * delta; }
};

struct EstimateReport {
  Rat estimate;
  std::uint64_t tests_used = 0;
  Method method = Method::adaptive;
  Rat bound_reference;
  // Set when the run fell through to the ladder's bottom-rung policy on a
  // residual range too wide for the factor guarantee.
  bool bottom_gap = false;
};

// Answers group tests against a hidden defective set and counts every
// answer given. Estimators receive only this interface.
//
// Not thread-safe: per the documented concurrency contract an oracle is
// confined to one thread; batch answering inside answer_design is
// sequential.
class TestOracle {
 public:
  TestOracle(int n_items, const DefectiveSet& hidden);

  int n() const { return universe_.n; }

  // 1 iff the pool intersects the hidden set; ledger +1.
  int answer_pool(const Pool& pool);

  // Row-by-row answers; ledger +t.
  std::vector<std::uint8_t> answer_design(const PoolingDesign& design);

  std::uint64_t queries_made() const { return queries_made_; }

 private:
  ItemUniverse universe_;
  Pool hidden_;
  std::uint64_t queries_made_ = 0;
};

}  // namespace gt

#endif
