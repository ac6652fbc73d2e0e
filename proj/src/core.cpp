#include "gt/core.hpp"

#include <bit>

namespace gt {

namespace {
constexpr int kWordBits = 64;

int word_count(int width) { return (width + kWordBits - 1) / kWordBits; }
}  // namespace

Pool::Pool(int width) : width_(width) {
  if (width < 0) throw std::invalid_argument("pool width must be >= 0");
  words_.assign(static_cast<std::size_t>(word_count(width)), 0);
}

Pool Pool::all(int width) {
  Pool p(width);
  for (int j = 1; j <= width; ++j) p.set(j);
  return p;
}

Pool Pool::from_indices(int width, std::span<const int> items_1based) {
  Pool p(width);
  for (int item : items_1based) p.set(item);
  return p;
}

void Pool::check_item(int item_1based) const {
  if (item_1based < 1 || item_1based > width_) {
    throw dimension_error("item index out of range");
  }
}

bool Pool::test(int item_1based) const {
  check_item(item_1based);
  int bit = item_1based - 1;
  return (words_[static_cast<std::size_t>(bit / kWordBits)] >>
          (bit % kWordBits)) &
         1u;
}

void Pool::set(int item_1based) {
  check_item(item_1based);
  int bit = item_1based - 1;
  words_[static_cast<std::size_t>(bit / kWordBits)] |=
      std::uint64_t{1} << (bit % kWordBits);
}

void Pool::reset(int item_1based) {
  check_item(item_1based);
  int bit = item_1based - 1;
  words_[static_cast<std::size_t>(bit / kWordBits)] &=
      ~(std::uint64_t{1} << (bit % kWordBits));
}

int Pool::count() const {
  int c = 0;
  for (std::uint64_t w : words_) c += std::popcount(w);
  return c;
}

bool Pool::intersects(const Pool& other) const {
  if (other.width_ != width_) throw dimension_error("pool width mismatch");
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if (words_[i] & other.words_[i]) return true;
  }
  return false;
}

bool Pool::is_subset_of(const Pool& other) const {
  if (other.width_ != width_) throw dimension_error("pool width mismatch");
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if (words_[i] & ~other.words_[i]) return false;
  }
  return true;
}

Pool Pool::operator|(const Pool& other) const {
  if (other.width_ != width_) throw dimension_error("pool width mismatch");
  Pool out = *this;
  for (std::size_t i = 0; i < words_.size(); ++i) {
    out.words_[i] |= other.words_[i];
  }
  return out;
}

Pool Pool::operator&(const Pool& other) const {
  if (other.width_ != width_) throw dimension_error("pool width mismatch");
  Pool out = *this;
  for (std::size_t i = 0; i < words_.size(); ++i) {
    out.words_[i] &= other.words_[i];
  }
  return out;
}

std::vector<int> Pool::indices() const {
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(count()));
  for (int j = 1; j <= width_; ++j) {
    if (test(j)) out.push_back(j);
  }
  return out;
}

std::string Pool::to_hex() const {
  int digits = (width_ + 3) / 4;
  std::string out(static_cast<std::size_t>(digits), '0');
  static const char* kHex = "0123456789abcdef";
  for (int d = 0; d < digits; ++d) {
    int bit = 4 * d;
    unsigned nib = static_cast<unsigned>(
        (words_[static_cast<std::size_t>(bit / kWordBits)] >>
         (bit % kWordBits)) &
        0xfu);
    out[static_cast<std::size_t>(digits - 1 - d)] = kHex[nib];
  }
  return out;
}

Pool Pool::from_hex(int width, const std::string& hex) {
  int digits = (width + 3) / 4;
  if (static_cast<int>(hex.size()) != digits) {
    throw dimension_error("row hex width mismatch");
  }
  Pool p(width);
  for (int d = 0; d < digits; ++d) {
    char c = hex[static_cast<std::size_t>(digits - 1 - d)];
    unsigned nib;
    if (c >= '0' && c <= '9') {
      nib = static_cast<unsigned>(c - '0');
    } else if (c >= 'a' && c <= 'f') {
      nib = static_cast<unsigned>(c - 'a' + 10);
    } else {
      throw std::invalid_argument("bad hex digit in design row");
    }
    for (int b = 0; b < 4; ++b) {
      if (!(nib >> b & 1u)) continue;
      int bit = 4 * d + b;
      if (bit >= width) throw std::invalid_argument("row bits beyond width");
      p.set(bit + 1);
    }
  }
  return p;
}

ItemUniverse::ItemUniverse(int n_items) : n(n_items) {
  if (n < 1) throw std::invalid_argument("universe needs n >= 1");
}

DefectiveSet::DefectiveSet(int width, std::span<const int> items_1based)
    : mask_(width) {
  for (int item : items_1based) {
    if (mask_.test(item)) {
      throw std::invalid_argument("duplicate defective index");
    }
    mask_.set(item);
  }
}

DefectiveSet DefectiveSet::from_mask(Pool mask) {
  return DefectiveSet(std::move(mask));
}

std::string design_kind_name(DesignKind kind) {
  switch (kind) {
    case DesignKind::bernoulli: return "bernoulli";
    case DesignKind::expander: return "expander";
    case DesignKind::condenser: return "condenser";
    case DesignKind::identity: return "identity";
  }
  throw std::logic_error("unknown design kind");
}

DesignKind parse_design_kind(const std::string& name) {
  if (name == "bernoulli") return DesignKind::bernoulli;
  if (name == "expander") return DesignKind::expander;
  if (name == "condenser") return DesignKind::condenser;
  if (name == "identity") return DesignKind::identity;
  throw std::invalid_argument("unknown design kind: " + name);
}

void PoolingDesign::check() const {
  for (const Pool& row : rows) {
    if (row.width() != n) throw dimension_error("design row width mismatch");
  }
}

PoolingDesign identity_design(int n) {
  PoolingDesign d;
  d.kind = DesignKind::identity;
  d.n = n;
  d.rows.reserve(static_cast<std::size_t>(n));
  for (int j = 1; j <= n; ++j) {
    Pool row(n);
    row.set(j);
    d.rows.push_back(std::move(row));
  }
  return d;
}

std::string method_name(Method m) {
  switch (m) {
    case Method::adaptive: return "adaptive";
    case Method::bernoulli_ladder: return "bernoulli-ladder";
    case Method::expander_ladder: return "expander-ladder";
    case Method::condenser_ladder: return "condenser-ladder";
  }
  throw std::logic_error("unknown method");
}

EstimationProblem::EstimationProblem(int n_items, int upper_bound, Rat factor)
    : n(n_items), upper_d(upper_bound), delta(std::move(factor)) {
  if (n < 1) throw std::invalid_argument("problem needs n >= 1");
  if (upper_d < 1 || upper_d > n) {
    throw std::invalid_argument("need 1 <= D <= n");
  }
  if (delta <= 1) throw std::invalid_argument("need delta > 1");
}

TestOracle::TestOracle(int n_items, const DefectiveSet& hidden)
    : universe_(n_items), hidden_(hidden.mask()) {
  if (hidden.width() != universe_.n) {
    throw dimension_error("hidden set width mismatch");
  }
}

int TestOracle::answer_pool(const Pool& pool) {
  if (pool.width() != universe_.n) {
    throw dimension_error("pool width does not match universe");
  }
  ++queries_made_;
  return pool.intersects(hidden_) ? 1 : 0;
}

std::vector<std::uint8_t> TestOracle::answer_design(
    const PoolingDesign& design) {
  if (design.n != universe_.n) {
    throw dimension_error("design column count does not match universe");
  }
  design.check();
  std::vector<std::uint8_t> answers;
  answers.reserve(design.rows.size());
  for (const Pool& row : design.rows) {
    answers.push_back(row.intersects(hidden_) ? 1 : 0);
    ++queries_made_;
  }
  return answers;
}

}  // namespace gt
