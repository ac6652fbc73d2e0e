#include "gt/condenser.hpp"

#include <bit>
#include <fstream>
#include <sstream>

#include "gt/design_io.hpp"
#include "gt/rng.hpp"

namespace gt {

namespace {

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (char c : text) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string hex_u32(std::uint32_t v) {
  std::ostringstream os;
  os << std::hex << v;
  return os.str();
}

std::uint32_t parse_hex_u32(const std::string& text) {
  return static_cast<std::uint32_t>(std::stoul(text, nullptr, 16));
}

}  // namespace

std::uint32_t Condenser::eval(std::uint32_t s, std::uint32_t y) const {
  return table[(static_cast<std::size_t>(s) << t_hat) | y];
}

std::int64_t Condenser::zero_certified_size() const {
  Rat bound = (1 - eps) * rat_of(std::int64_t{1} << k_prime);
  return to_i64(ceil_rat(bound)) - 1;
}

void Condenser::check() const {
  if (n_hat < 1 || n_hat > 6 || t_hat < 0 || t_hat > 4 || m_hat < 1 ||
      m_hat > 6) {
    throw std::invalid_argument("condenser widths out of desk-scale range");
  }
  if (k < 0 || k_prime < 0 || sgn(eps) < 0 || eps >= 1) {
    throw std::invalid_argument("bad condenser parameters");
  }
  if (table.size() != (std::size_t{1} << (n_hat + t_hat))) {
    throw std::invalid_argument("condenser table size mismatch");
  }
  for (std::uint16_t v : table) {
    if (v >= (1u << m_hat)) {
      throw std::invalid_argument("condenser table value out of range");
    }
  }
}

Condenser injective_condenser(int n_hat, int t_hat, int k, int k_prime,
                              Rat eps) {
  Condenser c;
  c.n_hat = n_hat;
  c.t_hat = t_hat;
  c.m_hat = n_hat;
  c.k = k;
  c.k_prime = k_prime;
  c.eps = std::move(eps);
  c.table.resize(std::size_t{1} << (n_hat + t_hat));
  for (std::uint32_t s = 0; s < (1u << n_hat); ++s) {
    for (std::uint32_t y = 0; y < (1u << t_hat); ++y) {
      c.table[(static_cast<std::size_t>(s) << t_hat) | y] =
          static_cast<std::uint16_t>(s);
    }
  }
  c.check();
  return c;
}

PoolingDesign induce_design(const Condenser& condenser,
                            const InduceBudget& budget) {
  condenser.check();
  std::uint64_t rows =
      std::uint64_t{1} << (condenser.t_hat + condenser.m_hat);
  std::uint64_t items = std::uint64_t{1} << condenser.n_hat;
  if (rows > budget.max_rows || items > budget.max_items) {
    throw std::invalid_argument("induced design exceeds size budget");
  }
  PoolingDesign design;
  design.kind = DesignKind::condenser;
  design.n = static_cast<int>(items);
  design.seed = condenser.seed;
  design.rows.reserve(rows);
  for (std::uint32_t r = 0; r < (1u << condenser.t_hat); ++r) {
    for (std::uint32_t j = 0; j < (1u << condenser.m_hat); ++j) {
      Pool row(design.n);
      for (std::uint32_t s = 0; s < items; ++s) {
        if (condenser.eval(s, r) == j) row.set(static_cast<int>(s) + 1);
      }
      design.rows.push_back(std::move(row));
    }
  }
  design.meta["nhat"] = std::to_string(condenser.n_hat);
  design.meta["that"] = std::to_string(condenser.t_hat);
  design.meta["mhat"] = std::to_string(condenser.m_hat);
  design.meta["k"] = std::to_string(condenser.k);
  design.meta["kprime"] = std::to_string(condenser.k_prime);
  design.meta["eps"] = rational_to_string(condenser.eps);
  return design;
}

int MixtureSets::size_of(std::uint32_t r) const {
  return std::popcount(sets[r]);
}

MixtureSets mixture_from_answers(const Condenser& condenser,
                                 const std::vector<std::uint8_t>& answers) {
  std::size_t expected = std::size_t{1}
                         << (condenser.t_hat + condenser.m_hat);
  if (answers.size() != expected) {
    throw dimension_error("answer vector length does not match 2^(t+m)");
  }
  MixtureSets sets;
  sets.t_hat = condenser.t_hat;
  sets.m_hat = condenser.m_hat;
  sets.sets.assign(std::size_t{1} << condenser.t_hat, 0);
  for (std::uint32_t r = 0; r < (1u << condenser.t_hat); ++r) {
    for (std::uint32_t j = 0; j < (1u << condenser.m_hat); ++j) {
      if (answers[(static_cast<std::size_t>(r) << condenser.m_hat) | j]) {
        sets.sets[r] |= std::uint64_t{1} << j;
      }
    }
  }
  return sets;
}

MixtureSets mixture_from_defectives(const Condenser& condenser,
                                    const std::vector<int>& items_0based) {
  MixtureSets sets;
  sets.t_hat = condenser.t_hat;
  sets.m_hat = condenser.m_hat;
  sets.sets.assign(std::size_t{1} << condenser.t_hat, 0);
  for (int s : items_0based) {
    for (std::uint32_t r = 0; r < (1u << condenser.t_hat); ++r) {
      sets.sets[r] |= std::uint64_t{1}
                      << condenser.eval(static_cast<std::uint32_t>(s), r);
    }
  }
  return sets;
}

Rat coverage_fraction(const Condenser& condenser, std::uint32_t s,
                      const MixtureSets& sets) {
  int covered = 0;
  for (std::uint32_t r = 0; r < (1u << condenser.t_hat); ++r) {
    covered += sets.contains(r, condenser.eval(s, r));
  }
  Rat out(covered, 1 << condenser.t_hat);
  out.canonicalize();
  return out;
}

int condenser_verdict_sets(const Condenser& condenser,
                           const MixtureSets& sets) {
  std::int64_t fully_covered = 0;
  for (std::uint32_t s = 0; s < (1u << condenser.n_hat); ++s) {
    bool full = true;
    for (std::uint32_t r = 0; full && r < (1u << condenser.t_hat); ++r) {
      full = sets.contains(r, condenser.eval(s, r));
    }
    fully_covered += full;
  }
  return fully_covered >= (std::int64_t{1} << condenser.k) + 1 ? 1 : 0;
}

int condenser_verdict(const Condenser& condenser,
                      const std::vector<std::uint8_t>& answers) {
  return condenser_verdict_sets(condenser,
                                mixture_from_answers(condenser, answers));
}

CondenserValidation validate_condenser_operational(const Condenser& condenser,
                                                   const ScanLimits& limits) {
  condenser.check();
  CondenserValidation result;
  result.zero_side_max = condenser.zero_certified_size();
  result.one_side_size = (std::int64_t{1} << condenser.k) + 1;
  const int items = condenser.items();
  if (result.zero_side_max >= result.one_side_size) {
    throw std::invalid_argument("condenser decode ranges overlap");
  }

  const std::uint64_t budget = resolve_enum_budget(limits);
  std::uint64_t total = 0;
  for (std::int64_t size = 0; size <= result.zero_side_max; ++size) {
    total += binomial_capped(items, static_cast<int>(size), budget);
  }
  total += binomial_capped(items, static_cast<int>(result.one_side_size),
                           budget);
  const bool exhaustive = total <= budget;
  result.mode =
      exhaustive ? ValidationMode::exhaustive : ValidationMode::sampled;

  auto run_size = [&](std::int64_t size, int expected) -> bool {
    if (size < 0 || size > items) return true;
    auto check = [&](const std::vector<int>& subset) {
      MixtureSets sets = mixture_from_defectives(condenser, subset);
      return condenser_verdict_sets(condenser, sets) == expected;
    };
    ScanOutcome outcome;
    if (exhaustive) {
      std::uint64_t count =
          binomial_capped(items, static_cast<int>(size), budget);
      outcome = scan_ksubsets(items, static_cast<int>(size), check,
                              resolve_threads(limits, count));
    } else {
      outcome = scan_ksubsets_sampled(items, static_cast<int>(size),
                                      limits.sample_count, limits.sample_seed,
                                      check);
    }
    result.checked += outcome.checked;
    if (!outcome.all_passed) {
      result.witness = outcome.first_failure;
      result.witness_expected = expected;
      return false;
    }
    return true;
  };

  result.pass = true;
  for (std::int64_t size = 0; size <= result.zero_side_max && result.pass;
       ++size) {
    result.pass = run_size(size, 0);
  }
  if (result.pass) result.pass = run_size(result.one_side_size, 1);
  return result;
}

Condenser search_condenser(int n_hat, int t_hat, int m_hat, int k, int k_prime,
                           const Rat& eps, std::uint64_t seed, int max_tries,
                           const ScanLimits& limits) {
  std::string best;
  for (int attempt = 0; attempt < max_tries; ++attempt) {
    Condenser c;
    c.n_hat = n_hat;
    c.t_hat = t_hat;
    c.m_hat = m_hat;
    c.k = k;
    c.k_prime = k_prime;
    c.eps = eps;
    c.seed = derive_seed(seed, static_cast<std::uint64_t>(attempt));
    c.table.resize(std::size_t{1} << (n_hat + t_hat));
    std::mt19937_64 gen(c.seed);
    for (auto& cell : c.table) {
      cell = static_cast<std::uint16_t>(
          bounded_u64(gen, std::uint64_t{1} << m_hat));
    }
    CondenserValidation validation = validate_condenser_operational(c, limits);
    if (validation.pass && validation.mode == ValidationMode::exhaustive) {
      return c;
    }
    best = "attempt=" + std::to_string(attempt) +
           " seed=" + std::to_string(c.seed) +
           (validation.pass ? " sampled-only" : " failed");
  }
  throw construction_error("no validated condenser found", best);
}

CondenserParams condenser_params_for(const Rat& ell, const Rat& delta,
                                     const Rat& eps) {
  if (sgn(eps) <= 0 || eps >= 1) throw std::invalid_argument("need 0<eps<1");
  CondenserParams params;
  // Smallest k_prime with (1-eps)*2^k_prime >= ell/delta^2.
  Rat target = ell / (delta * delta) / (1 - eps);
  params.k_prime = 0;
  while (Rat(Int(1) << params.k_prime) < target) ++params.k_prime;
  // Largest k with 2^k < ell/delta (and one decodable size above zero side).
  Rat fire_bound = ell / delta;
  if (fire_bound <= 1) {
    throw std::invalid_argument("parameters give 2^k >= ell/delta for all k");
  }
  params.k = 0;
  while (Rat(Int(1) << (params.k + 1)) < fire_bound) ++params.k;
  // Decode ranges must stay disjoint: every size <= ceil((1-eps)2^k')-1
  // decodes 0, size 2^k+1 decodes 1.
  Rat zero_top = (1 - eps) * Rat(Int(1) << params.k_prime);
  if (to_i64(ceil_rat(zero_top)) - 1 >= (std::int64_t{1} << params.k) + 1) {
    throw std::invalid_argument("condenser decode ranges overlap");
  }
  return params;
}

void write_condenser(std::ostream& out, const Condenser& condenser) {
  condenser.check();
  out << "GTCOND v1 nhat=" << condenser.n_hat << " that=" << condenser.t_hat
      << " mhat=" << condenser.m_hat << " k=" << condenser.k
      << " kprime=" << condenser.k_prime << " eps="
      << rational_to_string(condenser.eps.get_den() == 1
                                ? Rat(condenser.eps.get_num(), 1)
                                : condenser.eps)
      << " seed=" << condenser.seed << "\n";
  for (std::uint32_t s = 0; s < (1u << condenser.n_hat); ++s) {
    for (std::uint32_t y = 0; y < (1u << condenser.t_hat); ++y) {
      out << hex_u32(s) << ' ' << hex_u32(y) << ' '
          << hex_u32(condenser.eval(s, y)) << "\n";
    }
  }
}

std::string condenser_to_string(const Condenser& condenser) {
  std::ostringstream os;
  write_condenser(os, condenser);
  return os.str();
}

Condenser read_condenser(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) {
    throw std::invalid_argument("empty condenser stream");
  }
  std::istringstream header(line);
  std::string magic, version, token;
  header >> magic >> version;
  if (magic != "GTCOND" || version != "v1") {
    throw std::invalid_argument("not a GTCOND v1 header");
  }
  Condenser c;
  while (header >> token) {
    std::size_t eq = token.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("malformed condenser header token");
    }
    std::string key = token.substr(0, eq);
    std::string value = token.substr(eq + 1);
    if (key == "nhat") c.n_hat = std::stoi(value);
    else if (key == "that") c.t_hat = std::stoi(value);
    else if (key == "mhat") c.m_hat = std::stoi(value);
    else if (key == "k") c.k = std::stoi(value);
    else if (key == "kprime") c.k_prime = std::stoi(value);
    else if (key == "eps") c.eps = parse_rational(value);
    else if (key == "seed") c.seed = std::stoull(value);
    else throw std::invalid_argument("unknown condenser header key: " + key);
  }
  c.table.assign(std::size_t{1} << (c.n_hat + c.t_hat), 0);
  std::vector<bool> seen(c.table.size(), false);
  for (std::size_t i = 0; i < c.table.size(); ++i) {
    if (!std::getline(in, line)) {
      throw std::invalid_argument("condenser table truncated");
    }
    std::istringstream row(line);
    std::string s_text, y_text, v_text;
    if (!(row >> s_text >> y_text >> v_text)) {
      throw std::invalid_argument("malformed condenser table line");
    }
    std::uint32_t s = parse_hex_u32(s_text);
    std::uint32_t y = parse_hex_u32(y_text);
    std::size_t idx = (static_cast<std::size_t>(s) << c.t_hat) | y;
    if (idx >= c.table.size() || seen[idx]) {
      throw std::invalid_argument("bad condenser table index");
    }
    seen[idx] = true;
    c.table[idx] = static_cast<std::uint16_t>(parse_hex_u32(v_text));
  }
  c.check();
  return c;
}

Condenser read_condenser_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open condenser file: " + path);
  return read_condenser(in);
}

void write_condenser_file(const std::string& path, const Condenser& condenser) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write condenser file: " + path);
  write_condenser(out, condenser);
}

Condenser condenser_from_design(const PoolingDesign& design) {
  if (design.kind != DesignKind::condenser) {
    throw std::invalid_argument("not a condenser design");
  }
  Condenser c;
  c.n_hat = std::stoi(meta_at(design, "nhat"));
  c.t_hat = std::stoi(meta_at(design, "that"));
  c.m_hat = std::stoi(meta_at(design, "mhat"));
  c.k = std::stoi(meta_at(design, "k"));
  c.k_prime = std::stoi(meta_at(design, "kprime"));
  c.eps = parse_rational(meta_at(design, "eps"));
  c.seed = design.seed;
  if (design.n != (1 << c.n_hat) ||
      design.t() != (1 << (c.t_hat + c.m_hat))) {
    throw std::invalid_argument("design dimensions do not match meta");
  }
  c.table.assign(std::size_t{1} << (c.n_hat + c.t_hat), 0);
  std::vector<bool> seen(c.table.size(), false);
  for (std::uint32_t r = 0; r < (1u << c.t_hat); ++r) {
    for (std::uint32_t j = 0; j < (1u << c.m_hat); ++j) {
      const Pool& row =
          design.rows[(static_cast<std::size_t>(r) << c.m_hat) | j];
      for (int item : row.indices()) {
        std::size_t idx =
            (static_cast<std::size_t>(item - 1) << c.t_hat) | r;
        if (seen[idx]) {
          throw std::invalid_argument("design is not a value partition");
        }
        seen[idx] = true;
        c.table[idx] = static_cast<std::uint16_t>(j);
      }
    }
  }
  for (bool s : seen) {
    if (!s) throw std::invalid_argument("design misses some (item, seed) cell");
  }
  c.check();
  return c;
}

CondenserTester::CondenserTester(Condenser condenser, Rat ell, Rat delta)
    : condenser_(std::move(condenser)),
      design_(induce_design(condenser_)),
      ell_(std::move(ell)),
      delta_(std::move(delta)) {
  design_.meta["ell"] = rational_to_string(ell_);
  design_.meta["delta"] = rational_to_string(delta_);
}

int CondenserTester::run(const std::vector<std::uint8_t>& answers) const {
  return condenser_verdict(condenser_, answers);
}

CondenserTesterFactory::CondenserTesterFactory(int n, Rat delta,
                                               std::uint64_t base_seed,
                                               CondenserSearchOptions options,
                                               ScanLimits limits)
    : n_(n),
      delta_(std::move(delta)),
      base_seed_(base_seed),
      options_(std::move(options)),
      limits_(limits) {
  n_hat_ = 0;
  while ((1 << n_hat_) < n_) ++n_hat_;
  if ((1 << n_hat_) != n_) {
    throw std::invalid_argument("condenser ladder needs n to be a power of 2");
  }
}

Rat CondenserTesterFactory::min_ell() const { return delta_ * delta_; }

std::unique_ptr<ThresholdTester> CondenserTesterFactory::make(const Rat& ell) {
  CondenserParams params = condenser_params_for(ell, delta_, options_.eps);
  std::uint64_t seed = derive_seed(base_seed_, fnv1a(rational_to_string(ell)));
  // Smallest function table whose induced tester validates: grow the value
  // width first (cheaper rows than seed width).
  std::string best;
  for (int t_hat = 1; t_hat <= 3; ++t_hat) {
    for (int m_hat = std::max(2, params.k); m_hat <= 6; ++m_hat) {
      try {
        Condenser c =
            search_condenser(n_hat_, t_hat, m_hat, params.k, params.k_prime,
                             options_.eps, derive_seed(seed, static_cast<std::uint64_t>(t_hat * 8 + m_hat)),
                             options_.max_tries, limits_);
        return std::make_unique<CondenserTester>(std::move(c), ell, delta_);
      } catch (const construction_error& err) {
        best = err.what();
      }
    }
  }
  throw construction_error("no condenser tester at these parameters", best);
}

}  // namespace gt
