#include "gt/expander.hpp"

#include <algorithm>
#include <bit>
#include <fstream>
#include <sstream>

#include "gt/design_io.hpp"
#include "gt/rng.hpp"

namespace gt {

namespace {

std::string fnv_key(const Rat& v) { return rational_to_string(v); }

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (char c : text) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ull;
  }
  return h;
}

// Per-vertex neighborhoods as bit blocks over the right side.
std::vector<std::vector<std::uint64_t>> neighbor_masks(
    const BipartiteGraph& graph) {
  std::size_t blocks = static_cast<std::size_t>((graph.right_m + 63) / 64);
  std::vector<std::vector<std::uint64_t>> masks(
      static_cast<std::size_t>(graph.left_n),
      std::vector<std::uint64_t>(blocks, 0));
  for (int v = 0; v < graph.left_n; ++v) {
    for (int u : graph.adjacency[static_cast<std::size_t>(v)]) {
      masks[static_cast<std::size_t>(v)][static_cast<std::size_t>(u / 64)] |=
          std::uint64_t{1} << (u % 64);
    }
  }
  return masks;
}

}  // namespace

void BipartiteGraph::check() const {
  if (left_n < 1 || right_m < 1 || degree < 1 || degree > right_m) {
    throw std::invalid_argument("bad bipartite graph dimensions");
  }
  if (static_cast<int>(adjacency.size()) != left_n) {
    throw std::invalid_argument("adjacency size mismatch");
  }
  for (const auto& nbrs : adjacency) {
    if (static_cast<int>(nbrs.size()) != degree) {
      throw std::invalid_argument("graph is not left-regular");
    }
    for (std::size_t i = 0; i < nbrs.size(); ++i) {
      if (nbrs[i] < 0 || nbrs[i] >= right_m) {
        throw std::invalid_argument("neighbor index out of range");
      }
      if (i > 0 && nbrs[i] <= nbrs[i - 1]) {
        throw std::invalid_argument("neighbor list not sorted/distinct");
      }
    }
  }
}

BipartiteGraph identity_graph(int n) {
  BipartiteGraph g;
  g.left_n = n;
  g.right_m = n;
  g.degree = 1;
  g.adjacency.resize(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) g.adjacency[static_cast<std::size_t>(v)] = {v};
  g.check();
  return g;
}

BipartiteGraph complete_graph(int n, int m) {
  BipartiteGraph g;
  g.left_n = n;
  g.right_m = m;
  g.degree = m;
  std::vector<int> all(static_cast<std::size_t>(m));
  for (int u = 0; u < m; ++u) all[static_cast<std::size_t>(u)] = u;
  g.adjacency.assign(static_cast<std::size_t>(n), all);
  g.check();
  return g;
}

BipartiteGraph random_regular_graph(int n, int m, int degree,
                                    std::uint64_t seed) {
  BipartiteGraph g;
  g.left_n = n;
  g.right_m = m;
  g.degree = degree;
  g.seed = seed;
  g.adjacency.resize(static_cast<std::size_t>(n));
  std::mt19937_64 gen(seed);
  for (int v = 0; v < n; ++v) {
    std::vector<int> nbrs = random_ksubset(gen, m, degree);
    for (int& u : nbrs) --u;  // to 0-based right indices
    g.adjacency[static_cast<std::size_t>(v)] = std::move(nbrs);
  }
  g.check();
  return g;
}

PoolingDesign design_from_graph(const BipartiteGraph& graph) {
  graph.check();
  PoolingDesign design;
  design.kind = DesignKind::expander;
  design.n = graph.left_n;
  design.seed = graph.seed;
  design.rows.assign(static_cast<std::size_t>(graph.right_m),
                     Pool(graph.left_n));
  for (int v = 0; v < graph.left_n; ++v) {
    for (int u : graph.adjacency[static_cast<std::size_t>(v)]) {
      design.rows[static_cast<std::size_t>(u)].set(v + 1);
    }
  }
  design.meta["m"] = std::to_string(graph.right_m);
  design.meta["reg_degree"] = std::to_string(graph.degree);
  return design;
}

int neighborhood_size(const BipartiteGraph& graph,
                      const std::vector<int>& subset) {
  std::size_t blocks = static_cast<std::size_t>((graph.right_m + 63) / 64);
  std::vector<std::uint64_t> acc(blocks, 0);
  for (int v : subset) {
    for (int u : graph.adjacency.at(static_cast<std::size_t>(v))) {
      acc[static_cast<std::size_t>(u / 64)] |= std::uint64_t{1} << (u % 64);
    }
  }
  int total = 0;
  for (std::uint64_t w : acc) total += std::popcount(w);
  return total;
}

ExpansionCertificate validate_expansion(const BipartiteGraph& graph, int k,
                                        const Rat& a,
                                        const ScanLimits& limits) {
  graph.check();
  if (k < 1 || k > graph.left_n) {
    throw std::invalid_argument("need 1 <= k <= |L|");
  }
  ExpansionCertificate cert;
  cert.k = k;
  cert.a = a;
  cert.pass = true;

  const auto masks = neighbor_masks(graph);
  const std::size_t blocks = masks.empty() ? 1 : masks[0].size();
  const std::uint64_t budget = resolve_enum_budget(limits);

  std::uint64_t total = 0;
  for (int size = 1; size <= k; ++size) {
    total += binomial_capped(graph.left_n, size, budget);
    if (total > budget) break;
  }
  const bool exhaustive = total <= budget;
  cert.checked = exhaustive ? ValidationMode::exhaustive
                            : ValidationMode::sampled;

  for (int size = 1; size <= k && cert.pass; ++size) {
    // |Gamma(S)| >= ceil(a*size) as an integer comparison.
    int needed = static_cast<int>(to_i64(ceil_rat(a * rat_of(size))));
    auto check = [&](const std::vector<int>& subset) {
      std::vector<std::uint64_t> acc(blocks, 0);
      for (int v : subset) {
        const auto& mask = masks[static_cast<std::size_t>(v)];
        for (std::size_t b = 0; b < blocks; ++b) acc[b] |= mask[b];
      }
      int got = 0;
      for (std::uint64_t w : acc) got += std::popcount(w);
      return got >= needed;
    };
    ScanOutcome outcome;
    if (exhaustive) {
      std::uint64_t count = binomial_capped(graph.left_n, size, budget);
      outcome = scan_ksubsets(graph.left_n, size, check,
                              resolve_threads(limits, count));
    } else {
      outcome = scan_ksubsets_sampled(graph.left_n, size, limits.sample_count,
                                      limits.sample_seed, check);
    }
    cert.subsets_checked += outcome.checked;
    if (!outcome.all_passed) {
      cert.pass = false;
      cert.witness = outcome.first_failure;
    }
  }
  return cert;
}

int expander_verdict(const BipartiteGraph& graph,
                     const ExpansionCertificate& certificate,
                     const std::vector<std::uint8_t>& answers) {
  if (static_cast<int>(answers.size()) != graph.right_m) {
    throw dimension_error("answer vector length does not match m");
  }
  std::int64_t positives = 0;
  for (std::uint8_t x : answers) positives += (x != 0);
  return rat_of(positives) >= certificate.a * rat_of(certificate.k) ? 1 : 0;
}

void write_graph(std::ostream& out, const BipartiteGraph& graph) {
  graph.check();
  out << "GTGRAPH v1 n=" << graph.left_n << " m=" << graph.right_m
      << " delta=" << graph.degree << " seed=" << graph.seed << "\n";
  for (const auto& nbrs : graph.adjacency) {
    for (std::size_t i = 0; i < nbrs.size(); ++i) {
      if (i) out << ' ';
      out << nbrs[i];
    }
    out << "\n";
  }
}

std::string graph_to_string(const BipartiteGraph& graph) {
  std::ostringstream os;
  write_graph(os, graph);
  return os.str();
}

BipartiteGraph read_graph(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("empty graph stream");
  std::istringstream header(line);
  std::string magic, version, token;
  header >> magic >> version;
  if (magic != "GTGRAPH" || version != "v1") {
    throw std::invalid_argument("not a GTGRAPH v1 header");
  }
  BipartiteGraph g;
  while (header >> token) {
    std::size_t eq = token.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("malformed graph header token");
    }
    std::string key = token.substr(0, eq);
    std::string value = token.substr(eq + 1);
    if (key == "n") g.left_n = std::stoi(value);
    else if (key == "m") g.right_m = std::stoi(value);
    else if (key == "delta") g.degree = std::stoi(value);
    else if (key == "seed") g.seed = std::stoull(value);
    else throw std::invalid_argument("unknown graph header key: " + key);
  }
  g.adjacency.resize(static_cast<std::size_t>(g.left_n));
  for (int v = 0; v < g.left_n; ++v) {
    if (!std::getline(in, line)) {
      throw std::invalid_argument("graph truncated");
    }
    std::istringstream row(line);
    int u;
    while (row >> u) g.adjacency[static_cast<std::size_t>(v)].push_back(u);
  }
  g.check();
  return g;
}

BipartiteGraph read_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open graph file: " + path);
  return read_graph(in);
}

void write_graph_file(const std::string& path, const BipartiteGraph& graph) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write graph file: " + path);
  write_graph(out, graph);
}

ExpanderTester::ExpanderTester(BipartiteGraph graph, int k, Rat a, Rat ell,
                               Rat delta)
    : graph_(std::move(graph)),
      design_(design_from_graph(graph_)),
      k_(k),
      a_(std::move(a)),
      ell_(std::move(ell)),
      delta_(std::move(delta)) {
  design_.meta["k"] = std::to_string(k_);
  design_.meta["a"] = rational_to_string(a_);
  design_.meta["ell"] = rational_to_string(ell_);
  design_.meta["delta"] = rational_to_string(delta_);
}

int ExpanderTester::run(const std::vector<std::uint8_t>& answers) const {
  if (static_cast<int>(answers.size()) != design_.t()) {
    throw dimension_error("answer vector length does not match m");
  }
  std::int64_t positives = 0;
  for (std::uint8_t x : answers) positives += (x != 0);
  return rat_of(positives) >= a_ * rat_of(k_) ? 1 : 0;
}

std::unique_ptr<ThresholdTester> expander_tester_from_graph(
    BipartiteGraph graph, int k, const Rat& a, const Rat& ell,
    const Rat& delta) {
  graph.check();
  // Contract coverage: silent side needs a*k/degree >= ell/delta^2, firing
  // side needs k <= ceil(ell/delta) so integer d >= ell/delta implies d >= k.
  Rat silent_bound = a * rat_of(k) / rat_of(graph.degree);
  if (silent_bound < ell / (delta * delta)) {
    throw std::invalid_argument("expander parameters miss ell/delta^2");
  }
  if (rat_of(k) > Rat(ceil_rat(ell / delta))) {
    throw std::invalid_argument("expander parameters miss ell/delta");
  }
  return std::make_unique<ExpanderTester>(std::move(graph), k, a, ell, delta);
}

ExpanderTesterFactory::ExpanderTesterFactory(int n, Rat delta,
                                             std::uint64_t base_seed,
                                             ExpanderSearchOptions options,
                                             ScanLimits limits)
    : n_(n),
      delta_(std::move(delta)),
      base_seed_(base_seed),
      options_(options),
      limits_(limits) {}

Rat ExpanderTesterFactory::min_ell() const { return delta_ * delta_; }

std::unique_ptr<ThresholdTester> ExpanderTesterFactory::make(const Rat& ell) {
  Rat r = std::min(delta_, Rat(2));
  Rat delta_sq = delta_ * delta_;
  int k = static_cast<int>(to_i64(ceil_rat(r * ell / delta_sq)));
  if (k < 1) throw std::invalid_argument("expander factory needs ell >= delta^2");
  if (k > n_) {
    throw construction_error("expander target k exceeds item count");
  }
  int degree = options_.degree;
  Rat a = rat_of(degree) / r;
  int m = options_.right_m_override
              ? options_.right_m_override
              : std::max(degree, 4 * degree * k);

  std::string best;
  for (int attempt = 0; attempt < options_.max_graphs; ++attempt) {
    std::uint64_t seed = derive_seed(
        base_seed_, fnv1a(fnv_key(ell)) + static_cast<std::uint64_t>(attempt));
    BipartiteGraph graph = random_regular_graph(n_, m, degree, seed);
    ExpansionCertificate cert = validate_expansion(graph, k, a, limits_);
    if (cert.pass && cert.checked == ValidationMode::exhaustive) {
      return expander_tester_from_graph(std::move(graph), k, a, ell, delta_);
    }
    std::ostringstream os;
    os << "attempt=" << attempt << " seed=" << seed << " k=" << k
       << " a=" << rational_to_string(a)
       << (cert.pass ? " sampled-only" : " failed");
    best = os.str();
  }
  throw construction_error("no certified expander found", best);
}

}  // namespace gt
