#ifndef GT_EXPANDER_HPP
#define GT_EXPANDER_HPP

#include <iosfwd>
#include <optional>

#include "gt/core.hpp"
#include "gt/ladder.hpp"
#include "gt/subsets.hpp"

namespace gt {

// Left-regular bipartite graph; left vertices are items, right vertices
// are tests. Neighbor lists are sorted and strictly inside [0, right_m).
struct BipartiteGraph {
  int left_n = 0;
  int right_m = 0;
  int degree = 0;
  std::vector<std::vector<int>> adjacency;  // per left vertex, 0-based
  std::uint64_t seed = 0;

  void check() const;
};

BipartiteGraph identity_graph(int n);
BipartiteGraph complete_graph(int n, int m);

// Each left vertex draws `degree` distinct right neighbors from
// mt19937_64(seed), vertices in order.
BipartiteGraph random_regular_graph(int n, int m, int degree,
                                    std::uint64_t seed);

// Row j pools every item whose neighborhood contains j.
PoolingDesign design_from_graph(const BipartiteGraph& graph);

// |Gamma(S)| for a 0-based left subset.
int neighborhood_size(const BipartiteGraph& graph, const std::vector<int>& subset);

struct ExpansionCertificate {
  int k = 0;
  Rat a;
  ValidationMode checked = ValidationMode::exhaustive;
  bool pass = false;
  std::uint64_t subsets_checked = 0;
  std::optional<std::vector<int>> witness;  // 0-based left subset
};

// Verifies |Gamma(S)| >= a|S| for every left subset with |S| <= k
// (exhaustively within the enumeration budget, sampled past it).
ExpansionCertificate validate_expansion(const BipartiteGraph& graph, int k,
                                        const Rat& a,
                                        const ScanLimits& limits = {});

// 1 iff the number of positive answers reaches a*k (exact comparison).
int expander_verdict(const BipartiteGraph& graph,
                     const ExpansionCertificate& certificate,
                     const std::vector<std::uint8_t>& answers);

// GTGRAPH v1 header plus one sorted neighbor line per left vertex.
void write_graph(std::ostream& out, const BipartiteGraph& graph);
std::string graph_to_string(const BipartiteGraph& graph);
BipartiteGraph read_graph(std::istream& in);
BipartiteGraph read_graph_file(const std::string& path);
void write_graph_file(const std::string& path, const BipartiteGraph& graph);

class ExpanderTester : public ThresholdTester {
 public:
  ExpanderTester(BipartiteGraph graph, int k, Rat a, Rat ell, Rat delta);
  const PoolingDesign& design() const override { return design_; }
  int run(const std::vector<std::uint8_t>& answers) const override;
  Rat ell() const override { return ell_; }
  Rat delta() const override { return delta_; }
  const BipartiteGraph& graph() const { return graph_; }
  int k() const { return k_; }
  const Rat& a() const { return a_; }

 private:
  BipartiteGraph graph_;
  PoolingDesign design_;
  int k_;
  Rat a_;
  Rat ell_;
  Rat delta_;
};

// Wraps a certified (k, a)-expander as a threshold tester after checking
// that k/r covers ell/delta^2 from below and k covers ell/delta from above.
std::unique_ptr<ThresholdTester> expander_tester_from_graph(
    BipartiteGraph graph, int k, const Rat& a, const Rat& ell,
    const Rat& delta);

struct ExpanderSearchOptions {
  int degree = 4;
  int right_m_override = 0;  // 0 = heuristic 4*degree*k
  int max_graphs = 50;
};

// r = min(delta, 2), k = ceil(r*ell/delta^2), a = degree/r; draws seeded
// random regular graphs until one certifies, else construction_error.
class ExpanderTesterFactory : public TesterFactory {
 public:
  ExpanderTesterFactory(int n, Rat delta, std::uint64_t base_seed,
                        ExpanderSearchOptions options = {},
                        ScanLimits limits = {});
  Rat min_ell() const override;  // delta^2
  std::unique_ptr<ThresholdTester> make(const Rat& ell) override;
  Method method() const override { return Method::expander_ladder; }

 private:
  int n_;
  Rat delta_;
  std::uint64_t base_seed_;
  ExpanderSearchOptions options_;
  ScanLimits limits_;
};

}  // namespace gt

#endif
