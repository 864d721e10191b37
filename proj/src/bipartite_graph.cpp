#include "aco/bipartite_graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "aco/rng.hpp"

namespace aco {

BipartiteGraph BipartiteGraph::from_adjacency(
    std::vector<std::vector<NodeId>> adj, std::size_t num_consensus) {
  BipartiteGraph g;
  g.num_consensus_ = num_consensus;
  g.sub_offsets_.assign(1, 0);
  g.sub_offsets_.reserve(adj.size() + 1);

  std::vector<std::size_t> con_deg(num_consensus, 0);
  std::size_t num_edges = 0;
  for (std::size_t i = 0; i < adj.size(); ++i) {
    auto& nbrs = adj[i];
    if (nbrs.empty()) {
      throw ValidationError("subproblem " + std::to_string(i) +
                            " has degree 0 (must be >= 1)");
    }
    if (!std::is_sorted(nbrs.begin(), nbrs.end())) {
      std::sort(nbrs.begin(), nbrs.end());
    }
    if (std::adjacent_find(nbrs.begin(), nbrs.end()) != nbrs.end()) {
      throw ValidationError("subproblem " + std::to_string(i) +
                            " has a duplicate consensus edge");
    }
    for (NodeId l : nbrs) {
      if (l >= num_consensus) {
        throw ValidationError("subproblem " + std::to_string(i) +
                              " references consensus id " + std::to_string(l) +
                              " >= |C|");
      }
      ++con_deg[l];
    }
    num_edges += nbrs.size();
    g.sub_offsets_.push_back(num_edges);
  }
  for (std::size_t l = 0; l < num_consensus; ++l) {
    if (con_deg[l] < 2) {
      throw ValidationError("consensus node " + std::to_string(l) +
                            " has degree " + std::to_string(con_deg[l]) +
                            " (must be >= 2)");
    }
  }

  g.sub_adj_.reserve(num_edges);
  g.edge_sub_.reserve(num_edges);
  for (std::size_t i = 0; i < adj.size(); ++i) {
    for (NodeId l : adj[i]) {
      g.sub_adj_.push_back(l);
      g.edge_sub_.push_back(static_cast<NodeId>(i));
    }
  }

  // Reverse adjacency (exact transpose, pins in ascending subproblem order).
  g.con_offsets_.assign(num_consensus + 1, 0);
  for (std::size_t l = 0; l < num_consensus; ++l) {
    g.con_offsets_[l + 1] = g.con_offsets_[l] + con_deg[l];
  }
  g.con_pins_.resize(num_edges);
  std::vector<std::size_t> cursor(g.con_offsets_.begin(),
                                  g.con_offsets_.end() - 1);
  for (std::size_t i = 0; i < adj.size(); ++i) {
    std::uint32_t slot = 0;
    for (NodeId l : adj[i]) {
      g.con_pins_[cursor[l]++] = Pin{static_cast<NodeId>(i), slot};
      ++slot;
    }
  }
  return g;
}

NodeId BipartiteGraph::edge_source(EdgeId e) const { return edge_sub_[e]; }

Hypergraph::Hypergraph(std::size_t num_vertices,
                       std::vector<std::vector<NodeId>> hyperedges)
    : num_vertices_(num_vertices) {
  offsets_.assign(1, 0);
  offsets_.reserve(hyperedges.size() + 1);
  for (auto& pins : hyperedges) {
    if (pins.size() < 2) {
      throw ValidationError("hyperedge with fewer than 2 pins");
    }
    std::sort(pins.begin(), pins.end());
    for (NodeId v : pins) pins_.push_back(v);
    offsets_.push_back(pins_.size());
  }
  weights_.assign(num_vertices_, 1);
}

Hypergraph to_hypergraph(const BipartiteGraph& g) {
  std::vector<std::vector<NodeId>> edges(g.num_consensus());
  for (NodeId l = 0; l < g.num_consensus(); ++l) {
    edges[l].reserve(g.con_degree(l));
    for (std::size_t p = g.con_begin(l); p < g.con_end(l); ++p) {
      edges[l].push_back(g.pin(p).sub);
    }
  }
  return Hypergraph(g.num_subproblems(), std::move(edges));
}

BipartiteGraph to_bipartite(const Hypergraph& h) {
  std::vector<std::vector<NodeId>> adj(h.num_vertices());
  for (NodeId e = 0; e < h.num_hyperedges(); ++e) {
    for (std::size_t p = h.pins_begin(e); p < h.pins_end(e); ++p) {
      adj[h.pin(p)].push_back(e);
    }
  }
  return BipartiteGraph::from_adjacency(std::move(adj), h.num_hyperedges());
}

std::size_t GeneratorConfig::resolved_max_degree() const {
  if (max_degree != 0) return max_degree;
  std::size_t d = std::min<std::size_t>(2 * num_consensus, 1'000'000);
  return std::max<std::size_t>(d, 2);
}

void GeneratorConfig::validate() const {
  if (!(alpha > 1.0)) throw ValidationError("generator: alpha must be > 1");
  if (!(lambda > 0.0)) throw ValidationError("generator: lambda must be > 0");
  if (num_consensus < 1) {
    throw ValidationError("generator: num_consensus must be >= 1");
  }
  if (max_degree != 0 && max_degree < 2) {
    throw ValidationError("generator: max_degree must be >= 2");
  }
}

namespace {

// Inverse-CDF sampler over d in [2, dmax] with P(d) proportional to d^-alpha.
class PowerLawSampler {
 public:
  PowerLawSampler(double alpha, std::size_t dmax) : cdf_(dmax - 1) {
    double acc = 0.0;
    for (std::size_t d = 2; d <= dmax; ++d) {
      acc += std::pow(static_cast<double>(d), -alpha);
      cdf_[d - 2] = acc;
    }
    for (double& c : cdf_) c /= acc;
  }

  std::size_t sample(Rng& rng) const {
    double u = rng.uniform01();
    auto it = std::lower_bound(cdf_.begin(), cdf_.end(), u);
    return static_cast<std::size_t>(it - cdf_.begin()) + 2;
  }

 private:
  std::vector<double> cdf_;
};

}  // namespace

BipartiteGraph generate_bipartite(const GeneratorConfig& cfg) {
  cfg.validate();
  // stream offset keeps the generator's draws decoupled from other seed
  // consumers (partitioners etc.) that may share user-facing seed values
  constexpr std::uint64_t kGeneratorStream = 14;
  Rng rng(mix64(cfg.seed + kGeneratorStream));
  const std::size_t dmax = cfg.resolved_max_degree();
  const std::size_t num_con = cfg.num_consensus;

  PowerLawSampler pl(cfg.alpha, dmax);
  std::vector<std::size_t> con_deg(num_con);
  std::size_t con_sum = 0;
  for (auto& d : con_deg) {
    d = pl.sample(rng);
    con_sum += d;
  }

  // Subproblem degrees: Poisson(lambda) conditioned on >= 1, drawn until the
  // degree sums match; the final overshooting draw is trimmed to the residual
  // (always >= 1). Table-I-style graphs can need up to ~12|C| subproblems,
  // so the sampling budget is 20|C|.
  const std::size_t max_samples = 20 * num_con;
  std::vector<std::size_t> sub_deg;
  sub_deg.reserve(static_cast<std::size_t>(con_sum / cfg.lambda) + 16);
  std::size_t sub_sum = 0;
  while (sub_sum < con_sum) {
    if (sub_deg.size() >= max_samples) {
      throw GenerationError(
          "generator: degree sums not matched within sample budget");
    }
    std::size_t d = rng.poisson_ge1(cfg.lambda);
    if (sub_sum + d > con_sum) d = con_sum - sub_sum;
    sub_deg.push_back(d);
    sub_sum += d;
  }

  const std::size_t num_sub = sub_deg.size();
  const std::size_t num_edges = con_sum;

  // Configuration-model wiring: shuffle the consensus stub list and deal it
  // out to subproblem slots in order.
  std::vector<NodeId> stubs;
  stubs.reserve(num_edges);
  for (std::size_t l = 0; l < num_con; ++l) {
    for (std::size_t k = 0; k < con_deg[l]; ++k) {
      stubs.push_back(static_cast<NodeId>(l));
    }
  }
  for (std::size_t i = num_edges - 1; i > 0; --i) {
    std::size_t j = rng.uniform_below(i + 1);
    std::swap(stubs[i], stubs[j]);
  }

  std::vector<EdgeId> offsets(num_sub + 1, 0);
  for (std::size_t i = 0; i < num_sub; ++i) {
    offsets[i + 1] = offsets[i] + sub_deg[i];
  }
  // Duplicate-edge repair: swap a duplicated stub with a random stub until
  // every subproblem's slot list is duplicate-free. Swap budget is |E|.
  auto has_dup = [&](std::size_t i) -> std::size_t {
    // returns stub index of a duplicated slot, or SIZE_MAX
    for (std::size_t a = offsets[i]; a < offsets[i + 1]; ++a) {
      for (std::size_t b = a + 1; b < offsets[i + 1]; ++b) {
        if (stubs[a] == stubs[b]) return b;
      }
    }
    return SIZE_MAX;
  };

  std::size_t swaps = 0;
  const std::size_t swap_budget = std::max<std::size_t>(num_edges, 1024);
  bool clean = false;
  while (!clean) {
    clean = true;
    for (std::size_t i = 0; i < num_sub; ++i) {
      std::size_t bad;
      while ((bad = has_dup(i)) != SIZE_MAX) {
        if (swaps++ >= swap_budget) {
          throw GenerationError(
              "generator: duplicate-edge repair did not terminate");
        }
        std::size_t j = rng.uniform_below(num_edges);
        std::swap(stubs[bad], stubs[j]);
        clean = false;  // the partner subproblem is re-checked next pass
      }
    }
  }

  std::vector<std::vector<NodeId>> adj(num_sub);
  for (std::size_t i = 0; i < num_sub; ++i) {
    adj[i].assign(stubs.begin() + offsets[i], stubs.begin() + offsets[i + 1]);
    std::sort(adj[i].begin(), adj[i].end());
  }
  return BipartiteGraph::from_adjacency(std::move(adj), num_con);
}

DegreeStats degree_stats(const BipartiteGraph& g) {
  DegreeStats s;
  s.num_subproblems = g.num_subproblems();
  s.num_consensus = g.num_consensus();
  s.num_edges = g.num_edges();
  s.min_sub_degree = SIZE_MAX;
  s.min_con_degree = SIZE_MAX;
  for (NodeId i = 0; i < g.num_subproblems(); ++i) {
    std::size_t d = g.sub_degree(i);
    s.min_sub_degree = std::min(s.min_sub_degree, d);
    s.max_sub_degree = std::max(s.max_sub_degree, d);
  }
  for (NodeId l = 0; l < g.num_consensus(); ++l) {
    std::size_t d = g.con_degree(l);
    s.min_con_degree = std::min(s.min_con_degree, d);
    s.max_con_degree = std::max(s.max_con_degree, d);
  }
  if (s.num_subproblems == 0) s.min_sub_degree = 0;
  if (s.num_consensus == 0) s.min_con_degree = 0;
  s.mean_sub_degree = s.num_subproblems
                          ? static_cast<double>(s.num_edges) / s.num_subproblems
                          : 0.0;
  s.mean_con_degree = s.num_consensus
                          ? static_cast<double>(s.num_edges) / s.num_consensus
                          : 0.0;
  s.ratio = s.num_consensus ? static_cast<double>(s.num_subproblems) /
                                  static_cast<double>(s.num_consensus)
                            : 0.0;
  return s;
}

}  // namespace aco
