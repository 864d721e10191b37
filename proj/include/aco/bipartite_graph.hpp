#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace aco {

using NodeId = std::uint32_t;
using EdgeId = std::uint64_t;

struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GenerationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bipartite computation graph G(S, C, E): subproblem nodes S, consensus
// nodes C. The adjacency of subproblem i is the ordered slot list M(i, .):
// slot j of subproblem i refers to consensus node sub_adj(i)[j]. Edge ids
// are positions in the subproblem-major slot array, so edge order is
// (ascending subproblem id, then slot).
class BipartiteGraph {
 public:
  BipartiteGraph() = default;

  // adj[i] = sorted, duplicate-free consensus ids of subproblem i.
  // Throws ValidationError on degree-floor or duplicate violations.
  static BipartiteGraph from_adjacency(std::vector<std::vector<NodeId>> adj,
                                       std::size_t num_consensus);

  std::size_t num_subproblems() const { return sub_offsets_.size() - 1; }
  std::size_t num_consensus() const { return num_consensus_; }
  std::size_t num_edges() const { return sub_adj_.size(); }

  std::size_t sub_degree(NodeId i) const {
    return sub_offsets_[i + 1] - sub_offsets_[i];
  }
  std::size_t con_degree(NodeId l) const {
    return con_offsets_[l + 1] - con_offsets_[l];
  }

  EdgeId sub_begin(NodeId i) const { return sub_offsets_[i]; }
  EdgeId sub_end(NodeId i) const { return sub_offsets_[i + 1]; }
  // Consensus node referenced by edge e (= slot within its subproblem).
  NodeId edge_target(EdgeId e) const { return sub_adj_[e]; }

  struct Pin {
    NodeId sub;
    std::uint32_t slot;
  };
  std::size_t con_begin(NodeId l) const { return con_offsets_[l]; }
  std::size_t con_end(NodeId l) const { return con_offsets_[l + 1]; }
  // Pins of consensus l in ascending subproblem order.
  const Pin& pin(std::size_t idx) const { return con_pins_[idx]; }

  // Subproblem owning edge e.
  NodeId edge_source(EdgeId e) const;

  bool operator==(const BipartiteGraph& other) const {
    return num_consensus_ == other.num_consensus_ &&
           sub_offsets_ == other.sub_offsets_ && sub_adj_ == other.sub_adj_;
  }

 private:
  std::size_t num_consensus_ = 0;
  std::vector<EdgeId> sub_offsets_{0};
  std::vector<NodeId> sub_adj_;
  std::vector<std::size_t> con_offsets_{0};
  std::vector<Pin> con_pins_;
  // edge_source lookup: sub id per edge.
  std::vector<NodeId> edge_sub_;
};

// Hypergraph view: vertices are subproblems, hyperedge l is the pin set of
// consensus node l. Unit vertex weights unless set otherwise.
class Hypergraph {
 public:
  Hypergraph() = default;
  Hypergraph(std::size_t num_vertices,
             std::vector<std::vector<NodeId>> hyperedges);

  std::size_t num_vertices() const { return num_vertices_; }
  std::size_t num_hyperedges() const { return offsets_.size() - 1; }
  std::size_t num_pins() const { return pins_.size(); }

  std::size_t pins_begin(NodeId e) const { return offsets_[e]; }
  std::size_t pins_end(NodeId e) const { return offsets_[e + 1]; }
  NodeId pin(std::size_t idx) const { return pins_[idx]; }
  std::size_t edge_size(NodeId e) const { return offsets_[e + 1] - offsets_[e]; }

  const std::vector<std::uint32_t>& vertex_weights() const { return weights_; }

 private:
  std::size_t num_vertices_ = 0;
  std::vector<std::size_t> offsets_{0};
  std::vector<NodeId> pins_;
  std::vector<std::uint32_t> weights_;
};

Hypergraph to_hypergraph(const BipartiteGraph& g);
// Inverse of to_hypergraph (pin sets become consensus adjacency).
BipartiteGraph to_bipartite(const Hypergraph& h);

struct GeneratorConfig {
  double alpha = 2.0;       // power-law exponent of consensus degrees
  double lambda = 2.0;      // Poisson mean of subproblem degrees
  std::size_t num_consensus = 0;
  std::size_t max_degree = 0;  // 0 = auto: min(2*|C|, 1'000'000), at least 2
  std::uint64_t seed = 0;

  std::size_t resolved_max_degree() const;
  void validate() const;  // throws ValidationError
};

BipartiteGraph generate_bipartite(const GeneratorConfig& cfg);

struct DegreeStats {
  std::size_t num_subproblems = 0;
  std::size_t num_consensus = 0;
  std::size_t num_edges = 0;
  std::size_t min_sub_degree = 0, max_sub_degree = 0;
  std::size_t min_con_degree = 0, max_con_degree = 0;
  double mean_sub_degree = 0.0;
  double mean_con_degree = 0.0;
  double ratio = 0.0;  // |S| / |C|
};

DegreeStats degree_stats(const BipartiteGraph& g);

}  // namespace aco
