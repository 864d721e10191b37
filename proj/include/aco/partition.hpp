#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "aco/bipartite_graph.hpp"

namespace aco {

enum class Scheme { random, greedy, hyper };

std::string to_string(Scheme s);
Scheme scheme_from_string(const std::string& s);

// Edge -> machine placement plus the derived vertex replica sets A(v) and
// master designations. Replica sets are stored CSR-style, sorted by machine.
struct Assignment {
  std::uint32_t machines = 1;
  Scheme scheme = Scheme::random;
  std::vector<std::uint32_t> edge_owner;  // by edge id

  std::vector<std::size_t> sub_rep_offsets;
  std::vector<std::uint32_t> sub_replicas;
  std::vector<std::size_t> con_rep_offsets;
  std::vector<std::uint32_t> con_replicas;
  std::vector<std::uint32_t> sub_master;
  std::vector<std::uint32_t> con_master;

  std::size_t sub_replica_count(NodeId i) const {
    return sub_rep_offsets[i + 1] - sub_rep_offsets[i];
  }
  std::size_t con_replica_count(NodeId l) const {
    return con_rep_offsets[l + 1] - con_rep_offsets[l];
  }
  bool sub_on_machine(NodeId i, std::uint32_t m) const;
  bool con_on_machine(NodeId l, std::uint32_t m) const;

  // Rebuilds replica sets and masters from edge_owner. Masters default to
  // the lowest machine id in A(v); hyper assignments override afterwards.
  void derive_replicas(const BipartiteGraph& g);
};

struct PartitionMetrics {
  double replication_factor = 1.0;
  std::int64_t soed = 0;           // sum of external degrees (hyper view)
  std::int64_t cut_hyperedges = 0; // consensus nodes spanning >= 2 machines
  std::size_t max_edges_per_machine = 0, min_edges_per_machine = 0;
  std::size_t max_subs_per_machine = 0, min_subs_per_machine = 0;
  double imbalance = 1.0;  // max edges per machine / (|E|/M)
};

Assignment partition_random(const BipartiteGraph& g, std::uint32_t machines,
                            std::uint64_t seed);

// Closed-form expectation of the replication factor under random edge
// placement, evaluated on the empirical degree sequence.
double expected_rf_random(const BipartiteGraph& g, std::uint32_t machines);

Assignment partition_greedy(const BipartiteGraph& g, std::uint32_t machines);

// Multilevel hypergraph partitioning (recursive bisection with
// heavy-connectivity coarsening and FM refinement). Subproblems are never
// cut; consensus replicas follow their pins.
Assignment partition_hyper(const BipartiteGraph& g, const Hypergraph& h,
                           std::uint32_t machines, double beta,
                           std::uint64_t seed = 1);

// Machine of each hypergraph vertex under a hyper assignment.
std::vector<std::uint32_t> hyper_vertex_parts(const Assignment& a,
                                              const BipartiteGraph& g);

// Fiduccia-Mattheyses refinement of a vertex->part map with the
// sum-of-external-degrees gain. Never worsens SOED, never breaks the
// beta * W / parts balance bound. Stops after `passes` non-improving passes.
void fm_refine(const Hypergraph& h, std::vector<std::uint32_t>& part,
               std::uint32_t num_parts, double beta, int passes);

// Assignment-level wrapper around the refinement pass.
Assignment fm_refine(const BipartiteGraph& g, const Hypergraph& h,
                     const Assignment& a, double beta, int passes);

std::int64_t soed_of_parts(const Hypergraph& h,
                           const std::vector<std::uint32_t>& part,
                           std::uint32_t num_parts);

PartitionMetrics metrics(const BipartiteGraph& g, const Assignment& a);

}  // namespace aco
