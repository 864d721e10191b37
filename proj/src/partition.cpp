#include "aco/partition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "aco/rng.hpp"

namespace aco {

std::string to_string(Scheme s) {
  switch (s) {
    case Scheme::random: return "random";
    case Scheme::greedy: return "greedy";
    case Scheme::hyper: return "hyper";
  }
  return "?";
}

Scheme scheme_from_string(const std::string& s) {
  if (s == "random") return Scheme::random;
  if (s == "greedy") return Scheme::greedy;
  if (s == "hyper") return Scheme::hyper;
  throw ValidationError("unknown scheme: " + s);
}

bool Assignment::sub_on_machine(NodeId i, std::uint32_t m) const {
  auto b = sub_replicas.begin() + sub_rep_offsets[i];
  auto e = sub_replicas.begin() + sub_rep_offsets[i + 1];
  return std::binary_search(b, e, m);
}

bool Assignment::con_on_machine(NodeId l, std::uint32_t m) const {
  auto b = con_replicas.begin() + con_rep_offsets[l];
  auto e = con_replicas.begin() + con_rep_offsets[l + 1];
  return std::binary_search(b, e, m);
}

void Assignment::derive_replicas(const BipartiteGraph& g) {
  const std::size_t ns = g.num_subproblems();
  const std::size_t nc = g.num_consensus();
  sub_rep_offsets.assign(ns + 1, 0);
  con_rep_offsets.assign(nc + 1, 0);
  sub_replicas.clear();
  con_replicas.clear();

  std::vector<std::uint32_t> scratch;
  for (NodeId i = 0; i < ns; ++i) {
    scratch.clear();
    for (EdgeId e = g.sub_begin(i); e < g.sub_end(i); ++e) {
      scratch.push_back(edge_owner[e]);
    }
    std::sort(scratch.begin(), scratch.end());
    scratch.erase(std::unique(scratch.begin(), scratch.end()), scratch.end());
    sub_replicas.insert(sub_replicas.end(), scratch.begin(), scratch.end());
    sub_rep_offsets[i + 1] = sub_replicas.size();
  }
  for (NodeId l = 0; l < nc; ++l) {
    scratch.clear();
    for (std::size_t p = g.con_begin(l); p < g.con_end(l); ++p) {
      const auto& pin = g.pin(p);
      EdgeId e = g.sub_begin(pin.sub) + pin.slot;
      scratch.push_back(edge_owner[e]);
    }
    std::sort(scratch.begin(), scratch.end());
    scratch.erase(std::unique(scratch.begin(), scratch.end()), scratch.end());
    con_replicas.insert(con_replicas.end(), scratch.begin(), scratch.end());
    con_rep_offsets[l + 1] = con_replicas.size();
  }
  sub_master.resize(ns);
  con_master.resize(nc);
  for (NodeId i = 0; i < ns; ++i) sub_master[i] = sub_replicas[sub_rep_offsets[i]];
  for (NodeId l = 0; l < nc; ++l) con_master[l] = con_replicas[con_rep_offsets[l]];
}

Assignment partition_random(const BipartiteGraph& g, std::uint32_t machines,
                            std::uint64_t seed) {
  Assignment a;
  a.machines = machines;
  a.scheme = Scheme::random;
  a.edge_owner.resize(g.num_edges());
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    std::uint64_t h = mix64(seed ^ mix64(e + 0x51ed2701a4aull));
    a.edge_owner[e] = static_cast<std::uint32_t>(
        (static_cast<__uint128_t>(h) * machines) >> 64);
  }
  a.derive_replicas(g);
  return a;
}

double expected_rf_random(const BipartiteGraph& g, std::uint32_t machines) {
  const double m = machines;
  const double keep = 1.0 - 1.0 / m;
  double acc = 0.0;
  for (NodeId l = 0; l < g.num_consensus(); ++l) {
    acc += 1.0 - std::pow(keep, static_cast<double>(g.con_degree(l)));
  }
  for (NodeId i = 0; i < g.num_subproblems(); ++i) {
    acc += 1.0 - std::pow(keep, static_cast<double>(g.sub_degree(i)));
  }
  const double nv =
      static_cast<double>(g.num_subproblems() + g.num_consensus());
  return m / nv * acc;
}

namespace {

// least-loaded machine among `set` (all machines when set is null);
// ties broken toward the lowest machine id.
std::uint32_t least_loaded(const std::vector<std::size_t>& loads,
                           const std::vector<std::uint32_t>* set) {
  std::uint32_t best = 0;
  std::size_t best_load = std::numeric_limits<std::size_t>::max();
  if (set) {
    for (std::uint32_t m : *set) {
      if (loads[m] < best_load) {
        best_load = loads[m];
        best = m;
      }
    }
  } else {
    for (std::uint32_t m = 0; m < loads.size(); ++m) {
      if (loads[m] < best_load) {
        best_load = loads[m];
        best = m;
      }
    }
  }
  return best;
}

void sorted_insert(std::vector<std::uint32_t>& v, std::uint32_t m) {
  auto it = std::lower_bound(v.begin(), v.end(), m);
  if (it == v.end() || *it != m) v.insert(it, m);
}

}  // namespace

Assignment partition_greedy(const BipartiteGraph& g, std::uint32_t machines) {
  Assignment a;
  a.machines = machines;
  a.scheme = Scheme::greedy;
  a.edge_owner.resize(g.num_edges());

  std::vector<std::vector<std::uint32_t>> sub_set(g.num_subproblems());
  std::vector<std::vector<std::uint32_t>> con_set(g.num_consensus());
  std::vector<std::size_t> loads(machines, 0);
  std::vector<std::size_t> sub_remaining(g.num_subproblems());
  std::vector<std::size_t> con_remaining(g.num_consensus());
  for (NodeId i = 0; i < g.num_subproblems(); ++i) {
    sub_remaining[i] = g.sub_degree(i);
  }
  for (NodeId l = 0; l < g.num_consensus(); ++l) {
    con_remaining[l] = g.con_degree(l);
  }

  std::vector<std::uint32_t> inter;
  for (NodeId i = 0; i < g.num_subproblems(); ++i) {
    for (EdgeId e = g.sub_begin(i); e < g.sub_end(i); ++e) {
      const NodeId l = g.edge_target(e);
      auto& au = sub_set[i];
      auto& av = con_set[l];
      std::uint32_t m;
      if (au.empty() && av.empty()) {
        m = least_loaded(loads, nullptr);
      } else if (av.empty()) {
        m = least_loaded(loads, &au);
      } else if (au.empty()) {
        m = least_loaded(loads, &av);
      } else {
        inter.clear();
        std::set_intersection(au.begin(), au.end(), av.begin(), av.end(),
                              std::back_inserter(inter));
        if (!inter.empty()) {
          m = least_loaded(loads, &inter);
        } else {
          // both assigned, disjoint: follow the vertex with the most
          // unassigned edges (tie: the subproblem endpoint)
          const auto& set =
              (con_remaining[l] > sub_remaining[i]) ? av : au;
          m = least_loaded(loads, &set);
        }
      }
      a.edge_owner[e] = m;
      sorted_insert(au, m);
      sorted_insert(av, m);
      ++loads[m];
      --sub_remaining[i];
      --con_remaining[l];
    }
  }
  a.derive_replicas(g);
  return a;
}

PartitionMetrics metrics(const BipartiteGraph& g, const Assignment& a) {
  PartitionMetrics pm;
  const std::size_t ns = g.num_subproblems();
  const std::size_t nc = g.num_consensus();

  std::size_t replicas = a.sub_replicas.size() + a.con_replicas.size();
  pm.replication_factor = static_cast<double>(replicas) /
                          static_cast<double>(ns + nc);

  std::vector<std::size_t> edge_counts(a.machines, 0);
  for (EdgeId e = 0; e < g.num_edges(); ++e) ++edge_counts[a.edge_owner[e]];
  pm.max_edges_per_machine =
      *std::max_element(edge_counts.begin(), edge_counts.end());
  pm.min_edges_per_machine =
      *std::min_element(edge_counts.begin(), edge_counts.end());

  std::vector<std::size_t> sub_counts(a.machines, 0);
  for (NodeId i = 0; i < ns; ++i) ++sub_counts[a.sub_master[i]];
  pm.max_subs_per_machine =
      *std::max_element(sub_counts.begin(), sub_counts.end());
  pm.min_subs_per_machine =
      *std::min_element(sub_counts.begin(), sub_counts.end());

  const double fair = static_cast<double>(g.num_edges()) / a.machines;
  pm.imbalance = fair > 0 ? pm.max_edges_per_machine / fair : 1.0;

  if (a.scheme == Scheme::hyper) {
    for (NodeId l = 0; l < nc; ++l) {
      auto t = static_cast<std::int64_t>(a.con_replica_count(l));
      if (t >= 2) {
        pm.soed += t;
        ++pm.cut_hyperedges;
      }
    }
  }
  return pm;
}

}  // namespace aco
