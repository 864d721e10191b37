#include <algorithm>
#include <cmath>
#include <unordered_set>
#include <vector>

#include "aco/rng.hpp"
#include "aco/subproblem.hpp"

namespace aco {

void VoterConfig::validate() const {
  if (num_persons < 1) throw ValidationError("voter: num_persons must be >= 1");
  if (num_parties < 1) throw ValidationError("voter: num_parties must be >= 1");
  const double degs[] = {deg_knows_well, deg_knows, deg_boss, deg_mentor,
                         deg_older_relative};
  for (double d : degs) {
    if (d < 0.0) throw ValidationError("voter: relation degree < 0");
  }
  if (registration_fraction < 0.0 || registration_fraction > 1.0) {
    throw ValidationError("voter: registration_fraction outside [0, 1]");
  }
}

namespace {

// Directed relation edges: `count ~ persons * mean_degree` distinct pairs.
std::vector<std::pair<NodeId, NodeId>> sample_relation(std::size_t persons,
                                                       double mean_degree,
                                                       Rng& rng) {
  std::vector<std::pair<NodeId, NodeId>> edges;
  if (persons < 2) return edges;
  const auto target = static_cast<std::size_t>(
      std::llround(static_cast<double>(persons) * mean_degree));
  std::unordered_set<std::uint64_t> seen;
  edges.reserve(target);
  std::size_t attempts = 0;
  while (edges.size() < target && attempts < 20 * target + 100) {
    ++attempts;
    auto b = static_cast<NodeId>(rng.uniform_below(persons));
    auto a = static_cast<NodeId>(rng.uniform_below(persons));
    if (a == b) continue;
    std::uint64_t key = (static_cast<std::uint64_t>(b) << 32) | a;
    if (seen.insert(key).second) edges.emplace_back(b, a);
  }
  return edges;
}

struct RawSub {
  SubproblemSpec::Kind kind;
  std::vector<NodeId> vars;  // pre-elimination variable ids
  double weight = 0.0;       // hinge only
  std::vector<double> a;
  double offset = 0.0;
};

}  // namespace

GroundedModel ground_voter_model(const VoterConfig& cfg) {
  cfg.validate();
  Rng rng(cfg.seed);
  const std::size_t P = cfg.num_persons;
  const std::size_t K = cfg.num_parties;
  const std::size_t num_vars = P * K;  // Votes(person, party)
  auto var_of = [K](std::size_t person, std::size_t party) {
    return static_cast<NodeId>(person * K + party);
  };

  // Influence rules: Votes(A,P) & Rel(B,A) -> Votes(B,P), hinge-relaxed as
  // w * max(0, v_AP - v_BP) per present relation edge and party.
  struct Relation {
    double weight;
    double mean_degree;
  };
  const Relation relations[] = {
      {0.3, cfg.deg_knows_well}, {0.1, cfg.deg_knows},
      {0.05, cfg.deg_boss},      {0.1, cfg.deg_mentor},
      {0.7, cfg.deg_older_relative},
  };

  std::vector<RawSub> subs;
  for (const auto& rel : relations) {
    for (auto [b, a] : sample_relation(P, rel.mean_degree, rng)) {
      for (std::size_t p = 0; p < K; ++p) {
        RawSub s;
        s.kind = SubproblemSpec::Kind::hinge;
        s.vars = {var_of(a, p), var_of(b, p)};
        s.a = {1.0, -1.0};
        s.offset = 0.0;
        s.weight = rel.weight;
        subs.push_back(std::move(s));
      }
    }
  }

  // Registration: RegisteredAs(A,P*) -> Votes(A,P*), with the observation
  // fixed to 1: 0.5 * max(0, 1 - v_AP*).
  for (std::size_t person = 0; person < P; ++person) {
    if (rng.uniform01() < cfg.registration_fraction) {
      std::size_t party = rng.uniform_below(K);
      RawSub s;
      s.kind = SubproblemSpec::Kind::hinge;
      s.vars = {var_of(person, party)};
      s.a = {-1.0};
      s.offset = 1.0;
      s.weight = 0.5;
      subs.push_back(std::move(s));
    }
  }

  // Mutual exclusivity: one simplex per person over its party variables.
  for (std::size_t person = 0; person < P; ++person) {
    RawSub s;
    s.kind = SubproblemSpec::Kind::simplex;
    s.vars.reserve(K);
    for (std::size_t p = 0; p < K; ++p) s.vars.push_back(var_of(person, p));
    subs.push_back(std::move(s));
  }

  // Degree floor: consensus variables with < 2 incident subproblems are
  // eliminated (fixed to 0 and folded into hinge offsets; simplexes shrink).
  // Elimination can empty a subproblem, which lowers other degrees, so
  // iterate to a fixpoint.
  std::vector<char> var_alive(num_vars, 1);
  std::vector<char> sub_alive(subs.size(), 1);
  for (;;) {
    std::vector<std::size_t> deg(num_vars, 0);
    for (std::size_t i = 0; i < subs.size(); ++i) {
      if (!sub_alive[i]) continue;
      for (NodeId v : subs[i].vars) ++deg[v];
    }
    bool changed = false;
    for (std::size_t v = 0; v < num_vars; ++v) {
      if (var_alive[v] && deg[v] < 2) {
        var_alive[v] = 0;
        changed = true;
      }
    }
    if (!changed) break;
    for (std::size_t i = 0; i < subs.size(); ++i) {
      if (!sub_alive[i]) continue;
      auto& s = subs[i];
      std::vector<NodeId> kept;
      std::vector<double> kept_a;
      for (std::size_t k = 0; k < s.vars.size(); ++k) {
        if (var_alive[s.vars[k]]) {
          kept.push_back(s.vars[k]);
          if (s.kind == SubproblemSpec::Kind::hinge) kept_a.push_back(s.a[k]);
        }
        // dropped variables contribute their fixed value 0 to a^T x, so no
        // offset adjustment is needed
      }
      s.vars = std::move(kept);
      s.a = std::move(kept_a);
      if (s.vars.empty()) sub_alive[i] = 0;
    }
  }

  // Compact variable ids and emit graph + specs.
  std::vector<NodeId> var_id(num_vars, 0);
  std::size_t next = 0;
  for (std::size_t v = 0; v < num_vars; ++v) {
    if (var_alive[v]) var_id[v] = static_cast<NodeId>(next++);
  }
  if (next == 0) throw GenerationError("voter: grounding produced no variables");

  GroundedModel out;
  out.dropped_variables = num_vars - next;
  std::vector<std::vector<NodeId>> adj;
  for (std::size_t i = 0; i < subs.size(); ++i) {
    if (!sub_alive[i]) continue;
    auto& s = subs[i];
    SubproblemSpec spec;
    spec.kind = s.kind;
    // slot order follows the sorted graph adjacency
    std::vector<std::size_t> perm(s.vars.size());
    for (std::size_t k = 0; k < perm.size(); ++k) perm[k] = k;
    std::sort(perm.begin(), perm.end(), [&](std::size_t x, std::size_t y) {
      return var_id[s.vars[x]] < var_id[s.vars[y]];
    });
    for (std::size_t k : perm) spec.slots.push_back(var_id[s.vars[k]]);
    if (s.kind == SubproblemSpec::Kind::hinge) {
      for (std::size_t k : perm) spec.a.push_back(s.a[k]);
      spec.weight = s.weight;
      spec.offset = s.offset;
      spec.power = 1;
    }
    adj.emplace_back(spec.slots);
    out.problem.push_back(std::move(spec));
  }
  if (out.problem.empty()) {
    throw GenerationError("voter: grounding produced no subproblems");
  }
  out.graph = BipartiteGraph::from_adjacency(std::move(adj), next);
  return out;
}

}  // namespace aco
