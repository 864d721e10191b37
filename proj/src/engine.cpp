#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include "aco/engine.hpp"

namespace aco {

StopRule StopRule::parse(const std::string& s) {
  if (s == "full") return full();
  const std::string prefix = "fraction:";
  if (s.rfind(prefix, 0) == 0) {
    double p = std::stod(s.substr(prefix.size()));
    if (p <= 0.0 || p > 1.0) {
      throw ValidationError("stop fraction must be in (0, 1]");
    }
    return fraction(p);
  }
  throw ValidationError("unknown stop rule '" + s + "' (full | fraction:<p>)");
}

bool check_local_convergence(double primal_residual, double dual_residual,
                             const Tolerances& tol) {
  return primal_residual < tol.eps_primal && dual_residual < tol.eps_dual;
}

ClusterState::ClusterState(const BipartiteGraph& g, const Assignment& assignment,
                           const Problem& problem, double rho, Tolerances tol)
    : g_(&g), assignment_(&assignment), problem_(&problem), rho_(rho),
      tol_(tol) {
  if (rho <= 0.0) throw ValidationError("rho must be > 0");
  if (problem.size() != g.num_subproblems()) {
    throw ValidationError(
        "problem/graph size mismatch: " + std::to_string(problem.size()) +
        " subproblem specs for |S| = " + std::to_string(g.num_subproblems()));
  }
  if (assignment.edge_owner.size() != g.num_edges()) {
    throw ValidationError("assignment does not cover the graph: " +
                          std::to_string(assignment.edge_owner.size()) +
                          " edge owners for |E| = " +
                          std::to_string(g.num_edges()));
  }
  for (NodeId i = 0; i < g.num_subproblems(); ++i) {
    const auto& spec = problem[i];
    spec.validate();
    if (spec.dim() != g.sub_degree(i)) {
      throw ValidationError("subproblem " + std::to_string(i) +
                            " spec dimension does not match its degree");
    }
    for (std::size_t j = 0; j < spec.slots.size(); ++j) {
      if (spec.slots[j] != g.edge_target(g.sub_begin(i) + j)) {
        throw ValidationError("subproblem " + std::to_string(i) +
                              " slots disagree with graph adjacency");
      }
    }
  }

  x_.assign(g.num_edges(), 0.0);
  lambda_.assign(g.num_edges(), 0.0);
  snapshot_.assign(g.num_edges(), 0.0);
  X_.assign(g.num_consensus(), 0.0);
  prev_X_.assign(g.num_consensus(), 0.0);
  primal_.assign(g.num_consensus(), 0.0);
  dual_.assign(g.num_consensus(), 0.0);
  active_.assign(g.num_subproblems(), 1);
  converged_.assign(g.num_consensus(), 0);
  con_mirror_.assign(assignment.con_replicas.size(), 0.0);
  machine_payload_.assign(assignment.machines, 0);
}

ClusterState build_cluster(const BipartiteGraph& g, const Assignment& assignment,
                           const Problem& problem, double rho, Tolerances tol) {
  return ClusterState(g, assignment, problem, rho, tol);
}

std::size_t ClusterState::num_active() const {
  return static_cast<std::size_t>(
      std::count(active_.begin(), active_.end(), char{1}));
}

std::size_t ClusterState::num_converged() const {
  return static_cast<std::size_t>(
      std::count(converged_.begin(), converged_.end(), char{1}));
}

double ClusterState::objective_value() const {
  double total = 0.0;
  std::vector<double> xi;
  for (NodeId i = 0; i < g_->num_subproblems(); ++i) {
    xi.assign(x_.begin() + g_->sub_begin(i), x_.begin() + g_->sub_end(i));
    total += objective((*problem_)[i], xi);
  }
  return total;
}

std::uint64_t ClusterState::total_payload() const {
  return std::accumulate(machine_payload_.begin(), machine_payload_.end(),
                         std::uint64_t{0});
}

StepReport ClusterState::superstep() {
  const BipartiteGraph& g = *g_;
  const Assignment& a = *assignment_;
  StepReport rep;
  rep.k = k_;
  rep.active_subproblems = num_active();

  // (a) subproblem gather: snapshot the consensus values X̂_i
  for (NodeId i = 0; i < g.num_subproblems(); ++i) {
    if (!active_[i]) continue;
    for (EdgeId e = g.sub_begin(i); e < g.sub_end(i); ++e) {
      snapshot_[e] = X_[g.edge_target(e)];
    }
  }

  // (b) subproblem apply: first complete the pending dual step against the
  // snapshot just gathered (the consensus average of the previous x), then
  // the x update via prox. This realizes the standard consensus-ADMM
  // ordering in a bulk-synchronous schedule: the dual update for iteration k
  // runs at the start of superstep k+1, when the averaged X^{k} is visible.
  std::vector<double> lam, snap;
  for (NodeId i = 0; i < g.num_subproblems(); ++i) {
    if (!active_[i]) continue;
    const std::size_t n = g.sub_degree(i);
    for (EdgeId e = g.sub_begin(i); e < g.sub_end(i); ++e) {
      lambda_[e] += rho_ * (x_[e] - snapshot_[e]);
    }
    lam.assign(lambda_.begin() + g.sub_begin(i),
               lambda_.begin() + g.sub_end(i));
    snap.assign(snapshot_.begin() + g.sub_begin(i),
                snapshot_.begin() + g.sub_end(i));
    std::vector<double> xi = prox((*problem_)[i], lam, snap, rho_);
    for (std::size_t j = 0; j < n; ++j) {
      if (!std::isfinite(xi[j])) {
        throw DivergenceError("subproblem vertex " + std::to_string(i) +
                              " diverged at superstep " +
                              std::to_string(k_ + 1));
      }
      x_[g.sub_begin(i) + j] = xi[j];
    }
    // (c) scatter x to the machines holding replicas of this vertex
    const auto mirrors =
        static_cast<std::uint64_t>(a.sub_replica_count(i)) - 1;
    machine_payload_[a.sub_master[i]] += mirrors;
    rep.payload += mirrors;
    messages_ += mirrors;
  }

  // (d) consensus gather + apply: a consensus vertex with no active
  // neighbor is skipped (none of its copies changed)
  for (NodeId l = 0; l < g.num_consensus(); ++l) {
    bool touched = false;
    for (std::size_t p = g.con_begin(l); p < g.con_end(l); ++p) {
      if (active_[g.pin(p).sub]) {
        touched = true;
        break;
      }
    }
    if (!touched) continue;

    // fixed reduction order: pins are stored in ascending subproblem order
    double sum = 0.0;
    for (std::size_t p = g.con_begin(l); p < g.con_end(l); ++p) {
      const auto& pin = g.pin(p);
      sum += x_[g.sub_begin(pin.sub) + pin.slot];
    }
    const auto n = static_cast<double>(g.con_degree(l));
    prev_X_[l] = X_[l];
    X_[l] = sum / n;
    if (!std::isfinite(X_[l])) {
      throw DivergenceError("consensus vertex " + std::to_string(l) +
                            " diverged at superstep " + std::to_string(k_ + 1));
    }

    double sq = 0.0;
    for (std::size_t p = g.con_begin(l); p < g.con_end(l); ++p) {
      const auto& pin = g.pin(p);
      const double d = x_[g.sub_begin(pin.sub) + pin.slot] - X_[l];
      sq += d * d;
    }
    primal_[l] = std::sqrt(sq);
    dual_[l] = rho_ * std::sqrt(n) * std::abs(X_[l] - prev_X_[l]);
    converged_[l] = check_local_convergence(primal_[l], dual_[l], tol_) ? 1 : 0;

    // (e) scatter the new value to mirror replicas
    const auto mirrors =
        static_cast<std::uint64_t>(a.con_replica_count(l)) - 1;
    machine_payload_[a.con_master[l]] += mirrors;
    rep.payload += mirrors;
    messages_ += mirrors;
    for (std::size_t r = a.con_rep_offsets[l]; r < a.con_rep_offsets[l + 1];
         ++r) {
      con_mirror_[r] = X_[l];
    }
  }

  // next-step activity: only unconverged consensus vertices notify their
  // subproblems
  for (NodeId i = 0; i < g.num_subproblems(); ++i) {
    char act = 0;
    for (EdgeId e = g.sub_begin(i); e < g.sub_end(i); ++e) {
      if (!converged_[g.edge_target(e)]) {
        act = 1;
        break;
      }
    }
    active_[i] = act;
  }

  ++k_;
  rep.converged_consensus = num_converged();
  for (NodeId l = 0; l < g.num_consensus(); ++l) {
    rep.max_primal = std::max(rep.max_primal, primal_[l]);
    rep.max_dual = std::max(rep.max_dual, dual_[l]);
  }
  return rep;
}

RunReport ClusterState::run(std::size_t max_iters, StopRule stop) {
  RunReport report;
  const auto nc = static_cast<double>(g_->num_consensus());
  for (std::size_t it = 0; it < max_iters; ++it) {
    StepReport s = superstep();
    report.total_payload += s.payload;
    report.rows.push_back({k_, s.active_subproblems,
                           nc > 0 ? s.converged_consensus / nc : 1.0,
                           s.max_primal, s.max_dual, report.total_payload});
    report.iterations = k_;
    const bool done =
        stop.kind == StopRule::Kind::full
            ? num_active() == 0
            : (nc > 0 && static_cast<double>(num_converged()) >= stop.p * nc);
    if (done) {
      report.stopped_early = true;
      break;
    }
  }
  report.objective = objective_value();
  return report;
}

void write_run_csv(std::ostream& out, const RunReport& report) {
  out << "iter,active_subproblems,frac_converged,max_primal,max_dual,"
         "cum_payload\n";
  char buf[128];
  for (const auto& r : report.rows) {
    snprintf(buf, sizeof buf, "%zu,%zu,%.17g,%.17g,%.17g,%llu\n", r.iter,
             r.active_subproblems, r.frac_converged, r.max_primal, r.max_dual,
             static_cast<unsigned long long>(r.cum_payload));
    out << buf;
  }
}

}  // namespace aco
