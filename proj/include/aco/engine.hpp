#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "aco/partition.hpp"
#include "aco/subproblem.hpp"

namespace aco {

struct DivergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Tolerances {
  double eps_primal = 1e-4;
  double eps_dual = 1e-4;
};

struct StepReport {
  std::size_t k = 0;
  std::size_t active_subproblems = 0;
  std::size_t converged_consensus = 0;
  double max_primal = 0.0;
  double max_dual = 0.0;
  std::uint64_t payload = 0;  // cross-machine scalars this superstep
};

// Loop condition for run(): full = every subproblem inactive;
// fraction = at least `p` of consensus vertices locally converged.
struct StopRule {
  enum class Kind { full, fraction };
  Kind kind = Kind::full;
  double p = 1.0;

  static StopRule full() { return {}; }
  static StopRule fraction(double p) {
    return {Kind::fraction, p};
  }
  static StopRule parse(const std::string& s);  // "full" | "fraction:<p>"
};

struct RunReport {
  struct Row {
    std::size_t iter;
    std::size_t active_subproblems;
    double frac_converged;
    double max_primal;
    double max_dual;
    std::uint64_t cum_payload;
  };
  std::vector<Row> rows;
  std::size_t iterations = 0;
  bool stopped_early = false;  // stop rule met before max_iters
  double objective = 0.0;
  std::uint64_t total_payload = 0;
};

void write_run_csv(std::ostream& out, const RunReport& report);

// Simulated synchronous cluster. Machines are logical partitions of the
// Assignment; iterates are computed in a fixed canonical order so results
// never depend on placement, which only drives the communication counters.
class ClusterState {
 public:
  ClusterState(const BipartiteGraph& g, const Assignment& assignment,
               const Problem& problem, double rho, Tolerances tol);

  StepReport superstep();
  RunReport run(std::size_t max_iters, StopRule stop);

  std::size_t superstep_count() const { return k_; }
  double rho() const { return rho_; }

  // iterates (flat per-edge layout for x / lambda / snapshot)
  const std::vector<double>& x() const { return x_; }
  const std::vector<double>& lambda() const { return lambda_; }
  const std::vector<double>& snapshot() const { return snapshot_; }
  const std::vector<double>& consensus() const { return X_; }
  const std::vector<double>& prev_consensus() const { return prev_X_; }

  bool sub_active(NodeId i) const { return active_[i] != 0; }
  bool con_converged(NodeId l) const { return converged_[l] != 0; }
  double primal_residual(NodeId l) const { return primal_[l]; }
  double dual_residual(NodeId l) const { return dual_[l]; }
  std::size_t num_active() const;
  std::size_t num_converged() const;

  double objective_value() const;

  // communication accounting
  const std::vector<std::uint64_t>& machine_payload() const {
    return machine_payload_;
  }
  std::uint64_t total_payload() const;
  std::uint64_t messages_sent() const { return messages_; }

  // mirror copies of consensus values, one per replica (parallel to
  // assignment.con_replicas); equal to the master value between supersteps
  const std::vector<double>& consensus_mirrors() const { return con_mirror_; }

  const BipartiteGraph& graph() const { return *g_; }
  const Assignment& assignment() const { return *assignment_; }

 private:
  const BipartiteGraph* g_;
  const Assignment* assignment_;
  const Problem* problem_;
  double rho_;
  Tolerances tol_;
  std::size_t k_ = 0;

  std::vector<double> x_, lambda_, snapshot_;  // by edge id
  std::vector<double> X_, prev_X_;             // by consensus id
  std::vector<double> primal_, dual_;
  std::vector<char> active_;     // by subproblem
  std::vector<char> converged_;  // by consensus
  std::vector<double> con_mirror_;

  std::vector<std::uint64_t> machine_payload_;
  std::uint64_t messages_ = 0;
};

// Local convergence test (per-consensus residuals): primal is the copy
// spread sqrt(sum (x_copy - X)^2), dual is rho * sqrt(N) * |X - prev_X|.
bool check_local_convergence(double primal_residual, double dual_residual,
                             const Tolerances& tol);

ClusterState build_cluster(const BipartiteGraph& g, const Assignment& assignment,
                           const Problem& problem, double rho = 1.0,
                           Tolerances tol = {});

}  // namespace aco
