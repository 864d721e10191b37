#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "aco/bipartite_graph.hpp"

namespace aco {

// Objective description for one subproblem. `slots` lists the consensus ids
// the subproblem touches, in the same order as its graph adjacency; its
// length is the local dimension n_i.
struct SubproblemSpec {
  enum class Kind { quadratic, hinge, simplex };
  Kind kind = Kind::quadratic;
  std::vector<NodeId> slots;

  // quadratic: phi(x) = (1/2) x^T Q x + c^T x, Q symmetric PSD (row-major)
  std::vector<double> Q;
  std::vector<double> c;

  // hinge: phi(x) = w * max(0, a^T x + b)^p, p in {1, 2}
  double weight = 0.0;
  std::vector<double> a;
  double offset = 0.0;
  int power = 1;

  // simplex: phi = indicator of {x >= 0, sum x = 1}

  std::size_t dim() const { return slots.size(); }
  void validate() const;  // throws ValidationError
};

using Problem = std::vector<SubproblemSpec>;

double objective(const SubproblemSpec& spec, const std::vector<double>& x);

// Eq. 2 argmin: argmin_x phi(x) + lambda.x + (rho/2)||x - x_hat||^2.
std::vector<double> prox_quadratic(const SubproblemSpec& spec,
                                   const std::vector<double>& lambda,
                                   const std::vector<double>& x_hat,
                                   double rho);
std::vector<double> prox_hinge(const SubproblemSpec& spec,
                               const std::vector<double>& lambda,
                               const std::vector<double>& x_hat, double rho);
std::vector<double> prox_simplex(const SubproblemSpec& spec,
                                 const std::vector<double>& lambda,
                                 const std::vector<double>& x_hat, double rho);
// Dispatch on spec.kind.
std::vector<double> prox(const SubproblemSpec& spec,
                         const std::vector<double>& lambda,
                         const std::vector<double>& x_hat, double rho);

// Social-network voter model grounded from the six weighted rules
// (registration 0.5; influence by acquaintance 0.3 / 0.1, workplace 0.05,
// mentorship 0.1, family 0.7) plus one mutual-exclusion simplex per person.
struct VoterConfig {
  std::size_t num_persons = 0;
  std::size_t num_parties = 2;
  // mean directed relation degrees per person
  double deg_knows_well = 0.8;
  double deg_knows = 0.8;
  double deg_boss = 0.2;
  double deg_mentor = 0.2;
  double deg_older_relative = 0.4;
  double registration_fraction = 0.2;
  std::uint64_t seed = 0;

  void validate() const;  // throws ValidationError
};

struct GroundedModel {
  BipartiteGraph graph;
  Problem problem;
  // consensus variables eliminated by the degree floor, with their fixed
  // truth values (ids refer to the pre-elimination variable space)
  std::size_t dropped_variables = 0;
};

GroundedModel ground_voter_model(const VoterConfig& cfg);

// Problem file I/O (one line per subproblem, `#` comments allowed).
void write_problem(std::ostream& out, const Problem& problem,
                   const std::map<std::string, std::string>& metadata = {});
void write_problem(const std::string& path, const Problem& problem,
                   const std::map<std::string, std::string>& metadata = {});
Problem read_problem(std::istream& in);
Problem read_problem(const std::string& path);

}  // namespace aco
