#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <vector>

#include "aco/graph_io.hpp"
#include "aco/rng.hpp"
#include "aco/subproblem.hpp"

using namespace aco;

namespace {

// full prox objective f(x) = phi(x) + lambda.x + (rho/2)||x - x_hat||^2
double full_objective(const SubproblemSpec& spec,
                      const std::vector<double>& lambda,
                      const std::vector<double>& x_hat, double rho,
                      const std::vector<double>& x) {
  double f = objective(spec, x);
  for (std::size_t i = 0; i < x.size(); ++i) {
    double d = x[i] - x_hat[i];
    f += lambda[i] * x[i] + 0.5 * rho * d * d;
  }
  return f;
}

std::vector<double> random_vec(Rng& rng, std::size_t n, double scale) {
  std::vector<double> v(n);
  for (auto& e : v) e = scale * (2.0 * rng.uniform01() - 1.0);
  return v;
}

SubproblemSpec random_quad(Rng& rng, std::size_t n) {
  SubproblemSpec s;
  s.kind = SubproblemSpec::Kind::quadratic;
  s.slots.resize(n);
  std::iota(s.slots.begin(), s.slots.end(), 0);
  // Q = B^T B (PSD, possibly singular)
  std::vector<double> B(n * n);
  for (auto& e : B) e = 2.0 * rng.uniform01() - 1.0;
  s.Q.assign(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        s.Q[i * n + j] += B[k * n + i] * B[k * n + j];
  s.c = random_vec(rng, n, 1.0);
  return s;
}

SubproblemSpec random_hinge(Rng& rng, std::size_t n) {
  SubproblemSpec s;
  s.kind = SubproblemSpec::Kind::hinge;
  s.slots.resize(n);
  std::iota(s.slots.begin(), s.slots.end(), 0);
  s.weight = 2.0 * rng.uniform01();
  s.a = random_vec(rng, n, 1.0);
  // keep a away from zero so the hyperplane branch is well-posed
  if (std::inner_product(s.a.begin(), s.a.end(), s.a.begin(), 0.0) < 0.1) {
    s.a[0] += 1.0;
  }
  s.offset = 2.0 * rng.uniform01() - 1.0;
  s.power = 1 + static_cast<int>(rng.uniform_below(2));
  return s;
}

SubproblemSpec simplex_spec(std::size_t n) {
  SubproblemSpec s;
  s.kind = SubproblemSpec::Kind::simplex;
  s.slots.resize(n);
  std::iota(s.slots.begin(), s.slots.end(), 0);
  return s;
}

// independent gradient-descent minimizer for the quadratic prox objective
std::vector<double> gd_quad_oracle(const SubproblemSpec& spec,
                                   const std::vector<double>& lambda,
                                   const std::vector<double>& x_hat,
                                   double rho) {
  const std::size_t n = spec.dim();
  // Lipschitz bound: max row sum of Q plus rho
  double L = rho;
  double row_max = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double r = 0.0;
    for (std::size_t j = 0; j < n; ++j) r += std::abs(spec.Q[i * n + j]);
    row_max = std::max(row_max, r);
  }
  L += row_max;
  const double step = 1.0 / L;
  std::vector<double> x(n, 0.0), grad(n);
  for (int it = 0; it < 2000000; ++it) {
    double gmax = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double gi = spec.c[i] + lambda[i] + rho * (x[i] - x_hat[i]);
      for (std::size_t j = 0; j < n; ++j) gi += spec.Q[i * n + j] * x[j];
      grad[i] = gi;
      gmax = std::max(gmax, std::abs(gi));
    }
    if (gmax < 1e-10) break;
    for (std::size_t i = 0; i < n; ++i) x[i] -= step * grad[i];
  }
  return x;
}

// coarse-to-fine 2-d grid search for the hinge prox objective
double hinge_grid_oracle(const SubproblemSpec& spec,
                         const std::vector<double>& lambda,
                         const std::vector<double>& x_hat, double rho) {
  std::vector<double> center(2);
  for (std::size_t i = 0; i < 2; ++i) center[i] = x_hat[i] - lambda[i] / rho;
  double anorm = std::sqrt(std::inner_product(spec.a.begin(), spec.a.end(),
                                              spec.a.begin(), 0.0));
  double radius = spec.weight * anorm * std::max(1.0, anorm) / rho + 0.5;
  double best = std::numeric_limits<double>::max();
  std::vector<double> x(2), best_x = center;
  for (int level = 0; level < 8; ++level) {
    for (int i = -40; i <= 40; ++i) {
      for (int j = -40; j <= 40; ++j) {
        x[0] = center[0] + radius * i / 40.0;
        x[1] = center[1] + radius * j / 40.0;
        double f = full_objective(spec, lambda, x_hat, rho, x);
        if (f < best) {
          best = f;
          best_x = x;
        }
      }
    }
    center = best_x;
    radius *= 2.0 / 40.0;  // keep a 2-cell margin around the best point
  }
  return best;
}

// exact simplex projection via support enumeration (KKT candidates)
std::vector<double> simplex_support_oracle(const std::vector<double>& z) {
  const std::size_t n = z.size();
  double best = std::numeric_limits<double>::max();
  std::vector<double> x(n), best_x(n);
  for (std::uint64_t mask = 1; mask < (1ull << n); ++mask) {
    const int k = __builtin_popcountll(mask);
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      if (mask >> i & 1) sum += z[i];
    const double t = (1.0 - sum) / k;
    bool ok = true;
    double f = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = (mask >> i & 1) ? z[i] + t : 0.0;
      if (x[i] < 0.0) ok = false;
      double d = x[i] - z[i];
      f += d * d;
    }
    if (ok && f < best) {
      best = f;
      best_x = x;
    }
  }
  return best_x;
}

}  // namespace

TEST_CASE("spec validation") {
  Rng rng(1);
  SubproblemSpec s = random_quad(rng, 3);
  s.Q[1] += 1.0;  // break symmetry
  CHECK_THROWS_AS(s.validate(), ValidationError);

  SubproblemSpec h;
  h.kind = SubproblemSpec::Kind::hinge;
  h.slots = {0};
  h.a = {1.0};
  h.weight = -1.0;
  CHECK_THROWS_AS(h.validate(), ValidationError);
  h.weight = 1.0;
  h.power = 3;
  CHECK_THROWS_AS(h.validate(), ValidationError);

  SubproblemSpec empty;
  CHECK_THROWS_AS(empty.validate(), ValidationError);
}

TEST_CASE("prox_quadratic hand cases") {
  // phi = (x-1)^2 = (1/2) x (2) x - 2x + 1: Q=2, c=-2; 3x = 2
  SubproblemSpec s;
  s.kind = SubproblemSpec::Kind::quadratic;
  s.slots = {0};
  s.Q = {2.0};
  s.c = {-2.0};
  auto x = prox_quadratic(s, {0.0}, {0.0}, 1.0);
  CHECK(x[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-12));

  // Q=0, c=0 -> pure proximity: x = x_hat - lambda/rho
  SubproblemSpec z;
  z.kind = SubproblemSpec::Kind::quadratic;
  z.slots = {0, 1};
  z.Q = {0, 0, 0, 0};
  z.c = {0, 0};
  auto y = prox_quadratic(z, {1.0, -2.0}, {0.5, 0.25}, 2.0);
  CHECK(y[0] == doctest::Approx(0.0));
  CHECK(y[1] == doctest::Approx(1.25));
}

TEST_CASE("prox_quadratic matches the gradient-descent oracle to 1e-8") {
  Rng rng(mix64(301));
  for (int trial = 0; trial < 10; ++trial) {
    SubproblemSpec s = random_quad(rng, 5);
    auto lambda = random_vec(rng, 5, 1.0);
    auto x_hat = random_vec(rng, 5, 1.0);
    auto x = prox_quadratic(s, lambda, x_hat, 1.0);
    auto ref = gd_quad_oracle(s, lambda, x_hat, 1.0);
    for (std::size_t i = 0; i < 5; ++i) {
      CHECK(std::abs(x[i] - ref[i]) <= 1e-8);
    }
  }
}

TEST_CASE("prox_hinge hand cases") {
  // w = 0 reduces to the proximity point
  SubproblemSpec s;
  s.kind = SubproblemSpec::Kind::hinge;
  s.slots = {0, 1};
  s.weight = 0.0;
  s.a = {1.0, 1.0};
  auto x = prox_hinge(s, {0.5, 0.0}, {1.0, 2.0}, 1.0);
  CHECK(x[0] == doctest::Approx(0.5));
  CHECK(x[1] == doctest::Approx(2.0));

  // scalar inactive branch: z = -1, a^T z + b = -1 <= 0
  SubproblemSpec t;
  t.kind = SubproblemSpec::Kind::hinge;
  t.slots = {0};
  t.weight = 1.0;
  t.a = {1.0};
  t.offset = 0.0;
  t.power = 1;
  auto y = prox_hinge(t, {0.0}, {-1.0}, 1.0);
  CHECK(y[0] == doctest::Approx(-1.0));
}

TEST_CASE("prox_hinge matches the 2-d grid-search oracle") {
  Rng rng(mix64(302));
  for (int trial = 0; trial < 20; ++trial) {
    SubproblemSpec s = random_hinge(rng, 2);
    auto lambda = random_vec(rng, 2, 1.0);
    auto x_hat = random_vec(rng, 2, 1.0);
    auto x = prox_hinge(s, lambda, x_hat, 1.0);
    double f = full_objective(s, lambda, x_hat, 1.0, x);
    double grid = hinge_grid_oracle(s, lambda, x_hat, 1.0);
    CHECK(f <= grid + 1e-12);  // the grid can never beat the exact solver
    CHECK(grid - f <= 1e-6);   // ... and must come within the oracle gap
  }
}

TEST_CASE("prox_hinge branch condition holds at the returned point") {
  Rng rng(mix64(303));
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t n = 1 + rng.uniform_below(3);
    SubproblemSpec s = random_hinge(rng, n);
    auto lambda = random_vec(rng, n, 1.0);
    auto x_hat = random_vec(rng, n, 1.0);
    auto x = prox_hinge(s, lambda, x_hat, 1.0);
    double margin = s.offset;
    for (std::size_t i = 0; i < n; ++i) margin += s.a[i] * x[i];
    // the solution is either on the inactive side, on the active side, or on
    // the kink hyperplane; it can never sit strictly infeasible for the
    // branch that produced it
    std::vector<double> z(n);
    for (std::size_t i = 0; i < n; ++i) z[i] = x_hat[i] - lambda[i];
    double zmargin = s.offset;
    for (std::size_t i = 0; i < n; ++i) zmargin += s.a[i] * z[i];
    if (zmargin <= 0.0) {
      CHECK(x == z);  // inactive branch returns the proximity point
    } else {
      CHECK(margin >= -1e-9);  // active or kink: never below the hyperplane
    }
  }
}

TEST_CASE("prox_simplex hand cases") {
  SubproblemSpec s = simplex_spec(3);
  // already on the simplex: fixed point
  std::vector<double> on = {0.2, 0.3, 0.5};
  auto x = prox_simplex(s, {0, 0, 0}, on, 1.0);
  for (std::size_t i = 0; i < 3; ++i) CHECK(x[i] == doctest::Approx(on[i]));

  // (2, 0) -> (1, 0)
  SubproblemSpec d2 = simplex_spec(2);
  auto y = prox_simplex(d2, {0, 0}, {2.0, 0.0}, 1.0);
  CHECK(y[0] == doctest::Approx(1.0));
  CHECK(y[1] == doctest::Approx(0.0));
}

TEST_CASE("prox_simplex matches support-enumeration oracle, d=6") {
  Rng rng(mix64(304));
  SubproblemSpec s = simplex_spec(6);
  for (int trial = 0; trial < 50; ++trial) {
    auto lambda = random_vec(rng, 6, 1.0);
    auto x_hat = random_vec(rng, 6, 2.0);
    auto x = prox_simplex(s, lambda, x_hat, 1.0);
    std::vector<double> z(6);
    for (std::size_t i = 0; i < 6; ++i) z[i] = x_hat[i] - lambda[i];
    auto ref = simplex_support_oracle(z);
    for (std::size_t i = 0; i < 6; ++i) {
      CHECK(std::abs(x[i] - ref[i]) <= 1e-9);
    }
  }
}

TEST_CASE("simplex outputs are on the simplex to 1e-12") {
  Rng rng(mix64(305));
  for (int trial = 0; trial < 500; ++trial) {
    std::size_t n = 2 + rng.uniform_below(5);
    SubproblemSpec s = simplex_spec(n);
    auto lambda = random_vec(rng, n, 2.0);
    auto x_hat = random_vec(rng, n, 3.0);
    auto x = prox_simplex(s, lambda, x_hat, 0.5 + rng.uniform01());
    double sum = 0.0;
    for (double v : x) {
      CHECK(v >= 0.0);
      sum += v;
    }
    CHECK(std::abs(sum - 1.0) <= 1e-12);
  }
}

TEST_CASE("prox local minimality across 1000 random instances") {
  Rng rng(mix64(306));
  for (int trial = 0; trial < 1000; ++trial) {
    const int kind = trial % 3;
    const std::size_t n = 2 + rng.uniform_below(3);
    SubproblemSpec s = kind == 0   ? random_quad(rng, n)
                       : kind == 1 ? random_hinge(rng, n)
                                   : simplex_spec(n);
    auto lambda = random_vec(rng, n, 1.0);
    auto x_hat = random_vec(rng, n, 1.0);
    const double rho = 1.0;
    auto x = prox(s, lambda, x_hat, rho);
    double fx = full_objective(s, lambda, x_hat, rho, x);
    for (int p = 0; p < 100; ++p) {
      std::vector<double> y = x;
      if (s.kind == SubproblemSpec::Kind::simplex) {
        // feasible perturbation: shift mass between two coordinates
        auto i = static_cast<std::size_t>(rng.uniform_below(n));
        auto j = static_cast<std::size_t>(rng.uniform_below(n));
        if (i == j || x[i] < 1e-3) continue;
        y[i] -= 1e-3;
        y[j] += 1e-3;
      } else {
        auto d = random_vec(rng, n, 1.0);
        double norm = std::sqrt(
            std::inner_product(d.begin(), d.end(), d.begin(), 0.0));
        for (std::size_t i = 0; i < n; ++i) y[i] += 1e-3 * d[i] / norm;
      }
      double fy = full_objective(s, lambda, x_hat, rho, y);
      CHECK(fx <= fy + 1e-10);
    }
  }
}

TEST_CASE("voter model: 10 persons ground near the 3:1 ratio") {
  VoterConfig cfg;
  cfg.num_persons = 10;
  cfg.seed = 4;
  GroundedModel m = ground_voter_model(cfg);
  double ratio = static_cast<double>(m.graph.num_subproblems()) /
                 static_cast<double>(m.graph.num_consensus());
  CHECK(ratio >= 2.5);
  CHECK(ratio <= 3.5);
  CHECK(m.problem.size() == m.graph.num_subproblems());
}

TEST_CASE("voter model: isolated registered persons") {
  VoterConfig cfg;
  cfg.num_persons = 5;
  cfg.deg_knows_well = cfg.deg_knows = cfg.deg_boss = cfg.deg_mentor =
      cfg.deg_older_relative = 0.0;
  cfg.registration_fraction = 1.0;
  cfg.seed = 1;
  GroundedModel m = ground_voter_model(cfg);
  // per person: one registration hinge + one simplex; the unregistered
  // party's variable has degree 1 (simplex only) and is dropped
  CHECK(m.graph.num_subproblems() == 10);
  CHECK(m.graph.num_consensus() == 5);
  CHECK(m.dropped_variables == 5);
  std::size_t hinges = 0, simplexes = 0;
  for (const auto& s : m.problem) {
    if (s.kind == SubproblemSpec::Kind::hinge) {
      ++hinges;
      CHECK(s.weight == doctest::Approx(0.5));
      CHECK(s.dim() == 1);
    } else {
      CHECK(s.kind == SubproblemSpec::Kind::simplex);
      ++simplexes;
    }
  }
  CHECK(hinges == 5);
  CHECK(simplexes == 5);
}

TEST_CASE("voter model: structural scan of grounded rules") {
  VoterConfig cfg;
  cfg.num_persons = 50;
  cfg.seed = 8;
  GroundedModel m = ground_voter_model(cfg);
  const std::vector<double> weight_set = {0.5, 0.3, 0.1, 0.05, 0.7};
  for (NodeId i = 0; i < m.graph.num_subproblems(); ++i) {
    const auto& s = m.problem[i];
    CHECK(s.dim() == m.graph.sub_degree(i));
    if (s.kind == SubproblemSpec::Kind::hinge) {
      CHECK(s.dim() <= 2);
      CHECK(s.power == 1);
      bool known = false;
      for (double w : weight_set) known |= (s.weight == doctest::Approx(w));
      CHECK(known);
    } else {
      REQUIRE(s.kind == SubproblemSpec::Kind::simplex);
      CHECK(s.dim() <= cfg.num_parties);
    }
    CHECK(s.dim() <= std::max<std::size_t>(cfg.num_parties, 2));
  }
}

TEST_CASE("voter model is deterministic") {
  VoterConfig cfg;
  cfg.num_persons = 40;
  cfg.seed = 12;
  GroundedModel a = ground_voter_model(cfg);
  GroundedModel b = ground_voter_model(cfg);
  CHECK(a.graph == b.graph);
  std::stringstream sa, sb;
  write_problem(sa, a.problem);
  write_problem(sb, b.problem);
  CHECK(sa.str() == sb.str());
}

TEST_CASE("problem file round trip") {
  Rng rng(mix64(307));
  Problem p;
  p.push_back(random_quad(rng, 3));
  p.push_back(random_hinge(rng, 2));
  p.push_back(simplex_spec(4));
  std::stringstream ss;
  write_problem(ss, p);
  Problem back = read_problem(ss);
  REQUIRE(back.size() == p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    CHECK(back[i].kind == p[i].kind);
    CHECK(back[i].slots == p[i].slots);
    CHECK(back[i].Q == p[i].Q);
    CHECK(back[i].c == p[i].c);
    CHECK(back[i].a == p[i].a);
    CHECK(back[i].weight == p[i].weight);
    CHECK(back[i].offset == p[i].offset);
    CHECK(back[i].power == p[i].power);
  }
}

TEST_CASE("problem reader rejects malformed input") {
  {
    std::stringstream ss("problem 1\nquad 1 0 nota number\n");
    CHECK_THROWS_AS(read_problem(ss), ParseError);
  }
  {
    std::stringstream ss("problems 1\n");
    CHECK_THROWS_AS(read_problem(ss), ParseError);
  }
  {
    std::stringstream ss("problem 2\nsimplex 2 0 1\n");
    CHECK_THROWS_AS(read_problem(ss), ParseError);  // truncated body
  }
}
