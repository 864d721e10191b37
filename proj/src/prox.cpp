#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "aco/subproblem.hpp"

namespace aco {

void SubproblemSpec::validate() const {
  const std::size_t n = dim();
  if (n == 0) throw ValidationError("subproblem with no variable slots");
  switch (kind) {
    case Kind::quadratic: {
      if (Q.size() != n * n || c.size() != n) {
        throw ValidationError("quadratic spec with mismatched Q/c sizes");
      }
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
          if (std::abs(Q[i * n + j] - Q[j * n + i]) > 1e-12) {
            throw ValidationError("quadratic Q is not symmetric");
          }
        }
      }
      break;
    }
    case Kind::hinge:
      if (weight < 0.0) throw ValidationError("hinge weight < 0");
      if (a.size() != n) throw ValidationError("hinge coefficient size mismatch");
      if (power != 1 && power != 2) throw ValidationError("hinge power not in {1,2}");
      break;
    case Kind::simplex:
      break;
  }
}

double objective(const SubproblemSpec& spec, const std::vector<double>& x) {
  const std::size_t n = spec.dim();
  switch (spec.kind) {
    case SubproblemSpec::Kind::quadratic: {
      double v = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < n; ++j) row += spec.Q[i * n + j] * x[j];
        v += 0.5 * x[i] * row + spec.c[i] * x[i];
      }
      return v;
    }
    case SubproblemSpec::Kind::hinge: {
      double s = spec.offset;
      for (std::size_t i = 0; i < n; ++i) s += spec.a[i] * x[i];
      double h = std::max(0.0, s);
      return spec.weight * (spec.power == 2 ? h * h : h);
    }
    case SubproblemSpec::Kind::simplex:
      return 0.0;  // indicator; feasibility checked elsewhere
  }
  return 0.0;
}

std::vector<double> prox_quadratic(const SubproblemSpec& spec,
                                   const std::vector<double>& lambda,
                                   const std::vector<double>& x_hat,
                                   double rho) {
  const auto n = static_cast<Eigen::Index>(spec.dim());
  Eigen::MatrixXd A = Eigen::Map<const Eigen::MatrixXd>(spec.Q.data(), n, n);
  A.diagonal().array() += rho;
  Eigen::VectorXd rhs =
      rho * Eigen::Map<const Eigen::VectorXd>(x_hat.data(), n) -
      Eigen::Map<const Eigen::VectorXd>(lambda.data(), n) -
      Eigen::Map<const Eigen::VectorXd>(spec.c.data(), n);
  Eigen::VectorXd x = A.ldlt().solve(rhs);
  return std::vector<double>(x.data(), x.data() + n);
}

std::vector<double> prox_hinge(const SubproblemSpec& spec,
                               const std::vector<double>& lambda,
                               const std::vector<double>& x_hat, double rho) {
  const std::size_t n = spec.dim();
  const double w = spec.weight;
  const auto& a = spec.a;
  // proximity point z = x_hat - lambda / rho
  std::vector<double> z(n);
  for (std::size_t i = 0; i < n; ++i) z[i] = x_hat[i] - lambda[i] / rho;

  auto dot_a = [&](const std::vector<double>& v) {
    double s = spec.offset;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * v[i];
    return s;
  };
  const double aa = std::inner_product(a.begin(), a.end(), a.begin(), 0.0);

  // case 1: hinge inactive at the unconstrained proximity point
  if (w == 0.0 || dot_a(z) <= 0.0) return z;

  // case 2: smooth active branch
  std::vector<double> x(n);
  if (spec.power == 1) {
    for (std::size_t i = 0; i < n; ++i) x[i] = z[i] - (w / rho) * a[i];
  } else {
    // (rho I + 2w a a^T) x = rho z - 2w b a, via Sherman-Morrison
    const double az = dot_a(z) - spec.offset;  // a^T z
    const double t = (2.0 * w * (az + spec.offset)) / (rho + 2.0 * w * aa);
    for (std::size_t i = 0; i < n; ++i) x[i] = z[i] - t * a[i];
  }
  if (dot_a(x) >= 0.0) return x;

  // case 3: kink — project z onto the hyperplane a^T x + b = 0
  const double shift = dot_a(z) / aa;
  for (std::size_t i = 0; i < n; ++i) x[i] = z[i] - shift * a[i];
  return x;
}

std::vector<double> prox_simplex(const SubproblemSpec& spec,
                                 const std::vector<double>& lambda,
                                 const std::vector<double>& x_hat, double rho) {
  const std::size_t n = spec.dim();
  std::vector<double> z(n);
  for (std::size_t i = 0; i < n; ++i) z[i] = x_hat[i] - lambda[i] / rho;

  // Euclidean projection onto {x >= 0, sum x = 1} by sort and threshold.
  std::vector<double> u(z);
  std::sort(u.begin(), u.end(), std::greater<>());
  double cum = 0.0, theta = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    cum += u[k];
    double t = (cum - 1.0) / static_cast<double>(k + 1);
    if (u[k] - t > 0.0) theta = t;
  }
  for (std::size_t i = 0; i < n; ++i) z[i] = std::max(0.0, z[i] - theta);
  return z;
}

std::vector<double> prox(const SubproblemSpec& spec,
                         const std::vector<double>& lambda,
                         const std::vector<double>& x_hat, double rho) {
  switch (spec.kind) {
    case SubproblemSpec::Kind::quadratic:
      return prox_quadratic(spec, lambda, x_hat, rho);
    case SubproblemSpec::Kind::hinge:
      return prox_hinge(spec, lambda, x_hat, rho);
    case SubproblemSpec::Kind::simplex:
      return prox_simplex(spec, lambda, x_hat, rho);
  }
  throw ValidationError("unknown subproblem kind");
}

}  // namespace aco
