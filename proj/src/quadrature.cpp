// Copyright 2026 The rsa-mf Authors
// SPDX-License-Identifier: Apache-2.0

#include "rsa/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <numbers>

#include <Eigen/Dense>

#include "rsa/errors.hpp"

namespace rsa {

namespace {

// Orthonormal Hermite functions at t: returns phi_{n-1}, phi_{n-2} and the
// sum of squares of phi_0..phi_{n-1}.
struct HermiteEval {
  double last = 0.0;
  double prev = 0.0;
  double sum_sq = 0.0;
};

HermiteEval hermite_orthonormal(int n, double t) {
  HermiteEval out;
  double p0 = std::pow(std::numbers::pi, -0.25);
  double p1 = 0.0;
  out.sum_sq = p0 * p0;
  out.last = p0;
  for (int k = 0; k + 1 < n; ++k) {
    const double next = t * std::sqrt(2.0 / (k + 1)) * p0 - std::sqrt(static_cast<double>(k) / (k + 1)) * p1;
    p1 = p0;
    p0 = next;
    out.sum_sq += p0 * p0;
  }
  out.last = p0;
  out.prev = p1;
  return out;
}

}  // namespace

QuadratureRule gauss_hermite(int n) {
  if (n < 1 || n > kMaxHermiteNodes) {
    throw ParameterError("Gauss-Hermite order must lie in [1, " + std::to_string(kMaxHermiteNodes) +
                         "], got " + std::to_string(n));
  }
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    jacobi(k, k - 1) = jacobi(k - 1, k) = std::sqrt(0.5 * k);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(jacobi, Eigen::EigenvaluesOnly);
  Eigen::VectorXd roots = eig.eigenvalues();

  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  // Polish the non-negative half and mirror it.
  for (int i = n / 2; i < n; ++i) {
    double t = roots(i);
    if (n % 2 == 1 && i == n / 2) t = 0.0;
    for (int iter = 0; iter < 8 && t != 0.0; ++iter) {
      const auto h = hermite_orthonormal(n, t);
      // Newton on p_n, with p_n' = sqrt(2n) p_{n-1}.
      const double pn = t * std::sqrt(2.0 / n) * h.last - std::sqrt((n - 1.0) / n) * h.prev;
      const double dpn = std::sqrt(2.0 * n) * h.last;
      if (dpn == 0.0) break;
      const double step = pn / dpn;
      t -= step;
      if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(t))) break;
    }
    const auto h = hermite_orthonormal(n, t);
    rule.nodes[i] = t;
    rule.weights[i] = 1.0 / h.sum_sq;
    rule.nodes[n - 1 - i] = -t;
    rule.weights[n - 1 - i] = rule.weights[i];
  }
  return rule;
}

}  // namespace rsa
