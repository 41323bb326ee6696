// Copyright 2026 The rsa-mf Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

namespace rsa {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

inline constexpr int kMaxHermiteNodes = 512;

/// Gauss-Hermite rule for the weight e^{-t^2} on the real line.
///
/// Nodes come from the eigenvalues of the symmetric Jacobi matrix
/// (Golub-Welsch) and are polished with Newton steps on the orthonormal
/// Hermite recurrence; weights are 1 / sum_k phi_k(t)^2 so that the tail
/// weights keep full relative accuracy. Nodes are returned in ascending order
/// and are exactly antisymmetric. For n beyond ~350 the outermost weights
/// underflow to zero.
QuadratureRule gauss_hermite(int n);

}  // namespace rsa
