// Copyright 2026 The rsa-mf Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "rsa/mf_core.hpp"

namespace rsa {

/// A group of N_k sites sharing (h, epsilon), kept in its maximal total-spin
/// sector j = N_k / 2.
struct SpinBlock {
  std::size_t class_index = 0;
  int size = 0;
  double h = 0.0;
  int epsilon = 1;
};

/// Product basis over the blocks' S^z eigenstates. Index ordering is
/// row-major over blocks, with the number of down spins in each block as the
/// digit: index = sum_k down_k * stride_k.
struct CollectiveBasis {
  int n_sites = 0;
  std::vector<SpinBlock> blocks;
  std::vector<std::size_t> strides;
  std::size_t dimension = 0;

  /// Number of down spins per block of a basis index.
  [[nodiscard]] std::vector<int> digits(std::size_t index) const;
};

inline constexpr std::size_t kDefaultEdCap = 5000;
inline constexpr std::size_t kDenseEdLimit = 2000;

/// Block sizes follow the class weights by largest-remainder rounding, so
/// |N_k / N - weight_k| < 1 / N.
CollectiveBasis build_basis(int n_sites, const Model& model, std::size_t cap = kDefaultEdCap);

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Stoquastic Hamiltonian restricted to the collective basis.
SparseMatrix build_hamiltonian(const CollectiveBasis& basis, AnnealPoint point, const Model& model);

/// Diagonal of total sigma^z in the basis.
Eigen::VectorXd total_sz(const CollectiveBasis& basis);

struct GroundStateResult {
  double energy_per_site = 0.0;
  double magnetization_per_site = 0.0;
  int n_sites = 0;
  double residual = 0.0;
};

struct EigenPair {
  double value = 0.0;
  Eigen::VectorXd vector;
  double residual = 0.0;
};

/// Lowest eigenpair of a symmetric matrix: dense solver up to kDenseEdLimit,
/// Lanczos with full reorthogonalisation and explicit restarts above.
EigenPair lowest_eigenpair(const SparseMatrix& h, std::size_t cap = kDefaultEdCap,
                           double tolerance = 1e-10);

GroundStateResult ground_state(const CollectiveBasis& basis, const SparseMatrix& h,
                               std::size_t cap = kDefaultEdCap);

struct ScalingRow {
  int n_sites = 0;
  double e0_per_site = 0.0;
  double m_per_site = 0.0;
  double f_mf = 0.0;
  double gap = 0.0;
  double ratio = 0.0;  // gap(previous N) / gap(N); 0 for the first row
};

std::vector<ScalingRow> scaling_report(const Model& model, AnnealPoint point,
                                       const std::vector<int>& sizes,
                                       std::size_t cap = kDefaultEdCap);

}  // namespace rsa
