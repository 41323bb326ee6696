// Copyright 2026 The rsa-mf Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "rsa/nonstoq.hpp"

namespace rsa {

enum class BranchSource { fixed_point, grid_refined, boundary, analytic_lambda0 };

const char* to_string(BranchSource source) noexcept;

/// One stationary solution of the mean-field problem.
struct Branch {
  double m = 0.0;             // m, or m_z in non-stoquastic mode
  std::optional<double> mx;   // set in non-stoquastic mode
  double f = 0.0;
  bool stable = false;        // discrete second difference of f >= -1e-7
  BranchSource source = BranchSource::fixed_point;
  double margin = 0.0;        // 1 - d(rhs)/dm at the branch
  bool degenerate = false;    // global_min only: another branch ties within 1e-12
};

/// Grid and tolerance settings of the branch enumeration.
struct SolverOptions {
  int fixed_point_grid = 2001;
  int energy_grid = 4001;
  double root_tolerance = 1e-12;
  double golden_tolerance = 1e-10;
  double dedupe_distance = 1e-8;
  double tie_tolerance = 1e-12;
};

/// Coarser grids used inside s/lambda scans, where thousands of points are solved.
[[nodiscard]] SolverOptions scan_solver_options() noexcept;

/// A one-dimensional stationary-point problem: energy(m) and the map whose
/// fixed points are its self-consistent solutions. `aux` returns the
/// secondary order parameter (m_x) of a reduced two-parameter problem.
struct Landscape {
  std::function<double(double)> energy;
  std::function<double(double)> rhs;
  std::function<double(double)> aux;
};

/// Fixed points of landscape.rhs, found through sign changes of rhs(m) - m on
/// one grid and through refined discrete minima of the energy on another.
/// Sorted by energy; never empty.
std::vector<Branch> enumerate_landscape(const Landscape& landscape, const SolverOptions& options = {});

/// First branch of a sorted list, with the tie rule applied.
Branch select_global(const std::vector<Branch>& sorted, double tie_tolerance = 1e-12);

Landscape make_landscape(AnnealPoint point, const Model& model, double beta = kInfiniteBeta);

/// All stationary solutions at the point; dispatches on the spec mode.
std::vector<Branch> enumerate_branches(AnnealPoint point, const Model& model,
                                       double beta = kInfiniteBeta,
                                       const SolverOptions& options = {});

/// Lowest free-energy solution. Ties are resolved towards smaller m and flagged.
Branch global_min(AnnealPoint point, const Model& model, double beta = kInfiniteBeta,
                  const SolverOptions& options = {});

/// Unique m_x solving the transverse stationarity condition at fixed m_z.
double inner_mx_solve(double mz, AnnealPoint point, const Model& model, double beta = kInfiniteBeta);

/// Branches of the reduced problem F(m_z) = f(m_z, m_x*(m_z)).
std::vector<Branch> enumerate_branches_ns(AnnealPoint point, const Model& model,
                                          double beta = kInfiniteBeta,
                                          const SolverOptions& options = {});

}  // namespace rsa
