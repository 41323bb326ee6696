// Copyright 2026 The rsa-mf Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <vector>

#include "rsa/solver.hpp"

namespace rsa {

/// ln I_0(x) for x >= 0. Power series below 20, scaled asymptotic series above.
double log_bessel_i0(double x);

/// I_1(x) / I_0(x) for x >= 0 using the same two branches.
double bessel_i1_over_i0(double x);

inline constexpr double kBesselSeam = 20.0;

struct SvmcEval {
  double f = 0.0;
  std::vector<double> z_per_class;
  double beta = 0.0;
};

/// Equilibrium free energy of the classical planar-rotor model at finite beta.
SvmcEval svmc_free_energy(double m, AnnealPoint point, const Model& model, double beta);

/// Stationarity map of the rotor free energy, weighted by I_1/I_0(beta z).
double svmc_self_rhs(double m, AnnealPoint point, const Model& model, double beta);

Landscape make_svmc_landscape(AnnealPoint point, const Model& model, double beta);

Branch svmc_global_min(AnnealPoint point, const Model& model, double beta,
                       const SolverOptions& options = {});

struct SvmcGapRow {
  double beta = 0.0;
  double max_gap = 0.0;  // max over the grid of |f_svmc(beta) - f_quantum(inf)| at the quantum minimizer
};

std::vector<SvmcGapRow> svmc_quantum_gap(std::span<const AnnealPoint> grid, const Model& model,
                                         std::span<const double> betas,
                                         const SolverOptions& options = {});

}  // namespace rsa
