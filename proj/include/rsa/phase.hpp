// Copyright 2026 The rsa-mf Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "rsa/solver.hpp"

namespace rsa {

enum class TransitionOrder { first, second };

const char* to_string(TransitionOrder order) noexcept;

struct TransitionPoint {
  double lambda = 0.0;
  double s_star = 0.0;
  TransitionOrder order = TransitionOrder::first;
  double delta_m = 0.0;
  double m_low = 0.0;   // global-min order parameter just below s_star
  double m_high = 0.0;  // ... and just above
};

struct LambdaInterval {
  double lo = 0.0;
  double hi = 0.0;
};

/// First-order transitions ordered by (lambda, s_star) and the lambda
/// intervals of the grid on which none occurs.
struct TransitionLine {
  std::vector<TransitionPoint> points;
  std::vector<LambdaInterval> breaks;
};

struct PhaseOptions {
  SolverOptions solver = scan_solver_options();
  double beta = kInfiniteBeta;
  double s_min = 0.0;
  double s_max = 1.0;
  double s_step = 0.002;
  /// Delta m below this separates a continuous change from a first-order jump.
  double jump_threshold = 1e-3;
  /// Bracket width at which bisection on s stops.
  double s_tolerance = 1e-10;
  /// An s-cell is bisected when its Delta m exceeds jump_threshold and either
  /// this absolute size or candidate_ratio times the neighbouring cells.
  double candidate_jump = 0.02;
  double candidate_ratio = 2.0;
  int workers = 1;
};

/// Inclusive uniform grid lo, lo + step, ..., hi (the last point snaps to hi).
std::vector<double> uniform_grid(double lo, double hi, double step);

std::vector<std::pair<double, Branch>> sweep_s(double lambda, const Model& model,
                                               std::span<const double> s_grid,
                                               const PhaseOptions& options = {});

/// Bisects the global-min branch switch inside [s_lo, s_hi]. A continuous
/// change is reported as second order when the low branch loses stability
/// inside the bracket; otherwise nullopt.
std::optional<TransitionPoint> locate_transition(double lambda, const Model& model, double s_lo,
                                                 double s_hi, const PhaseOptions& options = {});

/// Every first-order transition met along s at fixed lambda.
std::vector<TransitionPoint> transitions_along_s(double lambda, const Model& model,
                                                 const PhaseOptions& options = {});

TransitionLine trace_line(const Model& model, std::span<const double> lambda_grid,
                          const PhaseOptions& options = {});

struct JumpSample {
  double lambda = 0.0;
  double delta_m = 0.0;
};

/// Largest first-order jump per lambda; zero where the line is broken.
std::vector<JumpSample> jump_profile(const Model& model, std::span<const double> lambda_grid,
                                     const PhaseOptions& options = {});
std::vector<JumpSample> jump_profile(const TransitionLine& line, std::span<const double> lambda_grid);

struct CriticalCOptions {
  PhaseOptions phase = [] {
    PhaseOptions o;
    o.s_step = 0.01;
    o.s_tolerance = 1e-7;
    return o;
  }();
  double lambda_step = 0.005;
  double c_lo = 0.5;
  double c_hi = 1.0;
  double width = 1e-3;
};

struct CriticalC {
  double c = 0.0;        // midpoint of the final bracket
  double rounded = 0.0;  // c to two decimals
  double c_lo = 0.0;     // largest c without a break
  double c_hi = 0.0;     // smallest c with a break
};

/// Smallest initial overlap c whose first-order line has a break; `spec.c` is ignored.
CriticalC critical_c(const ModelSpec& spec_template, const CriticalCOptions& options = {});

/// True when some lambda of the grid carries no first-order transition.
bool has_break(const Model& model, std::span<const double> lambda_grid, const PhaseOptions& options);

/// Closed-form transition point at lambda = 0 without random field.
double sc_lambda0(double c, int p);

struct Lambda0Candidate {
  double m = 0.0;
  double f = 0.0;
  bool admissible = false;
  bool global = false;
};

/// The five sign-function solutions {1, c, 2c-1, 0, c-1} of the bimodal
/// problem at lambda = 0 with their exact free energies; admissibility is
/// checked against the sign arguments.
std::vector<Lambda0Candidate> lambda0_candidates(const Model& model, double s);

/// Admissible candidates as branches, sorted by free energy.
std::vector<Branch> lambda0_solutions(const Model& model, double s);

/// Switches of the analytic global candidate along s, bisected to s_tolerance.
std::vector<TransitionPoint> lambda0_transitions(const Model& model, const PhaseOptions& options = {});

/// Points where the low-m branch loses stability while still global, with
/// a continuous global order parameter.
std::vector<TransitionPoint> second_order_locus(const Model& model,
                                                std::span<const double> lambda_grid,
                                                const PhaseOptions& options = {});

}  // namespace rsa
