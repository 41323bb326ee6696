// Copyright 2026 The rsa-mf Authors
// SPDX-License-Identifier: Apache-2.0

#include "rsa/solver.hpp"

#include <algorithm>
#include <cmath>

#include "rsa/errors.hpp"

namespace rsa {

const char* to_string(BranchSource source) noexcept {
  switch (source) {
    case BranchSource::fixed_point: return "fixed-point";
    case BranchSource::grid_refined: return "grid-refined";
    case BranchSource::boundary: return "boundary";
    case BranchSource::analytic_lambda0: return "analytic-l0";
  }
  return "unknown";
}

SolverOptions scan_solver_options() noexcept {
  SolverOptions o;
  o.fixed_point_grid = 401;
  o.energy_grid = 801;
  return o;
}

namespace {

constexpr double kAcceptResidual = 1e-10;
constexpr double kCurvatureStep = 1e-4;
constexpr double kMarginStep = 1e-6;
constexpr double kStableCurvature = -1e-7;

struct Candidate {
  double m;
  BranchSource source;
};

int priority(BranchSource s) {
  switch (s) {
    case BranchSource::fixed_point: return 0;
    case BranchSource::grid_refined: return 1;
    case BranchSource::boundary: return 2;
    default: return 3;
  }
}

double grid_point(int i, int n) {
  if (i == n - 1) return 1.0;
  return -1.0 + 2.0 * static_cast<double>(i) / (n - 1);
}

// Bisection on a sign change of g in [lo, hi]; returns the midpoint
// of the final bracket and its residual.
std::pair<double, double> bisect_root(const std::function<double(double)>& g, double lo, double hi,
                                      double g_lo, double tolerance) {
  double mid = 0.5 * (lo + hi);
  double g_mid = g(mid);
  for (int iter = 0; iter < 200; ++iter) {
    if (std::abs(g_mid) < tolerance) break;
    if ((g_mid < 0) == (g_lo < 0)) {
      lo = mid;
      g_lo = g_mid;
    } else {
      hi = mid;
    }
    const double next = 0.5 * (lo + hi);
    if (next == lo || next == hi) break;
    mid = next;
    g_mid = g(mid);
  }
  return {mid, g_mid};
}

double golden_min(const std::function<double(double)>& f, double lo, double hi, double tolerance) {
  constexpr double inv_phi = 0.6180339887498949;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = f(x1);
  double f2 = f(x2);
  while (hi - lo > tolerance) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = f(x2);
    }
  }
  return 0.5 * (lo + hi);
}

Branch finish_branch(const Landscape& ls, const Candidate& cand) {
  Branch b;
  b.m = cand.m;
  b.source = cand.source;
  b.f = ls.energy(cand.m);
  if (ls.aux) b.mx = ls.aux(cand.m);

  const double h = kCurvatureStep;
  const double m = cand.m;
  if (m + h > 1.0) {
    b.stable = ls.energy(m - h) >= b.f - 1e-12;
  } else if (m - h < -1.0) {
    b.stable = ls.energy(m + h) >= b.f - 1e-12;
  } else {
    const double d2 = (ls.energy(m + h) - 2.0 * b.f + ls.energy(m - h)) / (h * h);
    b.stable = d2 >= kStableCurvature;
  }

  const double k = kMarginStep;
  const double hi = std::min(1.0, m + k);
  const double lo = std::max(-1.0, m - k);
  b.margin = 1.0 - (ls.rhs(hi) - ls.rhs(lo)) / (hi - lo);
  return b;
}

}  // namespace

std::vector<Branch> enumerate_landscape(const Landscape& ls, const SolverOptions& options) {
  if (options.fixed_point_grid < 3 || options.energy_grid < 3) {
    throw ParameterError("solver grids need at least 3 points");
  }
  const auto g = [&ls](double m) { return ls.rhs(m) - m; };
  std::vector<Candidate> candidates;
  std::vector<double> discontinuities;

  // (i) sign changes of rhs(m) - m.
  const int n1 = options.fixed_point_grid;
  std::vector<double> gv(n1);
  for (int i = 0; i < n1; ++i) gv[i] = g(grid_point(i, n1));
  for (int i = 0; i < n1; ++i) {
    const double mi = grid_point(i, n1);
    if (gv[i] == 0.0) {
      candidates.push_back({mi, (i == 0 || i == n1 - 1) ? BranchSource::boundary : BranchSource::fixed_point});
      continue;
    }
    if (i + 1 < n1 && gv[i + 1] != 0.0 && (gv[i] < 0) != (gv[i + 1] < 0)) {
      const auto [root, res] = bisect_root(g, mi, grid_point(i + 1, n1), gv[i], options.root_tolerance);
      if (std::abs(res) <= kAcceptResidual) {
        candidates.push_back({root, BranchSource::fixed_point});
      } else {
        discontinuities.push_back(root);
      }
    }
  }

  // (ii) discrete minima of the energy, refined and kept when stationary.
  const int n2 = options.energy_grid;
  std::vector<double> ev(n2);
  for (int j = 0; j < n2; ++j) ev[j] = ls.energy(grid_point(j, n2));
  for (int j = 1; j + 1 < n2; ++j) {
    const bool local = ev[j] <= ev[j - 1] && ev[j] <= ev[j + 1] && (ev[j] < ev[j - 1] || ev[j] < ev[j + 1]);
    if (!local) continue;
    const double a = grid_point(j - 1, n2);
    const double b = grid_point(j + 1, n2);
    const double m = golden_min(ls.energy, a, b, options.golden_tolerance);
    // The golden-section minimizer is only accurate to about sqrt(eps);
    // widen a bracket around it until rhs(m) - m changes sign.
    bool found = false;
    for (double delta : {1e-8, 1e-6, 1e-4, b - a}) {
      const double lo = std::max(a, m - delta);
      const double hi = std::min(b, m + delta);
      const double g_lo = g(lo);
      const double g_hi = g(hi);
      if (g_lo == 0.0 || g_hi == 0.0 || (g_lo < 0) == (g_hi < 0)) continue;
      const auto [root, res] = bisect_root(g, lo, hi, g_lo, options.root_tolerance);
      if (std::abs(res) <= kAcceptResidual) candidates.push_back({root, BranchSource::grid_refined});
      found = true;
      break;
    }
    if (!found && std::abs(g(m)) <= 1e-8) candidates.push_back({m, BranchSource::grid_refined});
  }

  // (iii) endpoints, only when they solve the self-consistent equation.
  for (double end : {-1.0, 1.0}) {
    if (std::abs(g(end)) <= kAcceptResidual) candidates.push_back({end, BranchSource::boundary});
  }

  // A step-function rhs (lambda = 0) can cross the diagonal only at a jump;
  // the crossing then solves the sign equation with sgn(0) in [-1, 1].
  if (candidates.empty()) {
    for (double m : discontinuities) candidates.push_back({m, BranchSource::grid_refined});
  }
  if (candidates.empty()) {
    throw ConvergenceError("branch enumeration found no self-consistent solution");
  }

  std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    return a.m < b.m;
  });
  std::vector<Candidate> merged;
  for (const auto& cand : candidates) {
    if (!merged.empty() && cand.m - merged.back().m <= options.dedupe_distance) {
      if (priority(cand.source) < priority(merged.back().source)) merged.back() = cand;
      continue;
    }
    merged.push_back(cand);
  }

  std::vector<Branch> branches;
  branches.reserve(merged.size());
  for (const auto& cand : merged) branches.push_back(finish_branch(ls, cand));
  std::sort(branches.begin(), branches.end(), [](const Branch& a, const Branch& b) {
    if (a.f != b.f) return a.f < b.f;
    return a.m < b.m;
  });
  return branches;
}

Branch select_global(const std::vector<Branch>& sorted, double tie_tolerance) {
  if (sorted.empty()) throw ConvergenceError("no branch to select");
  Branch best = sorted.front();
  bool tie = false;
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i].f - sorted.front().f >= tie_tolerance) break;
    tie = true;
    if (sorted[i].m < best.m) best = sorted[i];
  }
  best.degenerate = tie;
  return best;
}

Landscape make_landscape(AnnealPoint point, const Model& model, double beta) {
  point = clamped(point);
  check_beta(beta);
  Landscape ls;
  if (!model.spec().non_stoquastic()) {
    ls.energy = [point, &model, beta](double m) { return free_energy(m, point, model, beta); };
    ls.rhs = [point, &model, beta](double m) { return self_rhs(m, point, model, beta); };
    return ls;
  }
  ls.aux = [point, &model, beta](double mz) { return inner_mx_solve(mz, point, model, beta); };
  ls.energy = [point, &model, beta](double mz) {
    const double mx = inner_mx_solve(mz, point, model, beta);
    return free_energy_ns({mz, mx}, point, model, beta);
  };
  ls.rhs = [point, &model, beta](double mz) {
    const double mx = inner_mx_solve(mz, point, model, beta);
    return self_rhs_ns({mz, mx}, point, model, beta).mz;
  };
  return ls;
}

std::vector<Branch> enumerate_branches(AnnealPoint point, const Model& model, double beta,
                                       const SolverOptions& options) {
  return enumerate_landscape(make_landscape(point, model, beta), options);
}

Branch global_min(AnnealPoint point, const Model& model, double beta, const SolverOptions& options) {
  return select_global(enumerate_branches(point, model, beta, options), options.tie_tolerance);
}

double inner_mx_solve(double mz, AnnealPoint point, const Model& model, double beta) {
  if (!model.spec().non_stoquastic()) {
    throw UnsupportedModeError("inner_mx_solve requires a non-stoquastic spec");
  }
  const double nu = nu_of(model.spec());
  const auto rhs_x = [&](double mx) { return self_rhs_ns({mz, mx}, point, model, beta).mx; };
  if (point.s * (1.0 - nu) == 0.0) return rhs_x(0.0);

  // rhs_x(mx) - mx is strictly decreasing: g(-1) >= 0 >= g(1).
  double lo = -1.0;
  double hi = 1.0;
  double g_lo = rhs_x(lo) + 1.0;
  if (g_lo <= 0.0) return -1.0;
  if (rhs_x(hi) - 1.0 >= 0.0) return 1.0;
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    const double g_mid = rhs_x(mid) - mid;
    if (g_mid == 0.0) return mid;
    if (g_mid > 0.0) {
      lo = mid;
      g_lo = g_mid;
    } else {
      hi = mid;
    }
    if (hi - lo < 1e-15) break;
  }
  return 0.5 * (lo + hi);
}

std::vector<Branch> enumerate_branches_ns(AnnealPoint point, const Model& model, double beta,
                                          const SolverOptions& options) {
  if (!model.spec().non_stoquastic()) {
    throw UnsupportedModeError("enumerate_branches_ns requires a non-stoquastic spec");
  }
  return enumerate_branches(point, model, beta, options);
}

}  // namespace rsa
