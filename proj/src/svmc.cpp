// Copyright 2026 The rsa-mf Authors
// SPDX-License-Identifier: Apache-2.0

#include "rsa/svmc.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

#include "rsa/errors.hpp"

namespace rsa {

namespace {

constexpr double kSeriesEps = 1e-17;

// (sum of I0 terms, sum of I1 terms) of the power series, both without any scaling.
std::pair<double, double> power_series(double x) {
  const double q = 0.25 * x * x;
  double t0 = 1.0;
  double t1 = 0.5 * x;
  double s0 = t0;
  double s1 = t1;
  for (int k = 1; k < 500; ++k) {
    t0 *= q / (static_cast<double>(k) * k);
    t1 *= q / (static_cast<double>(k) * (k + 1));
    s0 += t0;
    s1 += t1;
    if (t0 < kSeriesEps * s0 && t1 < kSeriesEps * s1) break;
  }
  return {s0, s1};
}

// Asymptotic sums S_nu with I_nu(x) ~ e^x / sqrt(2 pi x) * S_nu, nu = 0, 1.
// Summation stops at the smallest term.
std::pair<double, double> asymptotic_series(double x) {
  double t0 = 1.0;
  double t1 = 1.0;
  double s0 = 1.0;
  double s1 = 1.0;
  for (int k = 1; k < 200; ++k) {
    const double odd = 2.0 * k - 1.0;
    const double next0 = t0 * odd * odd / (8.0 * k * x);
    const double next1 = -t1 * (4.0 - odd * odd) / (8.0 * k * x);
    if (std::abs(next0) >= std::abs(t0)) break;
    t0 = next0;
    t1 = next1;
    s0 += t0;
    s1 += t1;
    if (std::abs(t0) < kSeriesEps * s0 && std::abs(t1) < kSeriesEps * std::abs(s1)) break;
  }
  return {s0, s1};
}

void check_bessel_arg(double x) {
  if (!(x >= 0.0) || std::isnan(x)) throw ParameterError("Bessel argument must be >= 0");
}

double svmc_z(const EffectiveField& e) { return std::sqrt(e.a * e.a + e.b * e.b); }

void check_svmc(const Model& model, double beta) {
  if (!(beta > 0.0) || std::isinf(beta) || std::isnan(beta)) {
    throw ParameterError("beta must be finite and > 0 for the rotor free energy");
  }
  if (model.spec().non_stoquastic()) throw UnsupportedModeError("rotor free energy is stoquastic only");
}

}  // namespace

double log_bessel_i0(double x) {
  check_bessel_arg(x);
  if (x < kBesselSeam) return std::log(power_series(x).first);
  if (std::isinf(x)) return x;
  return x - 0.5 * std::log(2.0 * std::numbers::pi * x) + std::log(asymptotic_series(x).first);
}

double bessel_i1_over_i0(double x) {
  check_bessel_arg(x);
  if (x < kBesselSeam) {
    const auto [s0, s1] = power_series(x);
    return s1 / s0;
  }
  if (std::isinf(x)) return 1.0;
  const auto [s0, s1] = asymptotic_series(x);
  return s1 / s0;
}

SvmcEval svmc_free_energy(double m, AnnealPoint point, const Model& model, double beta) {
  check_svmc(model, beta);
  check_order_parameter(m);
  const int p = model.p();
  SvmcEval out;
  out.beta = beta;
  double acc = 0.0;
  for (const auto& sc : model.classes()) {
    const double z = svmc_z(effective_fields(m, point, sc, p));
    out.z_per_class.push_back(z);
    acc += sc.weight * (std::log(2.0 * std::numbers::pi) + log_bessel_i0(beta * z));
  }
  out.f = point.s * (p - 1) * int_pow(m, p) - acc / beta;
  return out;
}

double svmc_self_rhs(double m, AnnealPoint point, const Model& model, double beta) {
  check_svmc(model, beta);
  check_order_parameter(m);
  const int p = model.p();
  double acc = 0.0;
  for (const auto& sc : model.classes()) {
    const auto e = effective_fields(m, point, sc, p);
    const double z = svmc_z(e);
    if (z == 0.0) continue;
    acc += sc.weight * (e.a / z) * bessel_i1_over_i0(beta * z);
  }
  return acc;
}

Landscape make_svmc_landscape(AnnealPoint point, const Model& model, double beta) {
  check_svmc(model, beta);
  Landscape l;
  l.energy = [point, &model, beta](double m) { return svmc_free_energy(m, point, model, beta).f; };
  l.rhs = [point, &model, beta](double m) { return svmc_self_rhs(m, point, model, beta); };
  return l;
}

Branch svmc_global_min(AnnealPoint point, const Model& model, double beta, const SolverOptions& options) {
  return select_global(enumerate_landscape(make_svmc_landscape(point, model, beta), options),
                       options.tie_tolerance);
}

std::vector<SvmcGapRow> svmc_quantum_gap(std::span<const AnnealPoint> grid, const Model& model,
                                         std::span<const double> betas, const SolverOptions& options) {
  std::vector<std::pair<AnnealPoint, Branch>> minima;
  minima.reserve(grid.size());
  for (const auto& pt : grid) minima.emplace_back(pt, global_min(pt, model, kInfiniteBeta, options));
  std::vector<SvmcGapRow> out;
  for (double beta : betas) {
    SvmcGapRow row;
    row.beta = beta;
    for (const auto& [pt, b] : minima) {
      row.max_gap = std::max(row.max_gap, std::abs(svmc_free_energy(b.m, pt, model, beta).f - b.f));
    }
    out.push_back(row);
  }
  return out;
}

}  // namespace rsa
