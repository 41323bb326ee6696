// Copyright 2026 The rsa-mf Authors
// SPDX-License-Identifier: Apache-2.0

#include "rsa/mf_core.hpp"

#include <cmath>
#include <string>

#include "rsa/errors.hpp"

namespace rsa {

Model::Model(ModelSpec spec) : spec_(std::move(spec)), classes_(site_classes(spec_)) {}

Model Model::with_c(double c) const {
  ModelSpec copy = spec_;
  copy.c = c;
  return Model(std::move(copy));
}

void check_beta(double beta) {
  if (!(beta > 0.0)) throw ParameterError("beta must be positive or infinite");
}

void check_order_parameter(double m, const char* name) {
  if (!(m >= -1.0 && m <= 1.0)) {
    throw ParameterError(std::string(name) + " must lie in [-1, 1], got " + std::to_string(m));
  }
}

EffectiveField effective_fields(double m, AnnealPoint point, const SiteClass& sc, int p) noexcept {
  const double s = point.s;
  const double l = point.lambda;
  return {s * p * int_pow(m, p - 1) + s * sc.h + (1.0 - s) * (1.0 - l) * sc.epsilon,
          (1.0 - s) * l};
}

double single_site_term(double r, double beta) noexcept {
  if (std::isinf(beta)) return r;
  // T ln 2cosh(beta r) = r + T ln(1 + e^{-2 beta r}) for r >= 0.
  return r + std::log1p(std::exp(-2.0 * beta * r)) / beta;
}

double thermal_factor(double r, double beta) noexcept {
  if (std::isinf(beta)) return 1.0;
  return std::tanh(beta * r);
}

double free_energy(double m, AnnealPoint point, const Model& model, double beta) {
  check_order_parameter(m);
  check_beta(beta);
  const int p = model.p();
  double sum = 0.0;
  for (const auto& sc : model.classes()) {
    const auto [a, b] = effective_fields(m, point, sc, p);
    sum += sc.weight * single_site_term(std::sqrt(a * a + b * b), beta);
  }
  return point.s * (p - 1) * int_pow(m, p) - sum;
}

double self_rhs(double m, AnnealPoint point, const Model& model, double beta, EvalDiagnostics* diag) {
  const int p = model.p();
  double sum = 0.0;
  for (const auto& sc : model.classes()) {
    const auto [a, b] = effective_fields(m, point, sc, p);
    const double r = std::sqrt(a * a + b * b);
    if (r == 0.0) {
      if (diag) ++diag->degenerate_classes;
      continue;
    }
    sum += sc.weight * (a / r) * thermal_factor(r, beta);
  }
  return sum;
}

}  // namespace rsa
