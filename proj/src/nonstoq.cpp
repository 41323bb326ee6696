// Copyright 2026 The rsa-mf Authors
// SPDX-License-Identifier: Apache-2.0

#include "rsa/nonstoq.hpp"

#include <cmath>

namespace rsa {

double nu_of(const ModelSpec& spec) noexcept { return spec.nu.value_or(1.0); }

EffectiveField effective_fields_ns(OrderPair pair, AnnealPoint point, const SiteClass& sc, int p,
                                   double nu) noexcept {
  const double s = point.s;
  const double l = point.lambda;
  return {p * s * nu * int_pow(pair.mz, p - 1) + s * nu * sc.h + (1.0 - s) * (1.0 - l) * sc.epsilon,
          (1.0 - s) * l - 2.0 * s * (1.0 - nu) * pair.mx};
}

double free_energy_ns(OrderPair pair, AnnealPoint point, const Model& model, double beta) {
  check_order_parameter(pair.mz, "mz");
  check_order_parameter(pair.mx, "mx");
  check_beta(beta);
  const int p = model.p();
  const double nu = nu_of(model.spec());
  const double s = point.s;
  double sum = 0.0;
  for (const auto& sc : model.classes()) {
    const auto [a, b] = effective_fields_ns(pair, point, sc, p, nu);
    sum += sc.weight * single_site_term(std::sqrt(a * a + b * b), beta);
  }
  return (p - 1) * s * nu * int_pow(pair.mz, p) - s * (1.0 - nu) * pair.mx * pair.mx - sum;
}

OrderPair self_rhs_ns(OrderPair pair, AnnealPoint point, const Model& model, double beta,
                      EvalDiagnostics* diag) {
  const int p = model.p();
  const double nu = nu_of(model.spec());
  OrderPair out;
  for (const auto& sc : model.classes()) {
    const auto [a, b] = effective_fields_ns(pair, point, sc, p, nu);
    const double r = std::sqrt(a * a + b * b);
    if (r == 0.0) {
      if (diag) ++diag->degenerate_classes;
      continue;
    }
    const double tf = thermal_factor(r, beta);
    out.mz += sc.weight * (a / r) * tf;
    out.mx += sc.weight * (b / r) * tf;
  }
  return out;
}

}  // namespace rsa
