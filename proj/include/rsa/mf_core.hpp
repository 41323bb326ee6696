// Copyright 2026 The rsa-mf Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <vector>

#include "rsa/model.hpp"

namespace rsa {

/// Validated spec together with its site-class decomposition. Building the
/// classes (Gauss-Hermite in particular) is done once here; every evaluator
/// below takes a Model so hot loops never rebuild them.
class Model {
 public:
  explicit Model(ModelSpec spec);

  [[nodiscard]] const ModelSpec& spec() const noexcept { return spec_; }
  [[nodiscard]] std::span<const SiteClass> classes() const noexcept { return classes_; }
  [[nodiscard]] int p() const noexcept { return spec_.p; }

  /// Same distribution and p, different initial overlap.
  [[nodiscard]] Model with_c(double c) const;

 private:
  ModelSpec spec_;
  std::vector<SiteClass> classes_;
};

/// Longitudinal (a) and transverse (b) effective field of one site class;
/// the single-site gap is sqrt(a^2 + b^2).
struct EffectiveField {
  double a = 0.0;
  double b = 0.0;
};

/// Counts classes hit by the a = b = 0 convention.
struct EvalDiagnostics {
  long degenerate_classes = 0;
};

EffectiveField effective_fields(double m, AnnealPoint point, const SiteClass& sc, int p) noexcept;

/// T ln 2cosh(beta r) for finite beta, r at beta = infinity. Stable for any r.
[[nodiscard]] double single_site_term(double r, double beta) noexcept;

/// d/dr of single_site_term: tanh(beta r), exactly 1 at infinite beta.
[[nodiscard]] double thermal_factor(double r, double beta) noexcept;

/// Stoquastic free energy per site at order parameter m.
double free_energy(double m, AnnealPoint point, const Model& model, double beta = kInfiniteBeta);

/// Right-hand side of the self-consistent equation m = self_rhs(m).
double self_rhs(double m, AnnealPoint point, const Model& model, double beta = kInfiniteBeta,
                EvalDiagnostics* diag = nullptr);

void check_beta(double beta);
void check_order_parameter(double m, const char* name = "m");

}  // namespace rsa
