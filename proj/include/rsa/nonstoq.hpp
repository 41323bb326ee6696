// Copyright 2026 The rsa-mf Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "rsa/mf_core.hpp"

namespace rsa {

/// Longitudinal and transverse magnetization of the non-stoquastic problem.
struct OrderPair {
  double mz = 0.0;
  double mx = 0.0;
};

/// Strength nu of the spec; 1 when the spec is stoquastic.
[[nodiscard]] double nu_of(const ModelSpec& spec) noexcept;

EffectiveField effective_fields_ns(OrderPair pair, AnnealPoint point, const SiteClass& sc, int p,
                                   double nu) noexcept;

/// Free energy with the antiferromagnetic transverse interaction.
double free_energy_ns(OrderPair pair, AnnealPoint point, const Model& model,
                      double beta = kInfiniteBeta);

/// Class averages of (a, b) / sqrt(a^2 + b^2), with the tanh weight at finite beta.
OrderPair self_rhs_ns(OrderPair pair, AnnealPoint point, const Model& model,
                      double beta = kInfiniteBeta, EvalDiagnostics* diag = nullptr);

}  // namespace rsa
