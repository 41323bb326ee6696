// Copyright 2026 The rsa-mf Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <limits>
#include <optional>
#include <variant>
#include <vector>

namespace rsa {

inline constexpr double kInfiniteBeta = std::numeric_limits<double>::infinity();

struct NoField {};

/// Random longitudinal field h_i = +h0 or -h0 with probability 1/2 each.
struct BimodalField {
  double h0 = 0.5;
};

/// Gaussian random field of standard deviation sigma, averaged with a
/// Gauss-Hermite rule of `nodes` points.
struct GaussianField {
  double sigma = 1.0;
  int nodes = 64;
};

using FieldDistribution = std::variant<NoField, BimodalField, GaussianField>;

/// Problem definition: interaction order, initial-state overlap, field
/// distribution and the optional non-stoquastic strength.
///
/// `nu` absent means the stoquastic Hamiltonian. A present `nu == 1` evaluates
/// through the non-stoquastic formulas, which then coincide with the
/// stoquastic ones.
struct ModelSpec {
  int p = 3;
  double c = 0.8;
  FieldDistribution field = NoField{};
  std::optional<double> nu;

  [[nodiscard]] bool non_stoquastic() const noexcept { return nu.has_value(); }
};

/// Throws ParameterError when the spec violates its invariants.
void validate(const ModelSpec& spec);

/// Location on the annealing control plane.
struct AnnealPoint {
  double s = 0.0;
  double lambda = 0.0;
};

/// Returns the point with both coordinates clamped to [0, 1]; NaN throws.
AnnealPoint clamped(AnnealPoint point);

/// One disorder / initial-condition class of sites.
struct SiteClass {
  double weight = 1.0;
  double h = 0.0;
  int epsilon = 1;
};

/// Decomposes the site average into weighted classes. Classes whose weight
/// vanishes (c = 0 or c = 1) are dropped.
std::vector<SiteClass> site_classes(const ModelSpec& spec);

/// m^p for integer p >= 0, exact sign handling for negative m.
[[nodiscard]] inline double int_pow(double m, int p) noexcept {
  double result = 1.0;
  double base = m;
  for (unsigned e = static_cast<unsigned>(p); e != 0; e >>= 1) {
    if (e & 1u) result *= base;
    base *= base;
  }
  return result;
}

}  // namespace rsa
