// Copyright 2026 The rsa-mf Authors
// SPDX-License-Identifier: Apache-2.0

#include "rsa/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rsa/errors.hpp"
#include "rsa/quadrature.hpp"

namespace rsa {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw ParameterError(what);
}

}  // namespace

void validate(const ModelSpec& spec) {
  require(spec.p >= 2, "p must be an integer >= 2, got " + std::to_string(spec.p));
  require(std::isfinite(spec.c) && spec.c >= 0.0 && spec.c <= 1.0,
          "c must lie in [0, 1], got " + std::to_string(spec.c));
  if (spec.nu) {
    require(std::isfinite(*spec.nu) && *spec.nu >= 0.0 && *spec.nu <= 1.0,
            "nu must lie in [0, 1], got " + std::to_string(*spec.nu));
  }
  if (const auto* b = std::get_if<BimodalField>(&spec.field)) {
    require(std::isfinite(b->h0) && b->h0 > 0.0, "h0 must be positive");
  } else if (const auto* g = std::get_if<GaussianField>(&spec.field)) {
    require(std::isfinite(g->sigma) && g->sigma > 0.0, "sigma must be positive");
    require(g->nodes >= 1 && g->nodes <= kMaxHermiteNodes,
            "nodes must lie in [1, " + std::to_string(kMaxHermiteNodes) + "]");
  }
}

AnnealPoint clamped(AnnealPoint point) {
  if (std::isnan(point.s) || std::isnan(point.lambda)) {
    throw ParameterError("anneal point coordinates must not be NaN");
  }
  point.s = std::clamp(point.s, 0.0, 1.0);
  point.lambda = std::clamp(point.lambda, 0.0, 1.0);
  return point;
}

std::vector<SiteClass> site_classes(const ModelSpec& spec) {
  validate(spec);
  const double c = spec.c;
  std::vector<SiteClass> out;
  auto push = [&out](double w, double h, int eps) {
    if (w > 0.0) out.push_back({w, h, eps});
  };

  if (std::holds_alternative<NoField>(spec.field)) {
    push(c, 0.0, +1);
    push(1.0 - c, 0.0, -1);
  } else if (const auto* b = std::get_if<BimodalField>(&spec.field)) {
    push(0.5 * c, b->h0, +1);
    push(0.5 * (1.0 - c), b->h0, -1);
    push(0.5 * c, -b->h0, +1);
    push(0.5 * (1.0 - c), -b->h0, -1);
  } else {
    const auto& g = std::get<GaussianField>(spec.field);
    const auto rule = gauss_hermite(g.nodes);
    double total = 0.0;
    for (double w : rule.weights) total += w;
    const double scale = std::sqrt(2.0) * g.sigma;
    for (int eps : {+1, -1}) {
      const double share = eps > 0 ? c : 1.0 - c;
      for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        push(share * rule.weights[i] / total, scale * rule.nodes[i], eps);
      }
    }
  }
  return out;
}

}  // namespace rsa
