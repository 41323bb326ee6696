// Copyright 2026 The rsa-mf Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "rsa/errors.hpp"
#include "rsa/mf_core.hpp"
#include "rsa/nonstoq.hpp"
#include "rsa/solver.hpp"

namespace {

using rsa::AnnealPoint;
using rsa::Model;
using rsa::ModelSpec;

Model none_model(int p, double c) { return Model(ModelSpec{p, c, rsa::NoField{}, std::nullopt}); }

Model random_model(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int p = std::uniform_int_distribution<int>(2, 7)(rng);
  const double c = u(rng);
  switch (std::uniform_int_distribution<int>(0, 2)(rng)) {
    case 0: return none_model(p, c);
    case 1: return Model(ModelSpec{p, c, rsa::BimodalField{0.05 + 1.2 * u(rng)}, std::nullopt});
    default: return Model(ModelSpec{p, c, rsa::GaussianField{0.1 + 0.9 * u(rng), 16}, std::nullopt});
  }
}

TEST(Enumerate, ConstantRhsAtOrigin) {
  const auto b = rsa::enumerate_branches({0.0, 0.0}, none_model(3, 0.8));
  ASSERT_EQ(b.size(), 1u);
  EXPECT_NEAR(b[0].m, 0.6, 1e-12);
  EXPECT_NEAR(b[0].f, -1.0, 1e-14);
}

TEST(Enumerate, LambdaZeroBothBranchesPresent) {
  // Above the lambda = 0 transition (0.337838) the saturated branch wins.
  const auto b = rsa::enumerate_branches({0.45, 0.0}, none_model(3, 0.8));
  const auto has = [&](double m) {
    return std::any_of(b.begin(), b.end(), [&](const rsa::Branch& x) { return std::abs(x.m - m) < 1e-9; });
  };
  EXPECT_TRUE(has(0.6));
  EXPECT_TRUE(has(1.0));
  EXPECT_NEAR(b.front().m, 1.0, 1e-12);
  const auto below = rsa::global_min({0.3, 0.0}, none_model(3, 0.8));
  EXPECT_NEAR(below.m, 0.6, 1e-9);
}

TEST(Enumerate, ConventionalAnnealingSmallMagnetization) {
  const auto model = none_model(3, 0.8);
  const auto g = rsa::global_min({0.2, 1.0}, model);
  EXPECT_LT(std::abs(g.m), 0.1);
  const double brute = oracle::fixed_point_min([&](double m) { return rsa::free_energy(m, {0.2, 1.0}, model); },
                                              [&](double m) { return rsa::self_rhs(m, {0.2, 1.0}, model); }, 100001);
  EXPECT_NEAR(g.f, brute, 1e-10);
}

TEST(GlobalMin, Examples) {
  auto g = rsa::global_min({1.0, 1.0}, none_model(3, 0.3));
  EXPECT_NEAR(g.m, 1.0, 1e-12);
  EXPECT_NEAR(g.f, -1.0, 1e-14);
  g = rsa::global_min({0.0, 1.0}, none_model(3, 0.8));
  EXPECT_NEAR(g.m, 0.0, 1e-12);
  EXPECT_NEAR(g.f, -1.0, 1e-14);
}

TEST(GlobalMin, BimodalDegeneracyFlagged) {
  const Model m(ModelSpec{3, 0.8, rsa::BimodalField{1.0}, std::nullopt});
  const auto g = rsa::global_min({1.0, 1.0}, m);
  EXPECT_TRUE(g.degenerate);
  EXPECT_NEAR(g.m, 0.0, 1e-9);
  EXPECT_LT(std::abs(rsa::free_energy(0.0, {1, 1}, m) - rsa::free_energy(1.0, {1, 1}, m)), 1e-12);
}

TEST(SelectGlobal, TieGoesToSmallerM) {
  std::vector<rsa::Branch> v(2);
  v[0].m = 0.9;
  v[0].f = -1.0;
  v[1].m = 0.1;
  v[1].f = -1.0 + 5e-13;
  const auto g = rsa::select_global(v);
  EXPECT_EQ(g.m, 0.1);
  EXPECT_TRUE(g.degenerate);
  v[1].f = -1.0 + 1e-9;
  EXPECT_FALSE(rsa::select_global(v).degenerate);
  EXPECT_EQ(rsa::select_global(v).m, 0.9);
}

TEST(EnumerateLandscape, SyntheticDoubleWell) {
  rsa::Landscape ls;
  // f = (m^2 - 0.25)^2 + 0.01 m, fixed-point form rhs = m - f'(m).
  ls.energy = [](double m) { return std::pow(m * m - 0.25, 2) + 0.01 * m; };
  ls.rhs = [](double m) { return m - (4 * m * (m * m - 0.25) + 0.01); };
  const auto b = rsa::enumerate_landscape(ls);
  int minima = 0;
  for (const auto& x : b) minima += x.stable;
  EXPECT_EQ(minima, 2);
  EXPECT_LT(b.front().m, 0.0);
  EXPECT_TRUE(std::is_sorted(b.begin(), b.end(), [](auto& x, auto& y) { return x.f < y.f; }));
  rsa::SolverOptions bad;
  bad.energy_grid = 2;
  EXPECT_THROW(rsa::enumerate_landscape(ls, bad), rsa::ParameterError);
}

// The free-energy functional is meaningful only at self-consistent points (for
// odd p it decreases without bound toward m = -1 between them), so the oracle
// enumerates fixed points on a 10^5-point grid.
TEST(Property, CompletenessAgainstFixedPointGrid) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const auto model = random_model(rng);
    const AnnealPoint pt{u(rng), u(rng)};
    const auto g = rsa::global_min(pt, model);
    const double brute = oracle::fixed_point_min([&](double m) { return rsa::free_energy(m, pt, model); },
                                                 [&](double m) { return rsa::self_rhs(m, pt, model); }, 100001);
    EXPECT_LT(std::abs(g.f - brute), 1e-8) << "draw " << i << " s=" << pt.s << " l=" << pt.lambda;
  }
}

TEST(Property, FixedPointsAreAccurateAndEnergiesConsistent) {
  std::mt19937_64 rng(32);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const auto model = random_model(rng);
    const AnnealPoint pt{u(rng), u(rng)};
    const auto branches = rsa::enumerate_branches(pt, model);
    ASSERT_FALSE(branches.empty());
    EXPECT_TRUE(std::is_sorted(branches.begin(), branches.end(), [](auto& a, auto& b) { return a.f < b.f; }));
    for (const auto& b : branches) {
      EXPECT_NEAR(b.f, rsa::free_energy(b.m, pt, model), 1e-12);
      if (b.source == rsa::BranchSource::fixed_point) {
        EXPECT_LT(std::abs(rsa::self_rhs(b.m, pt, model) - b.m), 1e-10);
      }
      if (b.stable && std::abs(b.m) < 1 - 1e-4) {
        const double h = 1e-4;
        const double d2 = (rsa::free_energy(b.m + h, pt, model) - 2 * b.f + rsa::free_energy(b.m - h, pt, model)) / (h * h);
        EXPECT_GE(d2, -1e-7 - 1e-6);
      }
    }
  }
}

TEST(Property, EnumerationDeterministic) {
  std::mt19937_64 rng(33);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 50; ++i) {
    const auto model = random_model(rng);
    const AnnealPoint pt{u(rng), u(rng)};
    const auto a = rsa::enumerate_branches(pt, model);
    const auto b = rsa::enumerate_branches(pt, model);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
      EXPECT_EQ(a[k].m, b[k].m);
      EXPECT_EQ(a[k].f, b[k].f);
      EXPECT_EQ(a[k].source, b[k].source);
    }
  }
}

TEST(Property, CompletenessNonStoquastic) {
  std::mt19937_64 rng(34);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 30; ++i) {
    const Model model(ModelSpec{3 + 2 * (i % 2), 0.5 + 0.5 * u(rng), rsa::NoField{}, u(rng)});
    const AnnealPoint pt{u(rng), u(rng)};
    const auto g = rsa::select_global(rsa::enumerate_branches_ns(pt, model));
    const auto pair = [&](double mz) { return rsa::OrderPair{mz, rsa::inner_mx_solve(mz, pt, model)}; };
    const double brute = oracle::fixed_point_min([&](double mz) { return rsa::free_energy_ns(pair(mz), pt, model); },
                                                 [&](double mz) { return rsa::self_rhs_ns(pair(mz), pt, model).mz; },
                                                 20001);
    EXPECT_LT(std::abs(g.f - brute), 1e-8) << "draw " << i;
  }
}

}  // namespace
