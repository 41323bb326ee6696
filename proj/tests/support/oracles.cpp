// Copyright 2026 The rsa-mf Authors
// SPDX-License-Identifier: Apache-2.0

#include "oracles.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace oracle {

std::vector<Site> none_sites(double c) { return {{c, 0.0, 1}, {1.0 - c, 0.0, -1}}; }

std::vector<Site> bimodal_sites(double c, double h0) {
  return {{c / 2, h0, 1}, {(1 - c) / 2, h0, -1}, {c / 2, -h0, 1}, {(1 - c) / 2, -h0, -1}};
}

double free_energy(const std::vector<Site>& sites, int p, double m, double s, double lambda,
                   double beta) {
  double f = s * (p - 1) * std::pow(m, p);
  const double b = (1 - s) * lambda;
  for (const auto& st : sites) {
    const double a = s * p * std::pow(m, p - 1) + s * st.h + (1 - s) * (1 - lambda) * st.eps;
    const double z = std::hypot(a, b);
    if (std::isinf(beta)) {
      f -= st.weight * z;
    } else {
      // ln(2 cosh x) = x + ln(1 + e^{-2x}) for x >= 0.
      const double x = beta * z;
      f -= st.weight * (x + std::log1p(std::exp(-2 * x))) / beta;
    }
  }
  return f;
}

double self_rhs(const std::vector<Site>& sites, int p, double m, double s, double lambda) {
  double r = 0.0;
  const double b = (1 - s) * lambda;
  for (const auto& st : sites) {
    const double a = s * p * std::pow(m, p - 1) + s * st.h + (1 - s) * (1 - lambda) * st.eps;
    const double z = std::hypot(a, b);
    if (z > 0) r += st.weight * a / z;
  }
  return r;
}

double grid_min(const std::function<double(double)>& f, int points) {
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < points; ++i) best = std::min(best, f(-1.0 + 2.0 * i / (points - 1)));
  return best;
}

double fixed_point_min(const std::function<double(double)>& f, const std::function<double(double)>& rhs,
                       int points) {
  const auto g = [&](double m) { return rhs(m) - m; };
  double best = std::numeric_limits<double>::infinity();
  auto consider = [&](double m) {
    if (std::abs(g(m)) < 1e-9) best = std::min(best, f(m));
  };
  double prev_m = -1.0;
  double prev_g = g(prev_m);
  consider(prev_m);
  for (int i = 1; i < points; ++i) {
    const double m = -1.0 + 2.0 * i / (points - 1);
    const double gm = g(m);
    if (gm == 0.0) consider(m);
    if ((gm < 0) != (prev_g < 0)) {
      double lo = prev_m;
      double hi = m;
      const bool lo_neg = prev_g < 0;
      for (int k = 0; k < 80; ++k) {
        const double mid = 0.5 * (lo + hi);
        ((g(mid) < 0) == lo_neg ? lo : hi) = mid;
      }
      consider(0.5 * (lo + hi));
    }
    prev_m = m;
    prev_g = gm;
  }
  consider(1.0);
  return best;
}

double gaussian_free_energy(int p, double c, double sigma, double m, double s, double lambda) {
  const int n = 200000;
  const double lo = -12 * sigma;
  const double step = 24 * sigma / n;
  const double b = (1 - s) * lambda;
  auto integrand = [&](double h) {
    const double rho = std::exp(-h * h / (2 * sigma * sigma)) / (std::sqrt(2 * M_PI) * sigma);
    const double base = s * p * std::pow(m, p - 1) + s * h;
    const double up = std::hypot(base + (1 - s) * (1 - lambda), b);
    const double dn = std::hypot(base - (1 - s) * (1 - lambda), b);
    return rho * (c * up + (1 - c) * dn);
  };
  double sum = integrand(lo) + integrand(-lo);
  for (int i = 1; i < n; ++i) sum += (i % 2 ? 4.0 : 2.0) * integrand(lo + i * step);
  return s * (p - 1) * std::pow(m, p) - sum * step / 3;
}

long double log_i0_series(long double x) {
  // Sum scaled by e^{-x} to stay in range.
  const long double q = x * x / 4;
  long double term = 1.0L;
  long double sum = 1.0L;
  for (int k = 1; k < 2000; ++k) {
    term *= q / (static_cast<long double>(k) * k);
    sum += term;
    if (term < sum * 1e-21L) break;
  }
  return std::log(sum);
}

double brute_force_ground(int p, double s, double lambda, const std::vector<double>& h,
                          const std::vector<int>& eps) {
  const int n = static_cast<int>(h.size());
  const std::size_t dim = std::size_t{1} << n;
  std::vector<Eigen::Triplet<double>> t;
  for (std::size_t state = 0; state < dim; ++state) {
    double mz = 0;
    double diag = 0;
    for (int i = 0; i < n; ++i) {
      const double sz = (state >> i) & 1 ? -1.0 : 1.0;
      mz += sz;
      diag -= (s * h[i] + (1 - s) * (1 - lambda) * eps[i]) * sz;
    }
    diag -= s * n * std::pow(mz / n, p);
    t.emplace_back(state, state, diag);
    for (int i = 0; i < n; ++i) t.emplace_back(state, state ^ (std::size_t{1} << i), -(1 - s) * lambda);
  }
  Eigen::SparseMatrix<double> hm(dim, dim);
  hm.setFromTriplets(t.begin(), t.end());
  if (dim <= 1024) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es{Eigen::MatrixXd(hm), Eigen::EigenvaluesOnly};
    return es.eigenvalues()(0);
  }
  // Plain Lanczos with full reorthogonalization from a random start.
  const int k_max = 400;
  Eigen::MatrixXd v(dim, k_max);
  Eigen::VectorXd q = Eigen::VectorXd::Random(dim).normalized();
  std::vector<double> alpha, beta;
  double prev = std::numeric_limits<double>::infinity();
  for (int k = 0; k < k_max; ++k) {
    v.col(k) = q;
    Eigen::VectorXd w = hm * q;
    alpha.push_back(q.dot(w));
    w -= v.leftCols(k + 1) * (v.leftCols(k + 1).transpose() * w);
    w -= v.leftCols(k + 1) * (v.leftCols(k + 1).transpose() * w);
    Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(k + 1, k + 1);
    for (int j = 0; j <= k; ++j) {
      tri(j, j) = alpha[j];
      if (j < k) tri(j, j + 1) = tri(j + 1, j) = beta[j];
    }
    const double e0 = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(tri, Eigen::EigenvaluesOnly).eigenvalues()(0);
    const double bn = w.norm();
    if (std::abs(e0 - prev) < 1e-14 * std::abs(e0) || bn < 1e-12) return e0;
    prev = e0;
    beta.push_back(bn);
    q = w / bn;
  }
  return prev;
}

namespace {

// g, g', g'' of g(m) = r(m) - m for the zero-field model.
std::array<double, 3> cusp_residual(int p, double m, double s, double c, double lambda) {
  std::array<double, 3> out{-m, -1.0, 0.0};
  const double b = (1 - s) * lambda;
  for (const auto& [w, e] : {std::pair{c, 1.0}, std::pair{1 - c, -1.0}}) {
    const double a = s * p * std::pow(m, p - 1) + (1 - s) * (1 - lambda) * e;
    const double a1 = s * p * (p - 1) * std::pow(m, p - 2);
    const double a2 = s * p * (p - 1) * (p - 2) * std::pow(m, p - 3);
    const double q = a * a + b * b;
    out[0] += w * a / std::sqrt(q);
    out[1] += w * b * b / std::pow(q, 1.5) * a1;
    out[2] += w * (-3 * a * b * b / std::pow(q, 2.5) * a1 * a1 + b * b / std::pow(q, 1.5) * a2);
  }
  return out;
}

// Newton in (m, s, c) at fixed lambda; finite-difference Jacobian.
std::array<double, 3> cusp_at(int p, double lambda, std::array<double, 3> x) {
  for (int it = 0; it < 100; ++it) {
    const auto r = cusp_residual(p, x[0], x[1], x[2], lambda);
    if (std::abs(r[0]) + std::abs(r[1]) + std::abs(r[2]) < 1e-14) return x;
    Eigen::Matrix3d j;
    for (int k = 0; k < 3; ++k) {
      auto xp = x;
      auto xm = x;
      const double h = 1e-7;
      xp[k] += h;
      xm[k] -= h;
      const auto rp = cusp_residual(p, xp[0], xp[1], xp[2], lambda);
      const auto rm = cusp_residual(p, xm[0], xm[1], xm[2], lambda);
      for (int i = 0; i < 3; ++i) j(i, k) = (rp[i] - rm[i]) / (2 * h);
    }
    const Eigen::Vector3d dx = j.fullPivLu().solve(Eigen::Vector3d(r[0], r[1], r[2]));
    for (int k = 0; k < 3; ++k) x[k] -= dx(k);
  }
  throw std::runtime_error("cusp Newton did not converge");
}

}  // namespace

Cusp zero_field_cusp(int p) {
  if (p != 3) throw std::invalid_argument("seeded for p = 3 only");
  std::array<double, 3> seed{0.63, 0.28, 0.725};
  // Golden-section minimization of c(lambda), continuing the root from the seed.
  double lo = 0.5;
  double hi = 0.7;
  const double g = (std::sqrt(5.0) - 1) / 2;
  auto c_of = [&](double l) { return cusp_at(p, l, seed)[2]; };
  double x1 = hi - g * (hi - lo);
  double x2 = lo + g * (hi - lo);
  double f1 = c_of(x1);
  double f2 = c_of(x2);
  while (hi - lo > 1e-8) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - g * (hi - lo);
      f1 = c_of(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + g * (hi - lo);
      f2 = c_of(x2);
    }
  }
  const double l = 0.5 * (lo + hi);
  const auto x = cusp_at(p, l, seed);
  return {x[2], l, x[0], x[1]};
}

}  // namespace oracle
