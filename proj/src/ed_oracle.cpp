// Copyright 2026 The rsa-mf Authors
// SPDX-License-Identifier: Apache-2.0

#include "rsa/ed_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include <Eigen/SparseCholesky>

#include "rsa/errors.hpp"
#include "rsa/solver.hpp"

namespace rsa {

namespace {

constexpr int kMaxEdSites = 400;
constexpr int kKrylovSize = 300;
constexpr int kMaxRestarts = 60;

void check_ed_spec(const Model& model) {
  const auto& spec = model.spec();
  if (spec.non_stoquastic()) throw UnsupportedModeError("exact diagonalization is stoquastic only");
  if (std::holds_alternative<GaussianField>(spec.field)) {
    throw UnsupportedModeError("exact diagonalization needs a discrete field distribution");
  }
}

double ladder(int size, int down) {
  // <mu + 1| S^+ |mu> with j = size / 2 and mu = j - down.
  const double j = 0.5 * size;
  const double mu = j - down;
  return std::sqrt(j * (j + 1.0) - mu * (mu + 1.0));
}

double residual_norm(const SparseMatrix& h, const Eigen::VectorXd& v, double e) {
  return (h * v - e * v).norm();
}

EigenPair dense_lowest(const SparseMatrix& h) {
  // Dense eigenvalues only, then the eigenvector by inverse iteration: the
  // shifted matrix is positive definite, so a sparse Cholesky factor suffices.
  const Eigen::MatrixXd dense(h);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw ConvergenceError("dense eigensolver failed");
  const double e0 = es.eigenvalues()(0);
  const auto n = h.rows();
  const double scale = std::max(1.0, std::abs(e0));
  const double gap = n > 1 ? es.eigenvalues()(1) - e0 : 1.0;
  const double shift = e0 - std::max(1e-9 * scale, std::min(1e-3 * scale, 0.5 * gap));

  Eigen::SparseMatrix<double> shifted = h;
  for (Eigen::Index i = 0; i < n; ++i) shifted.coeffRef(i, i) -= shift;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(shifted);
  if (ldlt.info() != Eigen::Success) throw ConvergenceError("shifted factorization failed");

  EigenPair out;
  out.vector = Eigen::VectorXd::Constant(n, 1.0 / std::sqrt(static_cast<double>(n)));
  out.residual = std::numeric_limits<double>::infinity();
  for (int it = 0; it < 50 && out.residual >= 1e-12 * scale; ++it) {
    out.vector = ldlt.solve(out.vector).normalized();
    out.value = out.vector.dot(h * out.vector);
    out.residual = residual_norm(h, out.vector, out.value);
  }
  if (out.vector.sum() < 0.0) out.vector = -out.vector;
  return out;
}

EigenPair lanczos_lowest(const SparseMatrix& h, double tolerance) {
  const auto n = static_cast<Eigen::Index>(h.rows());
  const int krylov = static_cast<int>(std::min<Eigen::Index>(kKrylovSize, n));
  Eigen::VectorXd start = Eigen::VectorXd::Constant(n, 1.0 / std::sqrt(static_cast<double>(n)));
  Eigen::MatrixXd basis(n, krylov);
  EigenPair best;
  best.residual = std::numeric_limits<double>::infinity();

  for (int restart = 0; restart < kMaxRestarts; ++restart) {
    std::vector<double> alpha;
    std::vector<double> beta;
    basis.col(0) = start.normalized();
    int used = 0;
    for (int k = 0; k < krylov; ++k) {
      Eigen::VectorXd w = h * basis.col(k);
      alpha.push_back(basis.col(k).dot(w));
      // Full reorthogonalisation, applied twice.
      for (int pass = 0; pass < 2; ++pass) {
        w -= basis.leftCols(k + 1) * (basis.leftCols(k + 1).transpose() * w);
      }
      used = k + 1;
      const double b = w.norm();
      if (k + 1 == krylov || b < 1e-13) break;
      beta.push_back(b);
      basis.col(k + 1) = w / b;
    }

    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(used, used);
    for (int k = 0; k < used; ++k) {
      t(k, k) = alpha[k];
      if (k + 1 < used) t(k, k + 1) = t(k + 1, k) = beta[k];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
    Eigen::VectorXd x = basis.leftCols(used) * es.eigenvectors().col(0);
    x.normalize();
    if (x.sum() < 0.0) x = -x;
    const double e = x.dot(h * x);
    const double r = residual_norm(h, x, e);
    if (r < best.residual) best = {e, x, r};
    if (r < tolerance) return best;
    start = x;
  }
  throw ConvergenceError("Lanczos did not converge, residual " + std::to_string(best.residual));
}

}  // namespace

std::vector<int> CollectiveBasis::digits(std::size_t index) const {
  if (index >= dimension) throw ParameterError("basis index out of range");
  std::vector<int> out(blocks.size());
  for (std::size_t k = 0; k < blocks.size(); ++k) {
    out[k] = static_cast<int>(index / strides[k]);
    index %= strides[k];
  }
  return out;
}

CollectiveBasis build_basis(int n_sites, const Model& model, std::size_t cap) {
  check_ed_spec(model);
  if (n_sites < 1 || n_sites > kMaxEdSites) {
    throw ParameterError("N must lie in [1, " + std::to_string(kMaxEdSites) + "]");
  }
  const auto classes = model.classes();
  // Largest-remainder apportionment of N over the class weights.
  std::vector<int> sizes(classes.size());
  std::vector<std::pair<double, std::size_t>> remainders;
  int assigned = 0;
  for (std::size_t k = 0; k < classes.size(); ++k) {
    const double exact = classes[k].weight * n_sites;
    sizes[k] = static_cast<int>(std::floor(exact + 1e-9));
    assigned += sizes[k];
    remainders.emplace_back(exact - sizes[k], k);
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t i = 0; assigned < n_sites; ++i, ++assigned) ++sizes[remainders[i].second];

  CollectiveBasis basis;
  basis.n_sites = n_sites;
  for (std::size_t k = 0; k < classes.size(); ++k) {
    if (sizes[k] == 0) continue;
    basis.blocks.push_back({k, sizes[k], classes[k].h, classes[k].epsilon});
  }
  double dim = 1.0;
  for (const auto& b : basis.blocks) dim *= b.size + 1;
  if (dim > static_cast<double>(cap)) {
    throw SizeError("collective basis dimension " + std::to_string(static_cast<long long>(dim)) +
                    " exceeds cap " + std::to_string(cap));
  }
  basis.dimension = static_cast<std::size_t>(dim);
  basis.strides.assign(basis.blocks.size(), 1);
  for (std::size_t k = basis.blocks.size(); k-- > 1;) {
    basis.strides[k - 1] = basis.strides[k] * (basis.blocks[k].size + 1);
  }
  return basis;
}

Eigen::VectorXd total_sz(const CollectiveBasis& basis) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(basis.dimension));
  for (std::size_t i = 0; i < basis.dimension; ++i) {
    const auto d = basis.digits(i);
    double m = 0.0;
    for (std::size_t k = 0; k < d.size(); ++k) m += basis.blocks[k].size - 2.0 * d[k];
    out(static_cast<Eigen::Index>(i)) = m;
  }
  return out;
}

SparseMatrix build_hamiltonian(const CollectiveBasis& basis, AnnealPoint point, const Model& model) {
  check_ed_spec(model);
  const double s = point.s;
  const double l = point.lambda;
  const int p = model.p();
  const double n = basis.n_sites;
  const double transverse = -(1.0 - s) * l;

  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(basis.dimension * (1 + 2 * basis.blocks.size()));
  for (std::size_t i = 0; i < basis.dimension; ++i) {
    const auto d = basis.digits(i);
    double mz = 0.0;
    double diag = 0.0;
    for (std::size_t k = 0; k < d.size(); ++k) {
      const auto& b = basis.blocks[k];
      const double sz = b.size - 2.0 * d[k];
      mz += sz;
      diag -= (s * b.h + (1.0 - s) * (1.0 - l) * b.epsilon) * sz;
    }
    diag -= s * n * int_pow(mz / n, p);
    const auto row = static_cast<int>(i);
    entries.emplace_back(row, row, diag);
    if (transverse == 0.0) continue;
    for (std::size_t k = 0; k < d.size(); ++k) {
      const int size = basis.blocks[k].size;
      // sum sigma^x = S^+ + S^-; raising removes one down spin.
      if (d[k] > 0) {
        const double el = transverse * ladder(size, d[k]);
        entries.emplace_back(row, static_cast<int>(i - basis.strides[k]), el);
      }
      if (d[k] < size) {
        const double el = transverse * ladder(size, d[k] + 1);
        entries.emplace_back(row, static_cast<int>(i + basis.strides[k]), el);
      }
    }
  }
  SparseMatrix h(static_cast<Eigen::Index>(basis.dimension), static_cast<Eigen::Index>(basis.dimension));
  h.setFromTriplets(entries.begin(), entries.end());
  return h;
}

EigenPair lowest_eigenpair(const SparseMatrix& h, std::size_t cap, double tolerance) {
  const auto n = static_cast<std::size_t>(h.rows());
  if (n == 0 || h.rows() != h.cols()) throw ParameterError("matrix must be square and nonempty");
  if (n > cap) throw SizeError("matrix dimension " + std::to_string(n) + " exceeds cap " + std::to_string(cap));
  EigenPair out = n <= kDenseEdLimit ? dense_lowest(h) : lanczos_lowest(h, tolerance);
  if (!(out.residual < tolerance)) {
    throw ConvergenceError("eigen-residual " + std::to_string(out.residual) + " above tolerance");
  }
  return out;
}

GroundStateResult ground_state(const CollectiveBasis& basis, const SparseMatrix& h, std::size_t cap) {
  const auto pair = lowest_eigenpair(h, cap);
  GroundStateResult out;
  out.n_sites = basis.n_sites;
  out.energy_per_site = pair.value / basis.n_sites;
  out.magnetization_per_site = pair.vector.cwiseAbs2().dot(total_sz(basis)) / basis.n_sites;
  out.residual = pair.residual;
  return out;
}

std::vector<ScalingRow> scaling_report(const Model& model, AnnealPoint point, const std::vector<int>& sizes,
                                       std::size_t cap) {
  const double f_mf = global_min(point, model).f;
  std::vector<ScalingRow> out;
  for (int n : sizes) {
    const auto basis = build_basis(n, model, cap);
    const auto gs = ground_state(basis, build_hamiltonian(basis, point, model), cap);
    ScalingRow row;
    row.n_sites = n;
    row.e0_per_site = gs.energy_per_site;
    row.m_per_site = gs.magnetization_per_site;
    row.f_mf = f_mf;
    row.gap = std::abs(gs.energy_per_site - f_mf);
    if (!out.empty() && row.gap > 0.0) row.ratio = out.back().gap / row.gap;
    out.push_back(row);
  }
  return out;
}

}  // namespace rsa
