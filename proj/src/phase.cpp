// Copyright 2026 The rsa-mf Authors
// SPDX-License-Identifier: Apache-2.0

#include "rsa/phase.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <string>
#include <thread>

#include "rsa/errors.hpp"

namespace rsa {

const char* to_string(TransitionOrder order) noexcept {
  return order == TransitionOrder::first ? "first" : "second";
}

namespace {

// Runs fn(i) for i in [0, n) on up to `workers` threads. Each index writes
// only its own output slot, so the assembled result is order independent.
template <class Fn>
void parallel_for(std::size_t n, int workers, Fn&& fn) {
  const std::size_t threads = std::min<std::size_t>(std::max(workers, 1), n);
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::size_t i = t; i < n; i += threads) fn(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

Branch global_at(double s, double lambda, const Model& model, const PhaseOptions& o) {
  return global_min({s, lambda}, model, o.beta, o.solver);
}

const Branch& nearest_branch(const std::vector<Branch>& branches, double m) {
  const Branch* best = &branches.front();
  for (const auto& b : branches) {
    if (std::abs(b.m - m) < std::abs(best->m - m)) best = &b;
  }
  return *best;
}

// Distance from the low branch to the nearest fixed point lying at least
// jump_threshold / 2 beyond it on the side of m_hi; nullopt when none exists.
std::optional<double> high_side_gap(double s, double lambda, const Model& model, double m_lo_ref,
                                    double m_hi, const PhaseOptions& o) {
  constexpr int kScan = 201;
  const auto branches = enumerate_branches({s, lambda}, model, o.beta, o.solver);
  const double m_lo = nearest_branch(branches, m_lo_ref).m;
  const double dir = m_hi > m_lo_ref ? 1.0 : -1.0;
  const double a = m_lo + dir * 0.5 * o.jump_threshold;
  const double b = std::clamp(m_hi + dir * 0.5 * std::abs(m_hi - m_lo_ref), -1.0, 1.0);
  if ((b - a) * dir <= 0.0) return std::nullopt;
  const auto ls = make_landscape({s, lambda}, model, o.beta);
  const auto g = [&ls](double m) { return ls.rhs(m) - m; };
  double prev_m = a;
  double prev_g = g(a);
  if (prev_g == 0.0) return std::abs(a - m_lo);
  for (int i = 1; i < kScan; ++i) {
    const double m = a + (b - a) * i / (kScan - 1);
    const double gm = g(m);
    if (gm == 0.0) return std::abs(m - m_lo);
    if ((gm < 0.0) != (prev_g < 0.0)) {
      double lo = prev_m;
      double hi = m;
      double g_lo = prev_g;
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        const double g_mid = g(mid);
        if ((g_mid < 0.0) == (g_lo < 0.0)) {
          lo = mid;
          g_lo = g_mid;
        } else {
          hi = mid;
        }
      }
      const double root = 0.5 * (lo + hi);
      // Sign changes across a jump of a step-like rhs are not fixed points.
      if (std::abs(g(root)) <= 1e-8) return std::abs(root - m_lo);
    }
    prev_m = m;
    prev_g = gm;
  }
  return std::nullopt;
}

// Once the free-energy gap between two branches drops below double
// resolution, a continuous onset looks like a jump. Follow the high branch
// down in s: after a first-order switch it survives as a metastable branch
// and ends at a spinodal far from the low branch, while a continuous onset
// grows out of the low branch.
std::optional<TransitionPoint> continuous_onset(double lambda, const Model& model, double cell_lo,
                                                const TransitionPoint& tp, const PhaseOptions& o) {
  const auto gap_at = [&](double s) { return high_side_gap(s, lambda, model, tp.m_low, tp.m_high, o); };
  if (gap_at(cell_lo)) return std::nullopt;
  double lo = cell_lo;
  double hi = tp.s_star;
  auto gap_hi = gap_at(hi);
  if (!gap_hi) return std::nullopt;
  const double tol = std::min(o.s_tolerance, 1e-9);
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (auto gap = gap_at(mid)) {
      hi = mid;
      gap_hi = gap;
    } else {
      lo = mid;
    }
  }
  if (*gap_hi >= o.jump_threshold) return std::nullopt;
  TransitionPoint out = tp;
  out.s_star = hi;
  out.order = TransitionOrder::second;
  out.m_low = nearest_branch(enumerate_branches({hi, lambda}, model, o.beta, o.solver), tp.m_low).m;
  out.m_high = out.m_low + (tp.m_high > tp.m_low ? *gap_hi : -*gap_hi);
  out.delta_m = *gap_hi;
  return out;
}

// Bisection on the identity of the global branch. Returns nullopt when the
// global order parameter turns out to vary continuously across the bracket;
// a continuous onset caught by continuous_onset() comes back as second order.
std::optional<TransitionPoint> bisect_switch(double lambda, const Model& model, double lo,
                                             double m_lo, double hi, double m_hi,
                                             const PhaseOptions& o) {
  const double cell_lo = lo;
  if (std::abs(m_hi - m_lo) < o.jump_threshold) return std::nullopt;
  while (hi - lo > o.s_tolerance) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double m_mid = global_at(mid, lambda, model, o).m;
    if (std::abs(m_mid - m_lo) <= std::abs(m_mid - m_hi)) {
      lo = mid;
      m_lo = m_mid;
    } else {
      hi = mid;
      m_hi = m_mid;
    }
    if (std::abs(m_hi - m_lo) < o.jump_threshold) return std::nullopt;
  }
  TransitionPoint tp;
  tp.lambda = lambda;
  tp.s_star = 0.5 * (lo + hi);
  tp.order = TransitionOrder::first;
  tp.m_low = m_lo;
  tp.m_high = m_hi;
  tp.delta_m = std::abs(m_hi - m_lo);
  if (auto onset = continuous_onset(lambda, model, cell_lo, tp, o)) return onset;
  return tp;
}

// Margin of the fixed point continued from m_ref at s.
std::pair<double, double> continued_margin(double s, double lambda, double m_ref, const Model& model,
                                           const PhaseOptions& o) {
  const auto branches = enumerate_branches({s, lambda}, model, o.beta, o.solver);
  const Branch& b = nearest_branch(branches, m_ref);
  return {b.margin, b.m};
}

// Bisects the stability loss of the branch continued from (lo, m_lo), whose
// margin is positive at lo and non-positive at hi.
std::optional<TransitionPoint> bisect_stability_loss(double lambda, const Model& model, double lo,
                                                     double m_lo, double hi, const PhaseOptions& o) {
  while (hi - lo > o.s_tolerance) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const auto [margin, m] = continued_margin(mid, lambda, m_lo, model, o);
    if (margin > 0.0) {
      lo = mid;
      m_lo = m;
    } else {
      hi = mid;
    }
  }
  const double s_star = 0.5 * (lo + hi);
  const double delta = std::max(10.0 * o.s_tolerance, 1e-9);
  const double below = global_at(std::max(0.0, s_star - delta), lambda, model, o).m;
  const double above = global_at(std::min(1.0, s_star + delta), lambda, model, o).m;
  TransitionPoint tp;
  tp.lambda = lambda;
  tp.s_star = s_star;
  tp.m_low = below;
  tp.m_high = above;
  tp.delta_m = std::abs(above - below);
  if (tp.delta_m >= o.jump_threshold) return std::nullopt;
  tp.order = TransitionOrder::second;
  return tp;
}

bool is_candidate(const std::vector<double>& dm, std::size_t k, const PhaseOptions& o) {
  const double here = std::abs(dm[k]);
  if (here <= o.jump_threshold) return false;
  if (here > o.candidate_jump) return true;
  double neighbour = 0.0;
  if (k > 0) neighbour = std::max(neighbour, std::abs(dm[k - 1]));
  if (k + 1 < dm.size()) neighbour = std::max(neighbour, std::abs(dm[k + 1]));
  return here > o.candidate_ratio * neighbour;
}

}  // namespace

std::vector<double> uniform_grid(double lo, double hi, double step) {
  if (!(step > 0.0) || !std::isfinite(step)) throw ParameterError("grid step must be positive");
  if (!(hi >= lo)) throw ParameterError("grid upper bound must not be below the lower bound");
  const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
  std::vector<double> grid(n);
  for (std::size_t i = 0; i < n; ++i) grid[i] = lo + step * static_cast<double>(i);
  if (hi - grid.back() > 1e-9 * step) {
    grid.push_back(hi);
  } else {
    grid.back() = hi;
  }
  return grid;
}

std::vector<std::pair<double, Branch>> sweep_s(double lambda, const Model& model,
                                               std::span<const double> s_grid,
                                               const PhaseOptions& options) {
  if (!std::is_sorted(s_grid.begin(), s_grid.end())) throw ParameterError("s grid must be ascending");
  std::vector<std::pair<double, Branch>> out(s_grid.size());
  parallel_for(s_grid.size(), options.workers, [&](std::size_t i) {
    out[i] = {s_grid[i], global_at(s_grid[i], lambda, model, options)};
  });
  return out;
}

std::optional<TransitionPoint> locate_transition(double lambda, const Model& model, double s_lo,
                                                 double s_hi, const PhaseOptions& options) {
  if (!(s_lo < s_hi)) throw ParameterError("bracket must satisfy s_lo < s_hi");
  const Branch lo = global_at(s_lo, lambda, model, options);
  const Branch hi = global_at(s_hi, lambda, model, options);
  if (auto tp = bisect_switch(lambda, model, s_lo, lo.m, s_hi, hi.m, options)) return tp;
  if (lo.margin <= 0.0) return std::nullopt;
  const auto [margin_hi, m_hi] = continued_margin(s_hi, lambda, lo.m, model, options);
  (void)m_hi;
  if (margin_hi > 0.0) return std::nullopt;
  return bisect_stability_loss(lambda, model, s_lo, lo.m, s_hi, options);
}

namespace {

// Every switch of the global branch along s, of either order.
std::vector<TransitionPoint> scan_switches(double lambda, const Model& model, const PhaseOptions& options) {
  const auto grid = uniform_grid(options.s_min, options.s_max, options.s_step);
  std::vector<double> m(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) m[i] = global_at(grid[i], lambda, model, options).m;
  std::vector<double> dm(grid.size() - 1);
  for (std::size_t k = 0; k + 1 < grid.size(); ++k) dm[k] = m[k + 1] - m[k];

  std::vector<TransitionPoint> out;
  for (std::size_t k = 0; k < dm.size(); ++k) {
    if (!is_candidate(dm, k, options)) continue;
    if (auto tp = bisect_switch(lambda, model, grid[k], m[k], grid[k + 1], m[k + 1], options)) {
      out.push_back(*tp);
    }
  }
  return out;
}

}  // namespace

std::vector<TransitionPoint> transitions_along_s(double lambda, const Model& model,
                                                 const PhaseOptions& options) {
  auto out = scan_switches(lambda, model, options);
  std::erase_if(out, [](const TransitionPoint& tp) { return tp.order != TransitionOrder::first; });
  return out;
}

TransitionLine trace_line(const Model& model, std::span<const double> lambda_grid,
                          const PhaseOptions& options) {
  if (!std::is_sorted(lambda_grid.begin(), lambda_grid.end())) {
    throw ParameterError("lambda grid must be ascending");
  }
  std::vector<std::vector<TransitionPoint>> per_lambda(lambda_grid.size());
  parallel_for(lambda_grid.size(), options.workers, [&](std::size_t i) {
    per_lambda[i] = transitions_along_s(lambda_grid[i], model, options);
  });

  TransitionLine line;
  std::optional<LambdaInterval> open;
  for (std::size_t i = 0; i < lambda_grid.size(); ++i) {
    const auto& pts = per_lambda[i];
    line.points.insert(line.points.end(), pts.begin(), pts.end());
    if (pts.empty()) {
      if (!open) open = LambdaInterval{lambda_grid[i], lambda_grid[i]};
      open->hi = lambda_grid[i];
    } else if (open) {
      line.breaks.push_back(*open);
      open.reset();
    }
  }
  if (open) line.breaks.push_back(*open);
  return line;
}

std::vector<JumpSample> jump_profile(const TransitionLine& line, std::span<const double> lambda_grid) {
  std::vector<JumpSample> out;
  out.reserve(lambda_grid.size());
  for (double l : lambda_grid) {
    double jump = 0.0;
    for (const auto& tp : line.points) {
      if (tp.lambda == l && tp.order == TransitionOrder::first) jump = std::max(jump, tp.delta_m);
    }
    out.push_back({l, jump});
  }
  return out;
}

std::vector<JumpSample> jump_profile(const Model& model, std::span<const double> lambda_grid,
                                     const PhaseOptions& options) {
  return jump_profile(trace_line(model, lambda_grid, options), lambda_grid);
}

bool has_break(const Model& model, std::span<const double> lambda_grid, const PhaseOptions& options) {
  for (double l : lambda_grid) {
    if (transitions_along_s(l, model, options).empty()) return true;
  }
  return false;
}

namespace {

// Evaluates the largest jump per lambda on a coarse grid, then re-checks the
// full-resolution grid around the two deepest dips of that profile.
bool break_predicate(const Model& model, const CriticalCOptions& o) {
  const auto fine = uniform_grid(0.0, 1.0, o.lambda_step);
  const auto coarse = uniform_grid(0.0, 1.0, 0.05);
  std::vector<double> depth(coarse.size());
  std::vector<char> empty(coarse.size(), 0);
  parallel_for(coarse.size(), o.phase.workers, [&](std::size_t i) {
    const auto pts = transitions_along_s(coarse[i], model, o.phase);
    double jump = 0.0;
    for (const auto& tp : pts) jump = std::max(jump, tp.delta_m);
    depth[i] = jump;
    empty[i] = pts.empty();
  });
  if (std::any_of(empty.begin(), empty.end(), [](char e) { return e != 0; })) return true;

  std::vector<std::size_t> dips;
  for (std::size_t i = 0; i < coarse.size(); ++i) {
    const bool left = i == 0 || depth[i] <= depth[i - 1];
    const bool right = i + 1 == coarse.size() || depth[i] <= depth[i + 1];
    if (left && right) dips.push_back(i);
  }
  std::sort(dips.begin(), dips.end(), [&](std::size_t a, std::size_t b) { return depth[a] < depth[b]; });
  if (dips.size() > 2) dips.resize(2);

  for (std::size_t d : dips) {
    const double lo = d == 0 ? 0.0 : coarse[d - 1];
    const double hi = d + 1 == coarse.size() ? 1.0 : coarse[d + 1];
    std::vector<double> local;
    for (double l : fine) {
      if (l > lo && l < hi) local.push_back(l);
    }
    std::vector<char> local_empty(local.size(), 0);
    parallel_for(local.size(), o.phase.workers, [&](std::size_t i) {
      local_empty[i] = transitions_along_s(local[i], model, o.phase).empty();
    });
    if (std::any_of(local_empty.begin(), local_empty.end(), [](char e) { return e != 0; })) return true;
  }
  return false;
}

}  // namespace

CriticalC critical_c(const ModelSpec& spec_template, const CriticalCOptions& options) {
  ModelSpec spec = spec_template;
  spec.c = options.c_lo;
  const Model base(spec);
  double lo = options.c_lo;
  double hi = options.c_hi;
  const bool at_lo = break_predicate(base, options);
  const bool at_hi = break_predicate(base.with_c(hi), options);
  if (at_lo == at_hi) {
    throw NoThresholdError("break predicate is constant over c in [" + std::to_string(lo) + ", " +
                           std::to_string(hi) + "]");
  }
  while (hi - lo > options.width) {
    const double mid = 0.5 * (lo + hi);
    if (break_predicate(base.with_c(mid), options) == at_hi) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  CriticalC out;
  out.c_lo = lo;
  out.c_hi = hi;
  out.c = 0.5 * (lo + hi);
  out.rounded = std::round(out.c * 100.0) / 100.0;
  return out;
}

double sc_lambda0(double c, int p) {
  if (!(c >= 0.5 && c <= 1.0)) throw ParameterError("sc_lambda0 requires c in [1/2, 1]");
  if (p < 2) throw ParameterError("p must be >= 2");
  // At c = 1 both candidate branches are m = 1 and there is no transition; the
  // vanishing numerator is taken at face value.
  if (c == 1.0) return 0.0;
  const double d = 2.0 * (1.0 - c);
  return d / (1.0 - int_pow(2.0 * c - 1.0, p) + d);
}

std::vector<Lambda0Candidate> lambda0_candidates(const Model& model, double s) {
  const auto& spec = model.spec();
  const double c = spec.c;
  std::vector<double> values;
  if (std::holds_alternative<BimodalField>(spec.field)) {
    values = {1.0, c, 2.0 * c - 1.0, 0.0, c - 1.0};
  } else if (std::holds_alternative<NoField>(spec.field)) {
    values = {1.0, 2.0 * c - 1.0, 1.0 - 2.0 * c, -1.0};
  } else {
    throw UnsupportedModeError("analytic lambda = 0 solutions need a discrete field distribution");
  }
  if (spec.non_stoquastic()) throw UnsupportedModeError("analytic lambda = 0 solutions are stoquastic only");

  const int p = model.p();
  std::vector<Lambda0Candidate> out;
  for (double m : values) {
    Lambda0Candidate cand;
    cand.m = m;
    double rhs = 0.0;
    double abs_sum = 0.0;
    for (const auto& sc : model.classes()) {
      const double a = s * p * int_pow(m, p - 1) + s * sc.h + (1.0 - s) * sc.epsilon;
      rhs += sc.weight * (a > 0.0 ? 1.0 : (a < 0.0 ? -1.0 : 0.0));
      abs_sum += sc.weight * std::abs(a);
    }
    cand.f = s * (p - 1) * int_pow(m, p) - abs_sum;
    cand.admissible = std::abs(rhs - m) < 1e-12;
    out.push_back(cand);
  }
  double best = std::numeric_limits<double>::infinity();
  for (const auto& cand : out) {
    if (cand.admissible) best = std::min(best, cand.f);
  }
  for (auto& cand : out) cand.global = cand.admissible && cand.f == best;
  return out;
}

std::vector<Branch> lambda0_solutions(const Model& model, double s) {
  std::vector<Branch> out;
  for (const auto& cand : lambda0_candidates(model, s)) {
    if (!cand.admissible) continue;
    Branch b;
    b.m = cand.m;
    b.f = cand.f;
    b.stable = true;
    b.source = BranchSource::analytic_lambda0;
    b.margin = 1.0;
    out.push_back(b);
  }
  std::sort(out.begin(), out.end(), [](const Branch& a, const Branch& b) {
    return a.f != b.f ? a.f < b.f : a.m < b.m;
  });
  // Distinct candidate values can coincide (c = 1); keep one of each.
  out.erase(std::unique(out.begin(), out.end(), [](const Branch& a, const Branch& b) {
              return a.m == b.m;
            }),
            out.end());
  return out;
}

std::vector<TransitionPoint> lambda0_transitions(const Model& model, const PhaseOptions& options) {
  const auto global_m = [&model](double s) { return select_global(lambda0_solutions(model, s)).m; };
  const auto grid = uniform_grid(options.s_min, options.s_max, options.s_step);
  std::vector<TransitionPoint> out;
  double prev = global_m(grid.front());
  for (std::size_t k = 1; k < grid.size(); ++k) {
    const double cur = global_m(grid[k]);
    if (cur != prev) {
      double lo = grid[k - 1];
      double hi = grid[k];
      double m_lo = prev;
      double m_hi = cur;
      while (hi - lo > options.s_tolerance) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double mm = global_m(mid);
        if (mm == m_lo) {
          lo = mid;
        } else {
          hi = mid;
          m_hi = mm;
        }
      }
      TransitionPoint tp;
      tp.lambda = 0.0;
      tp.s_star = 0.5 * (lo + hi);
      tp.order = TransitionOrder::first;
      tp.m_low = m_lo;
      tp.m_high = m_hi;
      tp.delta_m = std::abs(m_hi - m_lo);
      out.push_back(tp);
    }
    prev = cur;
  }
  return out;
}

std::vector<TransitionPoint> second_order_locus(const Model& model, std::span<const double> lambda_grid,
                                                const PhaseOptions& options) {
  std::vector<std::vector<TransitionPoint>> per_lambda(lambda_grid.size());
  parallel_for(lambda_grid.size(), options.workers, [&](std::size_t i) {
    const double lambda = lambda_grid[i];
    const auto grid = uniform_grid(options.s_min, options.s_max, options.s_step);
    auto branches = enumerate_branches({grid.front(), lambda}, model, options.beta, options.solver);
    Branch prev = select_global(branches, options.solver.tie_tolerance);
    for (std::size_t k = 1; k < grid.size(); ++k) {
      branches = enumerate_branches({grid[k], lambda}, model, options.beta, options.solver);
      const Branch& cont = nearest_branch(branches, prev.m);
      if (prev.margin > 0.0 && cont.margin <= 0.0) {
        if (auto tp = bisect_stability_loss(lambda, model, grid[k - 1], prev.m, grid[k], options)) {
          per_lambda[i].push_back(*tp);
        }
      }
      prev = select_global(branches, options.solver.tie_tolerance);
    }
    for (const auto& tp : scan_switches(lambda, model, options)) {
      if (tp.order != TransitionOrder::second) continue;
      const bool seen = std::any_of(per_lambda[i].begin(), per_lambda[i].end(), [&](const TransitionPoint& q) {
        return std::abs(q.s_star - tp.s_star) < 1e-6;
      });
      if (!seen) per_lambda[i].push_back(tp);
    }
    std::sort(per_lambda[i].begin(), per_lambda[i].end(),
              [](const TransitionPoint& a, const TransitionPoint& b) { return a.s_star < b.s_star; });
  });
  std::vector<TransitionPoint> out;
  for (auto& pts : per_lambda) out.insert(out.end(), pts.begin(), pts.end());
  return out;
}

}  // namespace rsa
