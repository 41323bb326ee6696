// Copyright 2026 The rsa-mf Authors
// SPDX-License-Identifier: Apache-2.0

#include "rsa_mf.h"

#include <cmath>
#include <exception>
#include <new>
#include <string>
#include <vector>

#include "rsa/ed_oracle.hpp"
#include "rsa/errors.hpp"
#include "rsa/phase.hpp"
#include "rsa/svmc.hpp"

struct rsa_model {
  rsa::Model model;
};

struct rsa_transition_list {
  rsa::TransitionLine line;
};

namespace {

thread_local std::string g_last_error;

rsa_status fail(rsa_status status, const char* what) {
  g_last_error = what;
  return status;
}

// Maps the engine's exception hierarchy onto status codes.
template <class Fn>
rsa_status guard(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return RSA_OK;
  } catch (const rsa::ParameterError& e) {
    return fail(RSA_ERR_PARAMETER, e.what());
  } catch (const rsa::ConvergenceError& e) {
    return fail(RSA_ERR_CONVERGENCE, e.what());
  } catch (const rsa::SizeError& e) {
    return fail(RSA_ERR_SIZE, e.what());
  } catch (const rsa::UnsupportedModeError& e) {
    return fail(RSA_ERR_UNSUPPORTED, e.what());
  } catch (const rsa::NoThresholdError& e) {
    return fail(RSA_ERR_NO_THRESHOLD, e.what());
  } catch (const rsa::IoError& e) {
    return fail(RSA_ERR_IO, e.what());
  } catch (const std::bad_alloc&) {
    return fail(RSA_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(RSA_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(RSA_ERR_INTERNAL, "unknown error");
  }
}

template <class... Ptrs>
bool any_null(Ptrs... ptrs) {
  return ((ptrs == nullptr) || ...);
}

#define RSA_REQUIRE(...) \
  if (any_null(__VA_ARGS__)) return fail(RSA_ERR_NULL, "null argument")

rsa::ModelSpec to_spec(const rsa_spec& in) {
  rsa::ModelSpec spec;
  spec.p = in.p;
  spec.c = in.c;
  switch (in.field) {
    case RSA_FIELD_NONE:
      spec.field = rsa::NoField{};
      break;
    case RSA_FIELD_BIMODAL:
      spec.field = rsa::BimodalField{in.h0};
      break;
    case RSA_FIELD_GAUSSIAN:
      spec.field = rsa::GaussianField{in.sigma, in.nodes};
      break;
    default:
      throw rsa::ParameterError("unknown field kind");
  }
  if (in.has_nu) spec.nu = in.nu;
  return spec;
}

rsa_spec from_spec(const rsa::ModelSpec& spec) {
  rsa_spec out = rsa_spec_default();
  out.p = spec.p;
  out.c = spec.c;
  if (const auto* b = std::get_if<rsa::BimodalField>(&spec.field)) {
    out.field = RSA_FIELD_BIMODAL;
    out.h0 = b->h0;
  } else if (const auto* g = std::get_if<rsa::GaussianField>(&spec.field)) {
    out.field = RSA_FIELD_GAUSSIAN;
    out.sigma = g->sigma;
    out.nodes = g->nodes;
  } else {
    out.field = RSA_FIELD_NONE;
  }
  out.has_nu = spec.nu.has_value() ? 1 : 0;
  out.nu = spec.nu.value_or(1.0);
  return out;
}

rsa::PhaseOptions to_phase(const rsa_phase_options* in) {
  rsa::PhaseOptions o;
  if (in == nullptr) return o;
  o.beta = in->beta;
  o.s_min = in->s_min;
  o.s_max = in->s_max;
  o.s_step = in->s_step;
  o.jump_threshold = in->jump_threshold;
  o.s_tolerance = in->s_tolerance;
  o.solver.fixed_point_grid = in->fixed_point_grid;
  o.solver.energy_grid = in->energy_grid;
  o.workers = in->workers;
  if (o.solver.fixed_point_grid < 3 || o.solver.energy_grid < 3) {
    throw rsa::ParameterError("solver grids need at least 3 points");
  }
  if (!(o.s_min >= 0.0 && o.s_max <= 1.0 && o.s_min < o.s_max)) {
    throw rsa::ParameterError("s range must satisfy 0 <= s_min < s_max <= 1");
  }
  if (!(o.s_tolerance > 0.0) || !(o.jump_threshold > 0.0)) {
    throw rsa::ParameterError("tolerances must be positive");
  }
  rsa::check_beta(o.beta);
  return o;
}

rsa_branch to_c(const rsa::Branch& b) {
  rsa_branch out{};
  out.m = b.m;
  out.has_mx = b.mx.has_value() ? 1 : 0;
  out.mx = b.mx.value_or(0.0);
  out.f = b.f;
  out.stable = b.stable ? 1 : 0;
  out.source = static_cast<rsa_branch_source>(b.source);
  out.margin = b.margin;
  out.degenerate = b.degenerate ? 1 : 0;
  return out;
}

rsa_transition to_c(const rsa::TransitionPoint& t) {
  return {t.lambda, t.s_star,
          t.order == rsa::TransitionOrder::first ? RSA_ORDER_FIRST : RSA_ORDER_SECOND,
          t.delta_m, t.m_low, t.m_high};
}

std::size_t ed_cap(std::size_t cap) { return cap == 0 ? rsa::kDefaultEdCap : cap; }

}  // namespace

extern "C" {

const char* rsa_version(void) { return "0.1.0"; }

const char* rsa_last_error(void) { return g_last_error.c_str(); }

const char* rsa_status_name(rsa_status status) {
  switch (status) {
    case RSA_OK: return "ok";
    case RSA_ERR_PARAMETER: return "parameter error";
    case RSA_ERR_CONVERGENCE: return "convergence error";
    case RSA_ERR_SIZE: return "size error";
    case RSA_ERR_UNSUPPORTED: return "unsupported mode";
    case RSA_ERR_NO_THRESHOLD: return "no threshold";
    case RSA_ERR_IO: return "i/o error";
    case RSA_ERR_NULL: return "null argument";
    case RSA_ERR_BUFFER: return "buffer too small";
    case RSA_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

rsa_spec rsa_spec_default(void) {
  rsa_spec s{};
  s.p = 3;
  s.c = 0.8;
  s.field = RSA_FIELD_NONE;
  s.h0 = 0.5;
  s.sigma = 1.0;
  s.nodes = 64;
  s.has_nu = 0;
  s.nu = 1.0;
  return s;
}

rsa_phase_options rsa_phase_options_default(void) {
  const rsa::PhaseOptions o;
  return {o.beta, o.s_min, o.s_max, o.s_step, o.jump_threshold, o.s_tolerance,
          o.solver.fixed_point_grid, o.solver.energy_grid, o.workers};
}

rsa_critical_c_options rsa_critical_c_options_default(void) {
  const rsa::CriticalCOptions o;
  rsa_critical_c_options out{};
  out.phase = {o.phase.beta, o.phase.s_min, o.phase.s_max, o.phase.s_step, o.phase.jump_threshold,
               o.phase.s_tolerance, o.phase.solver.fixed_point_grid, o.phase.solver.energy_grid,
               o.phase.workers};
  out.lambda_step = o.lambda_step;
  out.c_lo = o.c_lo;
  out.c_hi = o.c_hi;
  out.width = o.width;
  return out;
}

rsa_status rsa_model_create(const rsa_spec* spec, rsa_model** out) {
  RSA_REQUIRE(spec, out);
  *out = nullptr;
  return guard([&] { *out = new rsa_model{rsa::Model(to_spec(*spec))}; });
}

void rsa_model_destroy(rsa_model* model) { delete model; }

rsa_status rsa_model_spec(const rsa_model* model, rsa_spec* out) {
  RSA_REQUIRE(model, out);
  return guard([&] { *out = from_spec(model->model.spec()); });
}

rsa_status rsa_model_class_count(const rsa_model* model, size_t* out) {
  RSA_REQUIRE(model, out);
  return guard([&] { *out = model->model.classes().size(); });
}

rsa_status rsa_free_energy(const rsa_model* model, double m, double s, double lambda, double beta,
                           double* out) {
  RSA_REQUIRE(model, out);
  return guard([&] {
    *out = rsa::free_energy(m, rsa::clamped({s, lambda}), model->model, beta);
  });
}

rsa_status rsa_self_rhs(const rsa_model* model, double m, double s, double lambda, double beta,
                        double* out) {
  RSA_REQUIRE(model, out);
  return guard([&] {
    rsa::check_order_parameter(m);
    rsa::check_beta(beta);
    *out = rsa::self_rhs(m, rsa::clamped({s, lambda}), model->model, beta);
  });
}

rsa_status rsa_free_energy_ns(const rsa_model* model, double mz, double mx, double s, double lambda,
                              double beta, double* out) {
  RSA_REQUIRE(model, out);
  return guard([&] {
    *out = rsa::free_energy_ns({mz, mx}, rsa::clamped({s, lambda}), model->model, beta);
  });
}

rsa_status rsa_self_rhs_ns(const rsa_model* model, double mz, double mx, double s, double lambda,
                           double beta, double* mz_out, double* mx_out) {
  RSA_REQUIRE(model, mz_out, mx_out);
  return guard([&] {
    const auto r = rsa::self_rhs_ns({mz, mx}, rsa::clamped({s, lambda}), model->model, beta);
    *mz_out = r.mz;
    *mx_out = r.mx;
  });
}

rsa_status rsa_enumerate_branches(const rsa_model* model, double s, double lambda, double beta,
                                  rsa_branch* out, size_t cap, size_t* count) {
  RSA_REQUIRE(model, count);
  if (cap > 0 && out == nullptr) return fail(RSA_ERR_NULL, "null argument");
  bool overflow = false;
  const auto status = guard([&] {
    const auto branches = rsa::enumerate_branches(rsa::clamped({s, lambda}), model->model, beta);
    *count = branches.size();
    overflow = branches.size() > cap;
    for (std::size_t i = 0; i < branches.size() && i < cap; ++i) out[i] = to_c(branches[i]);
  });
  if (status == RSA_OK && overflow) return fail(RSA_ERR_BUFFER, "branch buffer too small");
  return status;
}

rsa_status rsa_global_min(const rsa_model* model, double s, double lambda, double beta, rsa_branch* out) {
  RSA_REQUIRE(model, out);
  return guard([&] { *out = to_c(rsa::global_min(rsa::clamped({s, lambda}), model->model, beta)); });
}

rsa_status rsa_sweep(const rsa_model* model, double lambda, const double* s_grid, size_t n,
                     const rsa_phase_options* options, rsa_branch* out) {
  RSA_REQUIRE(model, s_grid, out);
  return guard([&] {
    const auto rows = rsa::sweep_s(lambda, model->model, {s_grid, n}, to_phase(options));
    for (std::size_t i = 0; i < rows.size(); ++i) out[i] = to_c(rows[i].second);
  });
}

rsa_status rsa_trace_line(const rsa_model* model, const double* lambda_grid, size_t n,
                          const rsa_phase_options* options, rsa_transition_list** out) {
  RSA_REQUIRE(model, lambda_grid, out);
  *out = nullptr;
  return guard([&] {
    auto line = rsa::trace_line(model->model, {lambda_grid, n}, to_phase(options));
    *out = new rsa_transition_list{std::move(line)};
  });
}

rsa_status rsa_second_order_locus(const rsa_model* model, const double* lambda_grid, size_t n,
                                  const rsa_phase_options* options, rsa_transition_list** out) {
  RSA_REQUIRE(model, lambda_grid, out);
  *out = nullptr;
  return guard([&] {
    rsa::TransitionLine line;
    line.points = rsa::second_order_locus(model->model, {lambda_grid, n}, to_phase(options));
    *out = new rsa_transition_list{std::move(line)};
  });
}

rsa_status rsa_lambda0_transitions(const rsa_model* model, const rsa_phase_options* options,
                                   rsa_transition_list** out) {
  RSA_REQUIRE(model, out);
  *out = nullptr;
  return guard([&] {
    rsa::TransitionLine line;
    line.points = rsa::lambda0_transitions(model->model, to_phase(options));
    *out = new rsa_transition_list{std::move(line)};
  });
}

size_t rsa_transition_list_size(const rsa_transition_list* list) {
  return list == nullptr ? 0 : list->line.points.size();
}

rsa_status rsa_transition_list_get(const rsa_transition_list* list, size_t index, rsa_transition* out) {
  RSA_REQUIRE(list, out);
  if (index >= list->line.points.size()) return fail(RSA_ERR_PARAMETER, "transition index out of range");
  *out = to_c(list->line.points[index]);
  return RSA_OK;
}

size_t rsa_transition_list_break_count(const rsa_transition_list* list) {
  return list == nullptr ? 0 : list->line.breaks.size();
}

rsa_status rsa_transition_list_break(const rsa_transition_list* list, size_t index, double* lo,
                                     double* hi) {
  RSA_REQUIRE(list, lo, hi);
  if (index >= list->line.breaks.size()) return fail(RSA_ERR_PARAMETER, "break index out of range");
  *lo = list->line.breaks[index].lo;
  *hi = list->line.breaks[index].hi;
  return RSA_OK;
}

void rsa_transition_list_destroy(rsa_transition_list* list) { delete list; }

rsa_status rsa_locate_transition(const rsa_model* model, double lambda, double s_lo, double s_hi,
                                 const rsa_phase_options* options, rsa_transition* out, int* found) {
  RSA_REQUIRE(model, out, found);
  return guard([&] {
    const auto tp = rsa::locate_transition(lambda, model->model, s_lo, s_hi, to_phase(options));
    *found = tp.has_value() ? 1 : 0;
    if (tp) *out = to_c(*tp);
  });
}

rsa_status rsa_jump_profile(const rsa_transition_list* line, const double* lambda_grid, size_t n,
                            double* delta_m) {
  RSA_REQUIRE(line, lambda_grid, delta_m);
  return guard([&] {
    const auto rows = rsa::jump_profile(line->line, {lambda_grid, n});
    for (std::size_t i = 0; i < rows.size(); ++i) delta_m[i] = rows[i].delta_m;
  });
}

rsa_status rsa_critical_c(const rsa_spec* spec, const rsa_critical_c_options* options,
                          rsa_critical_c_result* out) {
  RSA_REQUIRE(spec, out);
  return guard([&] {
    rsa::CriticalCOptions o;
    if (options != nullptr) {
      o.phase = to_phase(&options->phase);
      o.lambda_step = options->lambda_step;
      o.c_lo = options->c_lo;
      o.c_hi = options->c_hi;
      o.width = options->width;
    }
    auto s = to_spec(*spec);
    s.c = o.c_lo;
    const auto r = rsa::critical_c(s, o);
    *out = {r.c, r.rounded, r.c_lo, r.c_hi};
  });
}

rsa_status rsa_sc_lambda0(double c, int p, double* out) {
  RSA_REQUIRE(out);
  return guard([&] { *out = rsa::sc_lambda0(c, p); });
}

rsa_status rsa_lambda0_candidates(const rsa_model* model, double s, rsa_lambda0_candidate* out, size_t cap,
                                  size_t* count) {
  RSA_REQUIRE(model, count);
  if (cap > 0 && out == nullptr) return fail(RSA_ERR_NULL, "null argument");
  bool overflow = false;
  const auto status = guard([&] {
    const auto cands = rsa::lambda0_candidates(model->model, s);
    *count = cands.size();
    overflow = cands.size() > cap;
    for (std::size_t i = 0; i < cands.size() && i < cap; ++i) {
      out[i] = {cands[i].m, cands[i].f, cands[i].admissible ? 1 : 0, cands[i].global ? 1 : 0};
    }
  });
  if (status == RSA_OK && overflow) return fail(RSA_ERR_BUFFER, "candidate buffer too small");
  return status;
}

rsa_status rsa_log_bessel_i0(double x, double* out) {
  RSA_REQUIRE(out);
  return guard([&] { *out = rsa::log_bessel_i0(x); });
}

rsa_status rsa_svmc_free_energy(const rsa_model* model, double m, double s, double lambda, double beta,
                                double* out) {
  RSA_REQUIRE(model, out);
  return guard([&] { *out = rsa::svmc_free_energy(m, rsa::clamped({s, lambda}), model->model, beta).f; });
}

rsa_status rsa_svmc_global_min(const rsa_model* model, double s, double lambda, double beta,
                               rsa_branch* out) {
  RSA_REQUIRE(model, out);
  return guard([&] { *out = to_c(rsa::svmc_global_min(rsa::clamped({s, lambda}), model->model, beta)); });
}

rsa_status rsa_svmc_quantum_gap(const rsa_model* model, const double* s, const double* lambda,
                                size_t n_points, const double* betas, size_t n_betas, double* max_gap) {
  RSA_REQUIRE(model, s, lambda, betas, max_gap);
  return guard([&] {
    std::vector<rsa::AnnealPoint> grid;
    for (std::size_t i = 0; i < n_points; ++i) grid.push_back(rsa::clamped({s[i], lambda[i]}));
    const auto rows = rsa::svmc_quantum_gap(grid, model->model, {betas, n_betas});
    for (std::size_t i = 0; i < rows.size(); ++i) max_gap[i] = rows[i].max_gap;
  });
}

rsa_status rsa_ed_ground_state(const rsa_model* model, int n_sites, double s, double lambda, size_t cap,
                               rsa_ground_state* out) {
  RSA_REQUIRE(model, out);
  return guard([&] {
    const auto basis = rsa::build_basis(n_sites, model->model, ed_cap(cap));
    const auto h = rsa::build_hamiltonian(basis, rsa::clamped({s, lambda}), model->model);
    const auto gs = rsa::ground_state(basis, h, ed_cap(cap));
    *out = {gs.n_sites, basis.dimension, gs.energy_per_site, gs.magnetization_per_site, gs.residual};
  });
}

rsa_status rsa_ed_scaling(const rsa_model* model, double s, double lambda, const int* sizes, size_t n,
                          size_t cap, rsa_scaling_row* out) {
  RSA_REQUIRE(model, sizes, out);
  return guard([&] {
    const auto rows = rsa::scaling_report(model->model, rsa::clamped({s, lambda}),
                                          std::vector<int>(sizes, sizes + n), ed_cap(cap));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      out[i] = {rows[i].n_sites, rows[i].e0_per_site, rows[i].m_per_site, rows[i].f_mf, rows[i].gap,
                rows[i].ratio};
    }
  });
}

}  // extern "C"
