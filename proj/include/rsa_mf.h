/* Copyright 2026 The rsa-mf Authors
 * SPDX-License-Identifier: Apache-2.0
 *
 * C interface of the reverse-annealing mean-field engine.
 *
 * Every function returns an rsa_status. On failure the message of the last
 * error raised on the calling thread is available from rsa_last_error().
 * Pass RSA_BETA_INF (or any infinite value) as beta for zero temperature.
 */
#ifndef RSA_MF_H
#define RSA_MF_H

#include <stddef.h>

#if defined(RSA_MF_BUILDING)
#define RSA_MF_API __attribute__((visibility("default")))
#else
#define RSA_MF_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

#define RSA_BETA_INF (__builtin_inf())

typedef enum rsa_status {
  RSA_OK = 0,
  RSA_ERR_PARAMETER = 1,
  RSA_ERR_CONVERGENCE = 2,
  RSA_ERR_SIZE = 3,
  RSA_ERR_UNSUPPORTED = 4,
  RSA_ERR_NO_THRESHOLD = 5,
  RSA_ERR_IO = 6,
  RSA_ERR_NULL = 7,
  RSA_ERR_BUFFER = 8,
  RSA_ERR_INTERNAL = 9
} rsa_status;

typedef enum rsa_field_kind {
  RSA_FIELD_NONE = 0,
  RSA_FIELD_BIMODAL = 1,
  RSA_FIELD_GAUSSIAN = 2
} rsa_field_kind;

typedef struct rsa_spec {
  int p;
  double c;
  rsa_field_kind field;
  double h0;    /* bimodal */
  double sigma; /* gaussian */
  int nodes;    /* gaussian quadrature nodes */
  int has_nu;   /* nonzero selects the non-stoquastic Hamiltonian */
  double nu;
} rsa_spec;

typedef enum rsa_branch_source {
  RSA_SOURCE_FIXED_POINT = 0,
  RSA_SOURCE_GRID_REFINED = 1,
  RSA_SOURCE_BOUNDARY = 2,
  RSA_SOURCE_ANALYTIC_LAMBDA0 = 3
} rsa_branch_source;

typedef struct rsa_branch {
  double m;
  double mx; /* valid when has_mx */
  int has_mx;
  double f;
  int stable;
  rsa_branch_source source;
  double margin;
  int degenerate;
} rsa_branch;

typedef struct rsa_phase_options {
  double beta;
  double s_min;
  double s_max;
  double s_step;
  double jump_threshold;
  double s_tolerance;
  int fixed_point_grid;
  int energy_grid;
  int workers;
} rsa_phase_options;

typedef enum rsa_order { RSA_ORDER_FIRST = 0, RSA_ORDER_SECOND = 1 } rsa_order;

typedef struct rsa_transition {
  double lambda;
  double s_star;
  rsa_order order;
  double delta_m;
  double m_low;
  double m_high;
} rsa_transition;

typedef struct rsa_critical_c_options {
  rsa_phase_options phase;
  double lambda_step;
  double c_lo;
  double c_hi;
  double width;
} rsa_critical_c_options;

typedef struct rsa_critical_c_result {
  double c;
  double rounded;
  double c_lo;
  double c_hi;
} rsa_critical_c_result;

typedef struct rsa_lambda0_candidate {
  double m;
  double f;
  int admissible;
  int global;
} rsa_lambda0_candidate;

typedef struct rsa_ground_state {
  int n_sites;
  size_t dimension;
  double energy_per_site;
  double magnetization_per_site;
  double residual;
} rsa_ground_state;

typedef struct rsa_scaling_row {
  int n_sites;
  double e0_per_site;
  double m_per_site;
  double f_mf;
  double gap;
  double ratio;
} rsa_scaling_row;

typedef struct rsa_model rsa_model;
typedef struct rsa_transition_list rsa_transition_list;

RSA_MF_API const char* rsa_version(void);
RSA_MF_API const char* rsa_last_error(void);
RSA_MF_API const char* rsa_status_name(rsa_status status);

RSA_MF_API rsa_spec rsa_spec_default(void);
RSA_MF_API rsa_phase_options rsa_phase_options_default(void);
RSA_MF_API rsa_critical_c_options rsa_critical_c_options_default(void);

/* Model handle: validated spec plus its site classes. */
RSA_MF_API rsa_status rsa_model_create(const rsa_spec* spec, rsa_model** out);
RSA_MF_API void rsa_model_destroy(rsa_model* model);
RSA_MF_API rsa_status rsa_model_spec(const rsa_model* model, rsa_spec* out);
RSA_MF_API rsa_status rsa_model_class_count(const rsa_model* model, size_t* out);

/* Pointwise evaluators. */
RSA_MF_API rsa_status rsa_free_energy(const rsa_model* model, double m, double s, double lambda,
                                      double beta, double* out);
RSA_MF_API rsa_status rsa_self_rhs(const rsa_model* model, double m, double s, double lambda,
                                   double beta, double* out);
RSA_MF_API rsa_status rsa_free_energy_ns(const rsa_model* model, double mz, double mx, double s,
                                         double lambda, double beta, double* out);
RSA_MF_API rsa_status rsa_self_rhs_ns(const rsa_model* model, double mz, double mx, double s,
                                      double lambda, double beta, double* mz_out, double* mx_out);

/* Branch enumeration with the default (fine) solver grids. *count receives
 * the number of branches; RSA_ERR_BUFFER when it exceeds cap. */
RSA_MF_API rsa_status rsa_enumerate_branches(const rsa_model* model, double s, double lambda,
                                             double beta, rsa_branch* out, size_t cap, size_t* count);
RSA_MF_API rsa_status rsa_global_min(const rsa_model* model, double s, double lambda, double beta,
                                     rsa_branch* out);

/* Global minimum at each s of the grid (ascending); out holds n entries. */
RSA_MF_API rsa_status rsa_sweep(const rsa_model* model, double lambda, const double* s_grid, size_t n,
                                const rsa_phase_options* options, rsa_branch* out);

/* Transition lists are owned by the caller and released with
 * rsa_transition_list_destroy. */
RSA_MF_API rsa_status rsa_trace_line(const rsa_model* model, const double* lambda_grid, size_t n,
                                     const rsa_phase_options* options, rsa_transition_list** out);
RSA_MF_API rsa_status rsa_second_order_locus(const rsa_model* model, const double* lambda_grid,
                                             size_t n, const rsa_phase_options* options,
                                             rsa_transition_list** out);
RSA_MF_API rsa_status rsa_lambda0_transitions(const rsa_model* model, const rsa_phase_options* options,
                                              rsa_transition_list** out);
RSA_MF_API size_t rsa_transition_list_size(const rsa_transition_list* list);
RSA_MF_API rsa_status rsa_transition_list_get(const rsa_transition_list* list, size_t index,
                                              rsa_transition* out);
RSA_MF_API size_t rsa_transition_list_break_count(const rsa_transition_list* list);
RSA_MF_API rsa_status rsa_transition_list_break(const rsa_transition_list* list, size_t index,
                                                double* lo, double* hi);
RSA_MF_API void rsa_transition_list_destroy(rsa_transition_list* list);

RSA_MF_API rsa_status rsa_locate_transition(const rsa_model* model, double lambda, double s_lo,
                                            double s_hi, const rsa_phase_options* options,
                                            rsa_transition* out, int* found);

/* Largest first-order jump per lambda of a traced line; delta_m holds n values. */
RSA_MF_API rsa_status rsa_jump_profile(const rsa_transition_list* line, const double* lambda_grid,
                                       size_t n, double* delta_m);

/* spec->c is ignored. */
RSA_MF_API rsa_status rsa_critical_c(const rsa_spec* spec, const rsa_critical_c_options* options,
                                     rsa_critical_c_result* out);
RSA_MF_API rsa_status rsa_sc_lambda0(double c, int p, double* out);

/* Analytic lambda = 0 candidates; RSA_ERR_BUFFER when more than cap. */
RSA_MF_API rsa_status rsa_lambda0_candidates(const rsa_model* model, double s,
                                             rsa_lambda0_candidate* out, size_t cap, size_t* count);

/* Planar-rotor free energy (finite beta only). */
RSA_MF_API rsa_status rsa_log_bessel_i0(double x, double* out);
RSA_MF_API rsa_status rsa_svmc_free_energy(const rsa_model* model, double m, double s, double lambda,
                                           double beta, double* out);
RSA_MF_API rsa_status rsa_svmc_global_min(const rsa_model* model, double s, double lambda, double beta,
                                          rsa_branch* out);
/* Max over the n_points (s, lambda) pairs of |f_rotor(beta) - f_T0| at the
 * zero-temperature minimizer; max_gap holds n_betas values. */
RSA_MF_API rsa_status rsa_svmc_quantum_gap(const rsa_model* model, const double* s,
                                           const double* lambda, size_t n_points, const double* betas,
                                           size_t n_betas, double* max_gap);

/* Collective-spin exact diagonalization; cap bounds the basis dimension (0 selects the default). */
RSA_MF_API rsa_status rsa_ed_ground_state(const rsa_model* model, int n_sites, double s, double lambda,
                                          size_t cap, rsa_ground_state* out);
RSA_MF_API rsa_status rsa_ed_scaling(const rsa_model* model, double s, double lambda, const int* sizes,
                                     size_t n, size_t cap, rsa_scaling_row* out);

#ifdef __cplusplus
}
#endif

#endif /* RSA_MF_H */
