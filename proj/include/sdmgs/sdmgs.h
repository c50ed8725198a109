/*
 * SPDX-License-Identifier: Apache-2.0
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef SDMGS_SDMGS_H
#define SDMGS_SDMGS_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define SDMGS_API __declspec(dllexport)
#else
#define SDMGS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes. Zero is success; the rest mirror the library error codes. */
typedef enum sdmgs_status {
    SDMGS_OK = 0,
    SDMGS_E_INVALID_ARGUMENT,
    SDMGS_E_DIMENSION_MISMATCH,
    SDMGS_E_PARSE,
    SDMGS_E_VALIDATION,
    SDMGS_E_INFEASIBLE,
    SDMGS_E_NUMERICAL_FAILURE,
    SDMGS_E_NODE_LIMIT,
    SDMGS_E_MAX_INNER_ITERATIONS,
    SDMGS_E_NONDESCENT_DIRECTION,
    SDMGS_E_DEGENERATE_DENOMINATOR,
    SDMGS_E_MISSING_PACKET,
    SDMGS_E_WORKER_FAILURE,
    SDMGS_E_TOO_LARGE,
    SDMGS_E_NOT_PURE_INTEGER,
    SDMGS_E_NO_CERTIFICATE,
    SDMGS_E_NONDETERMINISTIC_TRAJECTORY,
    SDMGS_E_UNSUPPORTED,
    SDMGS_E_IO,
    SDMGS_E_INTERNAL
} sdmgs_status;

typedef struct sdmgs_instance sdmgs_instance;
typedef struct sdmgs_run sdmgs_run;

/* Message of the last failed call on this thread; empty after success. */
SDMGS_API const char* sdmgs_last_error(void);
SDMGS_API const char* sdmgs_status_name(sdmgs_status status);
SDMGS_API const char* sdmgs_version(void);

/* Instances. */
SDMGS_API sdmgs_status sdmgs_instance_load(const char* path, sdmgs_instance** out);
SDMGS_API sdmgs_status sdmgs_instance_parse(const char* json, sdmgs_instance** out);
SDMGS_API sdmgs_status sdmgs_instance_generate(uint64_t seed, size_t blocks, size_t vars_per_block, double density,
                                               int quadratic, sdmgs_instance** out);
SDMGS_API sdmgs_status sdmgs_instance_save(const sdmgs_instance* inst, const char* path);
SDMGS_API sdmgs_status sdmgs_instance_shape(const sdmgs_instance* inst, size_t* blocks, size_t* coupling_dim);
SDMGS_API void sdmgs_instance_free(sdmgs_instance* inst);

/* Augmented Lagrangian runs. */
typedef struct sdmgs_alm_config {
    double rho0;
    double gamma;
    double eps;
    size_t t_max;
    size_t k_max;
    int rho_kiwiel;     /* 0 keeps rho fixed */
    size_t rho_freeze;  /* serious steps after which rho stays put */
    int use_ssc;        /* 0 takes the dual step every iteration */
    size_t hull_cap;    /* 0 keeps every vertex */
    size_t threads;
} sdmgs_alm_config;

SDMGS_API void sdmgs_alm_config_default(sdmgs_alm_config* cfg);

typedef struct sdmgs_iteration {
    size_t k;
    double phi_check_best;
    double phi_hat;
    double residual_norm;
    double gamma_k;
    int serious;
    double rho;
    double wall_ms;
} sdmgs_iteration;

typedef struct sdmgs_subgradient_iteration {
    size_t k;
    double phi;
    double phi_best;
    double residual_norm;
    double step;
    double wall_ms;
} sdmgs_subgradient_iteration;

SDMGS_API sdmgs_status sdmgs_run_alm(const sdmgs_instance* inst, const sdmgs_alm_config* cfg, sdmgs_run** out);
SDMGS_API sdmgs_status sdmgs_run_subgradient(const sdmgs_instance* inst, double s0, size_t k_max, sdmgs_run** out);

/* 1 for augmented Lagrangian runs, 0 for subgradient runs. */
SDMGS_API int sdmgs_run_is_alm(const sdmgs_run* run);
/* 1 when the run met the eps test; always 0 for subgradient runs. */
SDMGS_API int sdmgs_run_converged(const sdmgs_run* run);
SDMGS_API size_t sdmgs_run_record_count(const sdmgs_run* run);
SDMGS_API sdmgs_status sdmgs_run_record(const sdmgs_run* run, size_t index, sdmgs_iteration* out);
SDMGS_API sdmgs_status sdmgs_run_subgradient_record(const sdmgs_run* run, size_t index,
                                                    sdmgs_subgradient_iteration* out);
/* Best lower bound and the last upper estimate; phi_hat is NaN for subgradient runs. */
SDMGS_API sdmgs_status sdmgs_run_final_bounds(const sdmgs_run* run, double* lower, double* phi_hat);
/* Largest reduce count in one loop iteration and the replicated payload in bytes. */
SDMGS_API sdmgs_status sdmgs_run_comm_stats(const sdmgs_run* run, size_t* reduces_per_iteration,
                                            size_t* replicated_bytes);
/* Writes the iteration CSV; path "-" writes to stdout. */
SDMGS_API sdmgs_status sdmgs_run_write_csv(const sdmgs_run* run, const char* path);
SDMGS_API void sdmgs_run_free(sdmgs_run* run);

/* Exact bounds by enumeration. */
typedef struct sdmgs_oracle_result {
    double zeta_star;
    double zeta_ld;
    double zeta_cld;
} sdmgs_oracle_result;

SDMGS_API sdmgs_status sdmgs_oracle(const sdmgs_instance* inst, sdmgs_oracle_result* out);

/* Experiment harnesses. */
SDMGS_API sdmgs_status sdmgs_ssc_sweep(const sdmgs_instance* inst, const double* gammas, size_t gamma_count,
                                       const double* rhos, size_t rho_count, size_t k_max,
                                       const sdmgs_alm_config* base, const char* out_dir, size_t* cells);

typedef struct sdmgs_speedup_row {
    size_t threads;
    double ms_per_iteration;
    double speedup;
} sdmgs_speedup_row;

/* rows must hold thread_count entries. */
SDMGS_API sdmgs_status sdmgs_speedup(const sdmgs_instance* inst, const sdmgs_alm_config* cfg,
                                     const size_t* thread_counts, size_t thread_count, size_t repeats,
                                     sdmgs_speedup_row* rows);
SDMGS_API sdmgs_status sdmgs_speedup_write_tsv(const sdmgs_speedup_row* rows, size_t count, const char* path);

#ifdef __cplusplus
}
#endif

#endif
