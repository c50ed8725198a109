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

#include "sdmgs/sdmgs.h"

#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <new>
#include <string>
#include <variant>

#include "sdmgs/alm.hpp"
#include "sdmgs/error.hpp"
#include "sdmgs/generator.hpp"
#include "sdmgs/harness.hpp"
#include "sdmgs/instance_io.hpp"
#include "sdmgs/oracle.hpp"

struct sdmgs_instance {
    sdmgs::ProblemInstance inst;
};

struct sdmgs_run {
    std::variant<sdmgs::AlmResult, std::vector<sdmgs::SubgradientRecord>> data;
};

namespace {

thread_local std::string last_error;

static_assert(static_cast<int>(sdmgs::ErrorCode::io_error) + 1 == SDMGS_E_IO);
static_assert(static_cast<int>(sdmgs::ErrorCode::invalid_argument) + 1 == SDMGS_E_INVALID_ARGUMENT);

sdmgs_status from_code(sdmgs::ErrorCode code) {
    return static_cast<sdmgs_status>(static_cast<int>(code) + 1);
}

template <class F>
sdmgs_status guarded(F&& body) {
    try {
        body();
        last_error.clear();
        return SDMGS_OK;
    } catch (const sdmgs::Error& e) {
        last_error = e.what();
        return from_code(e.code());
    } catch (const std::bad_alloc&) {
        last_error = "out of memory";
        return SDMGS_E_INTERNAL;
    } catch (const std::exception& e) {
        last_error = e.what();
        return SDMGS_E_INTERNAL;
    }
}

sdmgs_status null_argument(const char* what) {
    last_error = std::string("invalid_argument: null ") + what;
    return SDMGS_E_INVALID_ARGUMENT;
}

sdmgs::AlmConfig to_config(const sdmgs_alm_config& c) {
    sdmgs::AlmConfig cfg;
    cfg.rho0 = c.rho0;
    cfg.gamma = c.gamma;
    cfg.eps = c.eps;
    cfg.t_max = c.t_max;
    cfg.k_max = c.k_max;
    cfg.rho_mode = c.rho_kiwiel ? sdmgs::RhoMode::kiwiel : sdmgs::RhoMode::fixed;
    cfg.rho_freeze = c.rho_freeze;
    cfg.use_ssc = c.use_ssc != 0;
    cfg.hull_cap = c.hull_cap;
    cfg.threads = c.threads;
    return cfg;
}

template <class Write>
void with_output(const char* path, Write&& write) {
    if (std::string(path) == "-") {
        write(std::cout);
        std::cout.flush();
        return;
    }
    std::ofstream out(path);
    if (!out) throw sdmgs::Error(sdmgs::ErrorCode::io_error, std::string("cannot open ") + path);
    write(out);
    if (!out) throw sdmgs::Error(sdmgs::ErrorCode::io_error, std::string("write failed: ") + path);
}

}  // namespace

extern "C" {

const char* sdmgs_last_error(void) { return last_error.c_str(); }

const char* sdmgs_status_name(sdmgs_status status) {
    if (status == SDMGS_OK) return "ok";
    if (status == SDMGS_E_INTERNAL) return "internal";
    if (status > SDMGS_OK && status < SDMGS_E_INTERNAL) {
        return sdmgs::to_string(static_cast<sdmgs::ErrorCode>(static_cast<int>(status) - 1));
    }
    return "unknown";
}

const char* sdmgs_version(void) { return "0.1.0"; }

sdmgs_status sdmgs_instance_load(const char* path, sdmgs_instance** out) {
    if (!path) return null_argument("path");
    if (!out) return null_argument("out");
    return guarded([&] { *out = new sdmgs_instance{sdmgs::parse_instance(path)}; });
}

sdmgs_status sdmgs_instance_parse(const char* json, sdmgs_instance** out) {
    if (!json) return null_argument("json");
    if (!out) return null_argument("out");
    return guarded([&] { *out = new sdmgs_instance{sdmgs::parse_instance_json(json)}; });
}

sdmgs_status sdmgs_instance_generate(uint64_t seed, size_t blocks, size_t vars_per_block, double density,
                                     int quadratic, sdmgs_instance** out) {
    if (!out) return null_argument("out");
    return guarded([&] {
        if (blocks == 0 || vars_per_block == 0) {
            throw sdmgs::Error(sdmgs::ErrorCode::invalid_argument, "generator shape must be positive");
        }
        if (!(density >= 0.0 && density <= 1.0)) {
            throw sdmgs::Error(sdmgs::ErrorCode::invalid_argument, "density must lie in [0,1]");
        }
        *out = new sdmgs_instance{sdmgs::generate_instance(seed, blocks, vars_per_block, density, quadratic != 0)};
    });
}

sdmgs_status sdmgs_instance_save(const sdmgs_instance* inst, const char* path) {
    if (!inst) return null_argument("instance");
    if (!path) return null_argument("path");
    return guarded([&] { with_output(path, [&](std::ostream& o) { o << sdmgs::write_instance_json(inst->inst); }); });
}

sdmgs_status sdmgs_instance_shape(const sdmgs_instance* inst, size_t* blocks, size_t* coupling_dim) {
    if (!inst) return null_argument("instance");
    if (blocks) *blocks = inst->inst.block_count();
    if (coupling_dim) *coupling_dim = inst->inst.coupling_dim();
    last_error.clear();
    return SDMGS_OK;
}

void sdmgs_instance_free(sdmgs_instance* inst) { delete inst; }

void sdmgs_alm_config_default(sdmgs_alm_config* cfg) {
    if (!cfg) return;
    const sdmgs::AlmConfig d;
    cfg->rho0 = d.rho0;
    cfg->gamma = d.gamma;
    cfg->eps = d.eps;
    cfg->t_max = d.t_max;
    cfg->k_max = d.k_max;
    cfg->rho_kiwiel = d.rho_mode == sdmgs::RhoMode::kiwiel;
    cfg->rho_freeze = d.rho_freeze;
    cfg->use_ssc = d.use_ssc;
    cfg->hull_cap = d.hull_cap;
    cfg->threads = d.threads;
}

sdmgs_status sdmgs_run_alm(const sdmgs_instance* inst, const sdmgs_alm_config* cfg, sdmgs_run** out) {
    if (!inst) return null_argument("instance");
    if (!cfg) return null_argument("config");
    if (!out) return null_argument("out");
    return guarded([&] { *out = new sdmgs_run{sdmgs::run_sdm_gs_alm(inst->inst, to_config(*cfg))}; });
}

sdmgs_status sdmgs_run_subgradient(const sdmgs_instance* inst, double s0, size_t k_max, sdmgs_run** out) {
    if (!inst) return null_argument("instance");
    if (!out) return null_argument("out");
    return guarded([&] {
        sdmgs::SubgradientConfig cfg;
        cfg.s0 = s0;
        cfg.k_max = k_max;
        *out = new sdmgs_run{sdmgs::run_subgradient_baseline(inst->inst, cfg)};
    });
}

int sdmgs_run_is_alm(const sdmgs_run* run) { return run && run->data.index() == 0; }

int sdmgs_run_converged(const sdmgs_run* run) {
    if (!run || run->data.index() != 0) return 0;
    return std::get<0>(run->data).status == sdmgs::AlmStatus::converged;
}

size_t sdmgs_run_record_count(const sdmgs_run* run) {
    if (!run) return 0;
    if (run->data.index() == 0) return std::get<0>(run->data).records.size();
    return std::get<1>(run->data).size();
}

sdmgs_status sdmgs_run_record(const sdmgs_run* run, size_t index, sdmgs_iteration* out) {
    if (!run) return null_argument("run");
    if (!out) return null_argument("out");
    return guarded([&] {
        if (run->data.index() != 0) throw sdmgs::Error(sdmgs::ErrorCode::invalid_argument, "not an augmented Lagrangian run");
        const auto& recs = std::get<0>(run->data).records;
        if (index >= recs.size()) throw sdmgs::Error(sdmgs::ErrorCode::invalid_argument, "record index out of range");
        const auto& r = recs[index];
        *out = {r.k, r.phi_check_best, r.phi_hat, r.residual_norm, r.gamma_k, r.serious ? 1 : 0, r.rho, r.wall_ms};
    });
}

sdmgs_status sdmgs_run_subgradient_record(const sdmgs_run* run, size_t index, sdmgs_subgradient_iteration* out) {
    if (!run) return null_argument("run");
    if (!out) return null_argument("out");
    return guarded([&] {
        if (run->data.index() != 1) throw sdmgs::Error(sdmgs::ErrorCode::invalid_argument, "not a subgradient run");
        const auto& recs = std::get<1>(run->data);
        if (index >= recs.size()) throw sdmgs::Error(sdmgs::ErrorCode::invalid_argument, "record index out of range");
        const auto& r = recs[index];
        *out = {r.k, r.phi, r.phi_best, r.residual_norm, r.step, r.wall_ms};
    });
}

sdmgs_status sdmgs_run_final_bounds(const sdmgs_run* run, double* lower, double* phi_hat) {
    if (!run) return null_argument("run");
    return guarded([&] {
        if (sdmgs_run_record_count(run) == 0) throw sdmgs::Error(sdmgs::ErrorCode::invalid_argument, "run has no records");
        if (run->data.index() == 0) {
            const auto& last = std::get<0>(run->data).records.back();
            if (lower) *lower = last.phi_check_best;
            if (phi_hat) *phi_hat = last.phi_hat;
        } else {
            if (lower) *lower = std::get<1>(run->data).back().phi_best;
            if (phi_hat) *phi_hat = std::numeric_limits<double>::quiet_NaN();
        }
    });
}

sdmgs_status sdmgs_run_comm_stats(const sdmgs_run* run, size_t* reduces_per_iteration, size_t* replicated_bytes) {
    if (!run) return null_argument("run");
    return guarded([&] {
        if (run->data.index() != 0) throw sdmgs::Error(sdmgs::ErrorCode::invalid_argument, "not an augmented Lagrangian run");
        const auto& r = std::get<0>(run->data);
        std::size_t most = 0;
        for (std::size_t c : r.reduces_per_iteration) most = std::max(most, c);
        if (reduces_per_iteration) *reduces_per_iteration = most;
        if (replicated_bytes) *replicated_bytes = r.replicated_bytes;
    });
}

sdmgs_status sdmgs_run_write_csv(const sdmgs_run* run, const char* path) {
    if (!run) return null_argument("run");
    if (!path) return null_argument("path");
    return guarded([&] {
        with_output(path, [&](std::ostream& o) {
            if (run->data.index() == 0) {
                sdmgs::write_iteration_csv(o, std::get<0>(run->data).records);
            } else {
                sdmgs::write_subgradient_csv(o, std::get<1>(run->data));
            }
        });
    });
}

void sdmgs_run_free(sdmgs_run* run) { delete run; }

sdmgs_status sdmgs_oracle(const sdmgs_instance* inst, sdmgs_oracle_result* out) {
    if (!inst) return null_argument("instance");
    if (!out) return null_argument("out");
    return guarded([&] {
        const auto r = sdmgs::run_oracle(inst->inst);
        *out = {r.zeta_star, r.zeta_ld, r.zeta_cld};
    });
}

sdmgs_status sdmgs_ssc_sweep(const sdmgs_instance* inst, const double* gammas, size_t gamma_count, const double* rhos,
                             size_t rho_count, size_t k_max, const sdmgs_alm_config* base, const char* out_dir,
                             size_t* cells) {
    if (!inst) return null_argument("instance");
    if (!base) return null_argument("config");
    if (gamma_count > 0 && !gammas) return null_argument("gammas");
    if (rho_count > 0 && !rhos) return null_argument("rhos");
    return guarded([&] {
        const auto grid = sdmgs::ssc_sweep(inst->inst, std::vector<double>(gammas, gammas + gamma_count),
                                           std::vector<double>(rhos, rhos + rho_count), k_max, to_config(*base),
                                           out_dir ? out_dir : "");
        if (cells) *cells = grid.size();
    });
}

sdmgs_status sdmgs_speedup(const sdmgs_instance* inst, const sdmgs_alm_config* cfg, const size_t* thread_counts,
                           size_t thread_count, size_t repeats, sdmgs_speedup_row* rows) {
    if (!inst) return null_argument("instance");
    if (!cfg) return null_argument("config");
    if (!thread_counts) return null_argument("thread_counts");
    if (!rows) return null_argument("rows");
    return guarded([&] {
        const auto table = sdmgs::speedup_harness(inst->inst, to_config(*cfg),
                                                  std::vector<std::size_t>(thread_counts, thread_counts + thread_count),
                                                  repeats);
        for (std::size_t i = 0; i < table.size(); ++i) {
            rows[i] = {table[i].threads, table[i].ms_per_iteration, table[i].speedup};
        }
    });
}

sdmgs_status sdmgs_speedup_write_tsv(const sdmgs_speedup_row* rows, size_t count, const char* path) {
    if (!rows && count > 0) return null_argument("rows");
    if (!path) return null_argument("path");
    return guarded([&] {
        std::vector<sdmgs::SpeedupRow> table;
        for (std::size_t i = 0; i < count; ++i) table.push_back({rows[i].threads, rows[i].ms_per_iteration, rows[i].speedup});
        with_output(path, [&](std::ostream& o) { sdmgs::write_speedup_tsv(o, table); });
    });
}

}  // extern "C"
