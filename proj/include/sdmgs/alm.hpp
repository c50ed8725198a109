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

#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "sdmgs/model.hpp"
#include "sdmgs/parallel.hpp"
#include "sdmgs/sdm_gs.hpp"

namespace sdmgs {

enum class RhoMode { fixed, kiwiel };

struct AlmConfig {
    double rho0 = 1.0;
    double gamma = 0.1;
    double eps = 1e-6;
    std::size_t t_max = 1;
    std::size_t k_max = 100;
    RhoMode rho_mode = RhoMode::fixed;
    /// Stop updating rho after this many serious steps.
    std::size_t rho_freeze = std::numeric_limits<std::size_t>::max();
    /// When false every iteration takes the dual step (no serious step test).
    bool use_ssc = true;
    /// Starting multiplier; empty means zero. Must lie in Z-perp.
    Vector omega0;
    /// Vertex cap per block hull; 0 keeps every vertex.
    std::size_t hull_cap = 0;
    std::size_t threads = 1;
};

/// One CSV row. k = 0 is the pre-loop step.
struct IterationRecord {
    std::size_t k = 0;
    double phi_check_best = 0.0;  // running maximum of the held minorant
    double phi_hat = 0.0;
    double residual_norm = 0.0;
    double gamma_k = 0.0;  // NaN on the pre-loop and terminating rows
    bool serious = false;
    double rho = 0.0;
    double wall_ms = 0.0;
};

enum class AlmStatus { converged, iteration_limit };

struct AlmState {
    std::size_t k = 0;
    PrimalPoint x;
    Vector z;
    DualPoint omega;
    double phi_check = 0.0;
    double rho = 0.0;
    InnerApprox D;
    double last_gamma = 0.0;
    bool serious = false;
};

/// What the outer loop saw in one iteration, for property tests.
struct AlmIterationView {
    std::size_t k = 0;
    const ProblemInstance* inst = nullptr;
    const PrimalPoint* x = nullptr;
    const Vector* z = nullptr;
    const DualPoint* omega = nullptr;  // multiplier used by the SDM-GS call
    const PrimalPoint* x_hat = nullptr;
    double rho = 0.0;
    double lagrangian = 0.0;
    double phi_hat = 0.0;
    double phi_tilde = 0.0;
    double phi_check = 0.0;  // value held before the serious step test
    double gamma_k = 0.0;
    double big_gamma = 0.0;
    bool terminated = false;
    bool serious = false;
};

using AlmObserver = std::function<void(const AlmIterationView&)>;

struct AlmResult {
    AlmStatus status = AlmStatus::iteration_limit;
    AlmState state;
    std::vector<IterationRecord> records;
    /// Reduce synchronizations performed inside each loop iteration.
    std::vector<std::size_t> reduces_per_iteration;
    std::size_t replicated_bytes = 0;
};

/// f(x) + omega'Qx + rho/2 |Qx - z|^2.
double eval_L_rho(const ProblemInstance& inst, const PrimalPoint& x, std::span<const double> z, const DualPoint& omega,
                  double rho);

/// L_rho + rho/2 |Qx - z|^2.
double phi_hat(const ProblemInstance& inst, const PrimalPoint& x, std::span<const double> z, const DualPoint& omega,
               double rho);

struct PhiCheck {
    double value = 0.0;
    PrimalPoint minimizer;
};

/// Minorant linearized at x_center:
/// f(c) - grad f(c)'c + sum_i min_{X_i} [grad f_i(c_i) + Q_i'omega_i]'x.
PhiCheck phi_check(const ProblemInstance& inst, const DualPoint& omega, const PrimalPoint& x_center,
                   BlockExecutor* exec = nullptr);

double phi_tilde_from_gamma(double lagrangian, double residual_sq, double big_gamma, double rho);

/// (phi_tilde - phi_check) / (phi_hat - phi_check). Throws
/// Error(degenerate_denominator) when phi_hat <= phi_check.
double ssc_ratio(double phi_tilde, double phi_hat_value, double phi_check_value);

DualPoint dual_update(const DualPoint& omega, double rho, std::span<const double> r);

double rho_update(double rho, double gamma_k);

AlmResult run_sdm_gs_alm(const ProblemInstance& inst, const AlmConfig& cfg, const AlmObserver& observer = {});

/// Same as run_sdm_gs_alm with cfg.threads = workers.
AlmResult run_parallel(const ProblemInstance& inst, AlmConfig cfg, std::size_t workers,
                       const AlmObserver& observer = {});

struct SubgradientConfig {
    double s0 = 1.0;
    std::size_t k_max = 200;
    Vector omega0;
};

struct SubgradientRecord {
    std::size_t k = 0;
    double phi = 0.0;
    double phi_best = 0.0;
    double residual_norm = 0.0;
    double step = 0.0;
    double wall_ms = 0.0;
};

/// Projected subgradient ascent on phi with steps s0/sqrt(k). Linear f only;
/// otherwise throws Error(unsupported).
std::vector<SubgradientRecord> run_subgradient_baseline(const ProblemInstance& inst, const SubgradientConfig& cfg);

}  // namespace sdmgs
