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

#include "sdmgs/alm.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <string>

#include "sdmgs/error.hpp"

namespace sdmgs {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

DualPoint starting_multiplier(const ProblemInstance& inst, const Vector& omega0) {
    const std::size_t q = inst.coupling_dim();
    if (omega0.empty()) return DualPoint{Vector(q, 0.0)};
    if (omega0.size() != q) throw Error(ErrorCode::dimension_mismatch, "omega0 must have length q");
    if (max_group_sum(inst, omega0) > default_tolerances().dual_feasibility) {
        throw Error(ErrorCode::invalid_argument, "omega0 is not in Z-perp");
    }
    return DualPoint{omega0};
}

void require_valid(const ProblemInstance& inst) {
    const auto issues = validate_instance(inst);
    if (!issues.empty()) throw Error(ErrorCode::validation_error, issues.front());
}

}  // namespace

double eval_L_rho(const ProblemInstance& inst, const PrimalPoint& x, std::span<const double> z, const DualPoint& omega,
                  double rho) {
    const Vector qx = couple(inst, x);
    if (z.size() != qx.size() || omega.omega.size() != qx.size()) {
        throw Error(ErrorCode::dimension_mismatch, "z and omega must have length q");
    }
    double res = 0.0;
    for (std::size_t j = 0; j < qx.size(); ++j) res += (qx[j] - z[j]) * (qx[j] - z[j]);
    return objective(inst, x) + dot(omega.omega, qx) + 0.5 * rho * res;
}

double phi_hat(const ProblemInstance& inst, const PrimalPoint& x, std::span<const double> z, const DualPoint& omega,
               double rho) {
    return eval_L_rho(inst, x, z, omega, rho) + 0.5 * rho * squared_norm(residual(inst, x, z));
}

PhiCheck phi_check(const ProblemInstance& inst, const DualPoint& omega, const PrimalPoint& x_center,
                   BlockExecutor* exec) {
    const CouplingLayout layout = CouplingLayout::from(inst);
    if (omega.omega.size() != layout.q()) throw Error(ErrorCode::dimension_mismatch, "omega must have length q");
    if (x_center.blocks.size() != inst.block_count()) throw Error(ErrorCode::dimension_mismatch, "center has wrong block count");
    const std::size_t m = inst.block_count();
    BlockExecutor local(exec == nullptr ? m : 0, 1);
    BlockExecutor& ex = exec == nullptr ? local : *exec;

    PhiCheck out;
    out.minimizer.blocks.resize(m);
    Vector parts(m, 0.0);
    const std::span<const double> w(omega.omega);
    ex.for_each_block([&](std::size_t i) {
        const BlockSpec& b = inst.blocks[i];
        const Vector& c = x_center.blocks[i];
        Vector row = b.gradient(c);
        const double intercept = b.objective(c) - dot(row, c);
        const Vector qtw = b.couple_transpose(layout.block_slice(w, i));
        for (std::size_t j = 0; j < row.size(); ++j) row[j] += qtw[j];
        MilpSolution s = minimize_linear_over_block(b, row);
        parts[i] = intercept + s.objective;
        out.minimizer.blocks[i] = std::move(s.point);
    });
    for (double p : parts) out.value += p;
    return out;
}

double phi_tilde_from_gamma(double lagrangian, double residual_sq, double big_gamma, double rho) {
    return lagrangian + 0.5 * rho * residual_sq - big_gamma;
}

double ssc_ratio(double phi_tilde, double phi_hat_value, double phi_check_value) {
    const double denom = phi_hat_value - phi_check_value;
    if (!(denom > 0.0)) throw Error(ErrorCode::degenerate_denominator, "phi_hat does not exceed phi_check");
    return (phi_tilde - phi_check_value) / denom;
}

DualPoint dual_update(const DualPoint& omega, double rho, std::span<const double> r) {
    if (r.size() != omega.omega.size()) throw Error(ErrorCode::dimension_mismatch, "residual length");
    DualPoint out = omega;
    for (std::size_t j = 0; j < r.size(); ++j) out.omega[j] += rho * r[j];
    return out;
}

double rho_update(double rho, double gamma_k) {
    const double inner = std::max({(2.0 / rho) * (1.0 - gamma_k), 1.0 / (10.0 * rho), 1e-4});
    return 1.0 / std::min(inner, 10.0 / rho);
}

AlmResult run_sdm_gs_alm(const ProblemInstance& inst, const AlmConfig& cfg, const AlmObserver& observer) {
    require_valid(inst);
    if (!(cfg.rho0 > 0.0)) throw Error(ErrorCode::invalid_argument, "rho0 must be positive");
    if (!(cfg.gamma > 0.0 && cfg.gamma < 1.0)) throw Error(ErrorCode::invalid_argument, "gamma must lie in (0,1)");
    if (!(cfg.eps >= 0.0)) throw Error(ErrorCode::invalid_argument, "eps must be nonnegative");
    if (cfg.t_max == 0 || cfg.k_max == 0) throw Error(ErrorCode::invalid_argument, "t_max and k_max must be at least 1");

    const std::size_t m = inst.block_count();
    BlockExecutor exec(m, cfg.threads);
    AlmResult result;
    AlmState& st = result.state;
    st.rho = cfg.rho0;
    st.omega = starting_multiplier(inst, cfg.omega0);

    // D starts from the minorant minimizers at omega0 around the origin.
    const Clock::time_point start0 = Clock::now();
    PrimalPoint origin;
    for (const auto& b : inst.blocks) origin.blocks.emplace_back(b.n_vars(), 0.0);
    st.x = phi_check(inst, st.omega, origin, &exec).minimizer;
    st.D = make_inner_approx(inst, st.x);
    st.D.cap = cfg.hull_cap;
    st.z = gs_z_update(inst, st.x, &exec);

    DualPoint omega_used;
    // Largest held minorant so far; equals the held value whenever the SSC is active.
    double best = 0.0;
    auto step = [&](std::size_t k) {
        omega_used = st.omega;
        SdmGsResult r = sdm_gs(inst, st.omega, st.rho, st.x, st.z, st.D, cfg.t_max, &exec);
        st.x = std::move(r.x);
        st.z = std::move(r.z);
        AlmIterationView view;
        view.k = k;
        view.inst = &inst;
        view.x = &st.x;
        view.z = &st.z;
        view.omega = &omega_used;
        view.rho = st.rho;
        view.lagrangian = r.lagrangian_part + 0.5 * st.rho * r.residual_sq;
        view.phi_hat = view.lagrangian + 0.5 * st.rho * r.residual_sq;
        view.phi_tilde = phi_tilde_from_gamma(view.lagrangian, r.residual_sq, r.gamma, st.rho);
        view.big_gamma = r.gamma;
        view.gamma_k = std::numeric_limits<double>::quiet_NaN();
        return std::make_pair(std::move(r), view);
    };

    {
        auto [r, view] = step(0);
        const double phi_tilde = view.phi_tilde;
        st.omega = dual_update(st.omega, st.rho, residual(inst, st.x, st.z));
        st.phi_check = phi_tilde;
        st.serious = true;
        view.x_hat = &r.x_hat;
        view.phi_check = phi_tilde;
        view.serious = true;
        if (observer) observer(view);
        best = st.phi_check;
        result.records.push_back({0, best, view.phi_hat, std::sqrt(r.residual_sq),
                                  std::numeric_limits<double>::quiet_NaN(), true, st.rho, elapsed_ms(start0)});
    }

    std::size_t serious_steps = 0;
    for (std::size_t k = 1; k <= cfg.k_max; ++k) {
        const Clock::time_point start = Clock::now();
        const std::size_t reduces_before = exec.reduce_count();
        st.k = k;
        auto [r, view] = step(k);
        view.x_hat = &r.x_hat;
        view.phi_check = st.phi_check;
        const double rho_used = st.rho;

        if (view.phi_hat - st.phi_check <= cfg.eps) {
            st.serious = false;
            view.terminated = true;
            if (observer) observer(view);
            result.reduces_per_iteration.push_back(exec.reduce_count() - reduces_before);
            result.records.push_back({k, best, view.phi_hat, std::sqrt(r.residual_sq),
                                      std::numeric_limits<double>::quiet_NaN(), false, rho_used, elapsed_ms(start)});
            result.status = AlmStatus::converged;
            result.replicated_bytes = exec.replicated_bytes();
            return result;
        }

        const double gamma_k = ssc_ratio(view.phi_tilde, view.phi_hat, st.phi_check);
        st.last_gamma = gamma_k;
        st.serious = !cfg.use_ssc || gamma_k >= cfg.gamma;
        if (st.serious) {
            st.omega = dual_update(st.omega, st.rho, residual(inst, st.x, st.z));
            st.phi_check = view.phi_tilde;
            ++serious_steps;
        }
        if (cfg.rho_mode == RhoMode::kiwiel && serious_steps < cfg.rho_freeze) st.rho = rho_update(st.rho, gamma_k);

        view.gamma_k = gamma_k;
        view.serious = st.serious;
        if (observer) observer(view);
        result.reduces_per_iteration.push_back(exec.reduce_count() - reduces_before);
        best = std::max(best, st.phi_check);
        result.records.push_back({k, best, view.phi_hat, std::sqrt(r.residual_sq), gamma_k, st.serious,
                                  rho_used, elapsed_ms(start)});
    }
    result.status = AlmStatus::iteration_limit;
    result.replicated_bytes = exec.replicated_bytes();
    return result;
}

AlmResult run_parallel(const ProblemInstance& inst, AlmConfig cfg, std::size_t workers, const AlmObserver& observer) {
    cfg.threads = workers;
    return run_sdm_gs_alm(inst, cfg, observer);
}

std::vector<SubgradientRecord> run_subgradient_baseline(const ProblemInstance& inst, const SubgradientConfig& cfg) {
    require_valid(inst);
    if (!inst.is_linear()) throw Error(ErrorCode::unsupported, "subgradient baseline needs a linear objective");
    if (!(cfg.s0 >= 0.0)) throw Error(ErrorCode::invalid_argument, "s0 must be nonnegative");
    DualPoint omega = starting_multiplier(inst, cfg.omega0);
    PrimalPoint origin;
    for (const auto& b : inst.blocks) origin.blocks.emplace_back(b.n_vars(), 0.0);

    std::vector<SubgradientRecord> log;
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k <= cfg.k_max; ++k) {
        const Clock::time_point start = Clock::now();
        const PhiCheck phi = phi_check(inst, omega, origin);
        const Vector qx = couple(inst, phi.minimizer);
        const Vector z = project_onto_Z(inst, qx);
        Vector r(qx.size());
        for (std::size_t j = 0; j < r.size(); ++j) r[j] = qx[j] - z[j];
        const double s = cfg.s0 / std::sqrt(static_cast<double>(k));
        best = std::max(best, phi.value);
        omega = project_onto_Zperp(inst, dual_update(omega, s, r).omega);
        log.push_back({k, phi.value, best, std::sqrt(squared_norm(r)), s, elapsed_ms(start)});
    }
    return log;
}

}  // namespace sdmgs
