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

// Acceptance checks AC1..AC8. One PASS/FAIL line per criterion; the exit code
// is nonzero when any criterion fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <string>
#include <thread>

#include "sdmgs/alm.hpp"
#include "sdmgs/error.hpp"
#include "sdmgs/generator.hpp"
#include "sdmgs/harness.hpp"
#include "sdmgs/instance_io.hpp"
#include "sdmgs/oracle.hpp"

using namespace sdmgs;

namespace {

using Clock = std::chrono::steady_clock;

// Pinned tolerances.
constexpr double ac1_bound_tol = 1e-5;
constexpr double ac1_ld_tol = 1e-12;
constexpr double ac2_tol = 1e-6;
constexpr double ac3_tol = 1e-9;
constexpr double ac3_identity_tol = 1e-8;
constexpr double ac8_tol = 1e-9;
constexpr double ac8_ex2_tol = 1e-3;

int failures = 0;

void report(const char* id, bool pass, const std::string& detail) {
    if (!pass) ++failures;
    std::printf("%s %s %s\n", id, pass ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
}

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

DualPoint random_multiplier(const ProblemInstance& inst, std::mt19937_64& rng, double scale) {
    std::uniform_real_distribution<double> u(-scale, scale);
    Vector v(inst.coupling_dim());
    for (double& e : v) e = u(rng);
    return project_onto_Zperp(inst, v);
}

// grad_x L_rho = grad f + Q'(omega + rho (Qx - z)), per block.
std::vector<Vector> lagrangian_gradient(const ProblemInstance& inst, const PrimalPoint& x, const Vector& z,
                                        const DualPoint& omega, double rho) {
    const CouplingLayout layout = CouplingLayout::from(inst);
    const Vector r = residual(inst, x, z);
    std::vector<Vector> g(inst.block_count());
    for (std::size_t i = 0; i < inst.block_count(); ++i) {
        const auto& b = inst.blocks[i];
        Vector y(b.coupling_rows());
        for (std::size_t j = 0; j < y.size(); ++j) y[j] = omega.omega[layout.offset[i] + j] + rho * r[layout.offset[i] + j];
        g[i] = b.gradient(x.blocks[i]);
        const Vector qt = b.couple_transpose(y);
        for (std::size_t j = 0; j < g[i].size(); ++j) g[i][j] += qt[j];
    }
    return g;
}

PrimalPoint axpy(const PrimalPoint& x, double a, const PrimalPoint& d) {
    PrimalPoint out = x;
    for (std::size_t i = 0; i < out.blocks.size(); ++i) {
        for (std::size_t j = 0; j < out.blocks[i].size(); ++j) out.blocks[i][j] += a * d.blocks[i][j];
    }
    return out;
}

PrimalPoint difference(const PrimalPoint& a, const PrimalPoint& b) { return axpy(a, -1.0, b); }

// A random reachable state: hull from minorant minimizers at a few random
// multipliers, x from one GS pass, z its projection.
struct RandomState {
    DualPoint omega;
    double rho = 1.0;
    InnerApprox D;
    PrimalPoint x;
    Vector z;
};

RandomState random_state(const ProblemInstance& inst, std::mt19937_64& rng) {
    RandomState s;
    std::uniform_real_distribution<double> ur(0.1, 20.0);
    s.rho = ur(rng);
    s.omega = random_multiplier(inst, rng, 5.0);
    PrimalPoint center;
    for (const auto& b : inst.blocks) center.blocks.emplace_back(b.n_vars(), 0.5);
    s.D = make_inner_approx(inst, phi_check(inst, random_multiplier(inst, rng, 5.0), center).minimizer);
    const int extra = static_cast<int>(rng() % 3);
    for (int e = 0; e < extra; ++e) expand_vertex_set(inst, s.D, phi_check(inst, random_multiplier(inst, rng, 8.0), center).minimizer);
    PrimalPoint start;
    for (const auto& h : s.D.blocks) start.blocks.push_back(h.vertices.front());
    s.z = gs_z_update(inst, start);
    s.x = gs_x_update(inst, s.D, s.z, s.omega, s.rho);
    s.z = gs_z_update(inst, s.x);
    return s;
}

void ac1() {
    const auto inst = parse_instance(std::string(SDMGS_DATA_DIR) + "/paper_example.json");
    AlmConfig cfg;
    cfg.k_max = 200;
    const auto t0 = Clock::now();
    const auto r = run_sdm_gs_alm(inst, cfg);
    const double secs = seconds_since(t0);
    const auto orc = run_oracle(inst);
    const double hat = r.records.back().phi_hat;
    const double chk = r.records.back().phi_check_best;
    const std::size_t iters = r.records.back().k;
    const bool pass = r.status == AlmStatus::converged && std::abs(hat - orc.zeta_cld) <= ac1_bound_tol &&
                      std::abs(chk - orc.zeta_cld) <= ac1_bound_tol && std::abs(orc.zeta_cld) <= ac1_bound_tol &&
                      std::abs(orc.zeta_ld - 0.5) <= ac1_ld_tol && orc.zeta_cld < orc.zeta_ld && secs < 1.0 &&
                      iters <= 200;
    report("AC1", pass,
           fmt("phi_hat=%.3g phi_check=%.3g zeta_cld=%.3g zeta_ld=%.17g iterations=%zu time=%.3fs (tol %.0e)", hat, chk,
               orc.zeta_cld, orc.zeta_ld, iters, secs, ac1_bound_tol));
}

void ac2() {
    double worst = 0.0;
    double slowest = 0.0;
    bool all_converged = true;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const std::size_t m = 2 + seed % 4;
        const std::size_t n = 3 + seed % 6;
        const auto inst = generate_instance(seed, m, n, 0.5);
        AlmConfig cfg;
        cfg.k_max = 1000;
        cfg.rho_mode = seed % 2 == 0 ? RhoMode::kiwiel : RhoMode::fixed;
        const auto t0 = Clock::now();
        const auto r = run_sdm_gs_alm(inst, cfg);
        slowest = std::max(slowest, seconds_since(t0));
        all_converged = all_converged && r.status == AlmStatus::converged;
        const double ld = solve_ld_exact(inst).value;
        worst = std::max(worst, std::abs(r.records.back().phi_check_best - ld));
    }
    report("AC2", worst <= ac2_tol && slowest < 10.0,
           fmt("20 linear instances, max |phi_check - zeta_ld|=%.2e (tol %.0e), slowest %.3fs, all converged=%d", worst,
               ac2_tol, slowest, all_converged ? 1 : 0));
}

void ac3() {
    std::size_t states = 0;
    std::size_t violations = 0;
    std::map<std::string, std::size_t> by_kind;
    auto expect = [&](const char* kind, bool ok) {
        if (!ok) {
            ++violations;
            ++by_kind[kind];
        }
    };
    std::mt19937_64 rng(2024);
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const bool quad = seed % 3 == 0;
        const auto inst = generate_instance(100 + seed, 2 + seed % 4, 3 + seed % 4, 0.6, quad);

        // Outer loop states.
        AlmConfig cfg;
        cfg.k_max = 60;
        cfg.rho_mode = seed % 2 == 0 ? RhoMode::kiwiel : RhoMode::fixed;
        cfg.t_max = 1 + seed % 3;
        cfg.omega0 = random_multiplier(inst, rng, 3.0).omega;
        try {
            run_sdm_gs_alm(inst, cfg, [&](const AlmIterationView& v) {
                ++states;
                expect("omega_zperp", max_group_sum(inst, v.omega->omega) <= ac3_tol);
                const Vector r = residual(inst, *v.x, *v.z);
                expect("z_residual", max_group_sum(inst, r) <= ac3_tol);
                expect("gamma_nonneg", v.big_gamma >= -ac3_tol);
                DualPoint shifted = *v.omega;
                for (std::size_t j = 0; j < r.size(); ++j) shifted.omega[j] += v.rho * r[j];
                const double check = phi_check(inst, shifted, *v.x).value;
                expect("hat_ge_check", v.phi_hat >= check - ac3_tol);
                expect("tilde_identity", std::abs(v.phi_tilde - check) <= ac3_identity_tol);
                if (v.k > 0 && !v.terminated) expect("ssc_le_1", v.gamma_k <= 1.0 + ac3_tol);
            });
        } catch (const Error& e) {
            ++violations;
            ++by_kind[std::string("threw ") + e.what()];
        }

        // Random inner states: alternations must not increase L_rho.
        for (int t = 0; t < 90; ++t) {
            RandomState s = random_state(inst, rng);
            ++states;
            expect("z_residual", max_group_sum(inst, residual(inst, s.x, s.z)) <= ac3_tol);
            double prev = eval_L_rho(inst, s.x, s.z, s.omega, s.rho);
            for (int sweep = 0; sweep < 3; ++sweep) {
                s.x = gs_x_update(inst, s.D, s.z, s.omega, s.rho);
                const double after_x = eval_L_rho(inst, s.x, s.z, s.omega, s.rho);
                s.z = gs_z_update(inst, s.x);
                const double after_z = eval_L_rho(inst, s.x, s.z, s.omega, s.rho);
                expect("L_x_step", after_x <= prev + ac3_tol * std::max(1.0, std::abs(prev)));
                expect("L_z_step", after_z <= after_x + ac3_tol * std::max(1.0, std::abs(after_x)));
                prev = after_z;
            }
            const auto g = sdm_gs(inst, s.omega, s.rho, s.x, s.z, s.D, 1);
            expect("gamma_nonneg", g.gamma >= -ac3_tol);
            const double lag = eval_L_rho(inst, g.x, g.z, s.omega, s.rho);
            const Vector r = residual(inst, g.x, g.z);
            const double tilde = phi_tilde_from_gamma(lag, squared_norm(r), g.gamma, s.rho);
            DualPoint shifted = s.omega;
            for (std::size_t j = 0; j < r.size(); ++j) shifted.omega[j] += s.rho * r[j];
            const double check = phi_check(inst, shifted, g.x).value;
            expect("tilde_identity", std::abs(tilde - check) <= ac3_identity_tol);
            expect("hat_ge_check", phi_hat(inst, g.x, g.z, s.omega, s.rho) >= check - ac3_tol);
        }
    }
    std::string kinds;
    for (const auto& [kind, count] : by_kind) kinds += " " + kind + "=" + std::to_string(count);
    report("AC3", violations == 0 && states >= 1000,
           fmt("%zu states across 10 instances, %zu violations (tol %.0e, identity tol %.0e)", states, violations,
               ac3_tol, ac3_identity_tol) + kinds);
}

void ac4() {
    const auto inst = generate_instance(7, 64, 8, 0.5);
    AlmConfig cfg;
    cfg.k_max = 30;
    std::string reference;
    bool identical = true;
    bool two_reduces = true;
    for (std::size_t threads : {1, 2, 4, 8}) {
        cfg.threads = threads;
        const auto r = run_sdm_gs_alm(inst, cfg);
        const std::string cols = bound_columns(r.records);
        if (threads == 1) reference = cols;
        identical = identical && cols == reference;
        for (std::size_t c : r.reduces_per_iteration) two_reduces = two_reduces && c == 2;
        two_reduces = two_reduces && !r.reduces_per_iteration.empty();
    }
    report("AC4", identical && two_reduces,
           fmt("64 blocks, threads 1/2/4/8 bound columns identical=%d, reduces per iteration all 2=%d",
               identical ? 1 : 0, two_reduces ? 1 : 0));
}

double bound_at_k(const AlmResult& r) { return r.records.back().phi_check_best; }

void ac5() {
    AlmConfig base;
    base.eps = 0.0;
    const auto inst = generate_instance(1, 16, 8, 1.0);
    const auto cells = ssc_sweep(inst, {0.5}, {100.0}, 20, base, "");
    const double g = bound_at_k(cells[0].result);
    const double no = bound_at_k(cells[1].result);
    report("AC5", g >= no,
           fmt("instance gen_s1_m16_n8 rho=100 k=20: gamma=0.5 phi_check=%.6f, no-SSC phi_check=%.6f", g, no));

    // Same comparison on neighbouring seeds, for context only.
    int ahead = 0;
    int behind = 0;
    int tied = 0;
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
        const auto c = ssc_sweep(generate_instance(seed, 16, 8, 1.0), {0.5}, {100.0}, 20, base, "");
        const double d = bound_at_k(c[0].result) - bound_at_k(c[1].result);
        if (d > 1e-6) {
            ++ahead;
        } else if (d < -1e-6) {
            ++behind;
        } else {
            ++tied;
        }
    }
    std::printf("AC5 info: seeds 1..40 of this shape: gamma=0.5 ahead %d, behind %d, tied %d\n", ahead, behind, tied);
}

void ac6() {
    const auto inst = generate_instance(7, 64, 8, 0.5);
    AlmConfig cfg;
    cfg.k_max = 20;
    const auto rows = speedup_harness(inst, cfg, {1, 4}, 5);
    const double s = rows[1].speedup;
    report("AC6", s > 1.0,
           fmt("64 blocks, T1=%.3f ms/iter, T4=%.3f ms/iter, T1/T4=%.3f, hardware threads=%u", rows[0].ms_per_iteration,
               rows[1].ms_per_iteration, s, std::thread::hardware_concurrency()));
}

void ac7() {
    std::mt19937_64 rng(77);
    const double beta = 0.5;
    const double sigma = 0.1;
    std::size_t steps = 0;
    std::size_t violations = 0;
    std::size_t attempts = 0;
    while (steps < 100 && attempts < 2000) {
        ++attempts;
        const std::uint64_t seed = 200 + attempts % 10;
        const auto inst = generate_instance(seed, 2 + seed % 3, 3 + seed % 3, 0.6, seed % 2 == 0);
        RandomState s = random_state(inst, rng);
        const auto g = sdm_gs(inst, s.omega, s.rho, s.x, s.z, s.D, 1);
        const PrimalPoint d = difference(g.x_hat, g.x);
        const auto grad = lagrangian_gradient(inst, g.x, g.z, s.omega, s.rho);
        double slope = 0.0;
        for (std::size_t i = 0; i < grad.size(); ++i) slope += dot(grad[i], d.blocks[i]);
        if (slope > 1e-12) ++violations;
        if (g.gamma <= 1e-9) continue;
        if (!(slope < 0.0)) {
            ++violations;
            continue;
        }
        ++steps;
        const double alpha = armijo_step(inst, s.omega, s.rho, g.x, g.z, d, beta, sigma);
        const double f0 = eval_L_rho(inst, g.x, g.z, s.omega, s.rho);
        const PrimalPoint trial = axpy(g.x, alpha, d);
        const double fa = eval_L_rho(inst, trial, g.z, s.omega, s.rho);
        if (!(alpha > 0.0 && alpha <= 1.0)) ++violations;
        if (fa - f0 > alpha * sigma * slope + 1e-12 * std::max(1.0, std::abs(f0))) ++violations;
        // The next inner pass starts from the expanded hull, which contains the Armijo point.
        const auto next = sdm_gs(inst, s.omega, s.rho, g.x, g.z, s.D, 1);
        const double fn = eval_L_rho(inst, next.x, next.z, s.omega, s.rho);
        if (fn > fa + 1e-9 * std::max(1.0, std::abs(fa))) ++violations;
    }
    report("AC7", steps == 100 && violations == 0,
           fmt("%zu Armijo steps (beta=%.2f sigma=%.2f), %zu violations of the step rule, SDA or descent sign", steps,
               beta, sigma, violations));
}

void ac8() {
    std::size_t logged = 0;
    double worst = -1e300;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto inst = generate_instance(300 + seed, 2 + seed % 3, 2 + seed % 4, 0.5);
        const double star = zeta_star(inst);
        SubgradientConfig cfg;
        cfg.k_max = 100;
        for (const auto& rec : run_subgradient_baseline(inst, cfg)) {
            ++logged;
            worst = std::max(worst, rec.phi - star);
        }
    }
    const auto ex2 = parse_instance(std::string(SDMGS_DATA_DIR) + "/ex2.json");
    const auto log = run_subgradient_baseline(ex2, SubgradientConfig{});
    const double best = log.back().phi_best;
    for (const auto& rec : log) worst = std::max(worst, rec.phi - zeta_star(ex2));
    report("AC8", worst <= ac8_tol && best >= -2.0 - ac8_ex2_tol && log.size() == 200,
           fmt("%zu logged bounds, max phi - zeta_star=%.2e (tol %.0e); two-block example best over 200=%.6f", logged + log.size(),
               worst, ac8_tol, best));
}

template <class F>
void guarded(const char* id, F&& f) {
    try {
        f();
    } catch (const std::exception& e) {
        report(id, false, std::string("threw ") + e.what());
    }
}

}  // namespace

int main() {
    guarded("AC1", ac1);
    guarded("AC2", ac2);
    guarded("AC3", ac3);
    guarded("AC4", ac4);
    guarded("AC5", ac5);
    guarded("AC6", ac6);
    guarded("AC7", ac7);
    guarded("AC8", ac8);
    return failures == 0 ? 0 : 1;
}
