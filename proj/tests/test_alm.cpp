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

#include <doctest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "sdmgs/alm.hpp"
#include "sdmgs/error.hpp"
#include "sdmgs/generator.hpp"
#include "sdmgs/oracle.hpp"

using namespace sdmgs;

TEST_CASE("eval_L_rho and phi_hat") {
    const auto inst = testing::gap_example();
    const DualPoint w0{{0.0, 0.0}};
    CHECK(eval_L_rho(inst, PrimalPoint{{{0.5, 0.5}}}, Vector{0.5, 0.5}, w0, 1.0) == doctest::Approx(0.0));
    CHECK(eval_L_rho(inst, PrimalPoint{{{1.0, 1.0}}}, Vector{0.5, 0.5}, w0, 2.0) == doctest::Approx(1.0));
    CHECK(phi_hat(inst, PrimalPoint{{{1.0, 1.0}}}, Vector{0.5, 0.5}, w0, 2.0) == doctest::Approx(1.5));
    // The multiplier term enters linearly.
    const DualPoint w{{1.0, -1.0}};
    CHECK(eval_L_rho(inst, PrimalPoint{{{1.0, 0.0}}}, Vector{0.5, 0.5}, w, 0.0) == doctest::Approx(0.5 + 1.0));
}

TEST_CASE("phi_check") {
    const auto ex2 = testing::ex2();
    CHECK(phi_check(ex2, DualPoint{{-2.0, 2.0}}, PrimalPoint{{{0.0}, {0.0}}}).value == doctest::Approx(-2.0));
    CHECK(phi_check(ex2, DualPoint{{-2.0, 2.0}}, PrimalPoint{{{1.0}, {1.0}}}).value == doctest::Approx(-2.0));
    const auto gap = testing::gap_example();
    const auto c = phi_check(gap, DualPoint{{0.0, 0.0}}, PrimalPoint{{{0.5, 0.5}}});
    CHECK(c.value == doctest::Approx(0.0));
    CHECK(block_contains(gap.blocks[0], c.minimizer.blocks[0]));
}

TEST_CASE("phi_tilde_from_gamma") {
    CHECK(phi_tilde_from_gamma(1.0, 1.0, 0.0, 1.0) == doctest::Approx(1.5));
    const auto ex2 = testing::ex2();
    const double tilde = phi_tilde_from_gamma(0.0, 0.0, 3.0, 1.0);
    CHECK(tilde == doctest::Approx(-3.0));
    CHECK(phi_check(ex2, DualPoint{{0.0, 0.0}}, PrimalPoint{{{0.0}, {0.0}}}).value == doctest::Approx(tilde));
    CHECK(phi_tilde_from_gamma(0.0, 0.0, 0.0, 1.0) == 0.0);
}

TEST_CASE("ssc_ratio") {
    CHECK(ssc_ratio(1.5, 1.5, -3.0) == doctest::Approx(1.0));
    CHECK(ssc_ratio(-3.0, 1.5, -3.0) == doctest::Approx(0.0));
    CHECK(ssc_ratio(-0.75, 1.5, -3.0) == doctest::Approx(0.5));
    try {
        ssc_ratio(0.0, 1.0, 1.0);
        FAIL("expected degenerate_denominator");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::degenerate_denominator);
    }
}

TEST_CASE("dual_update") {
    const DualPoint w{{0.25, -0.25}};
    CHECK(dual_update(w, 3.0, Vector{0.0, 0.0}).omega == w.omega);
    CHECK(dual_update(DualPoint{{0.0, 0.0}}, 2.0, Vector{0.5, -0.5}).omega == Vector{1.0, -1.0});
    const DualPoint back = dual_update(dual_update(w, 2.0, Vector{0.5, -0.5}), 2.0, Vector{-0.5, 0.5});
    CHECK(back.omega == w.omega);
}

TEST_CASE("rho_update") {
    CHECK(rho_update(1.0, 0.5) == doctest::Approx(1.0));
    CHECK(rho_update(1.0, 1.0) == doctest::Approx(10.0));
    CHECK(rho_update(1.0, 0.0) == doctest::Approx(0.5));
    // Lower clamp 10/rho caps the inverse, so rho' >= rho / 10.
    CHECK(rho_update(1.0, -100.0) == doctest::Approx(0.1));
    // The 1e-4 floor binds once rho exceeds 1e3.
    CHECK(rho_update(1e5, 1.0) == doctest::Approx(1e4));
}

TEST_CASE("run_sdm_gs_alm examples") {
    SUBCASE("large eps terminates at the first loop iteration") {
        AlmConfig cfg;
        cfg.eps = 1e6;
        const auto r = run_sdm_gs_alm(testing::ex2(), cfg);
        CHECK(r.status == AlmStatus::converged);
        REQUIRE(r.records.size() == 2);
        CHECK(r.records.back().k == 1);
        CHECK(std::isnan(r.records.back().gamma_k));
    }
    SUBCASE("two-block example reaches the dual bound") {
        AlmConfig cfg;
        cfg.gamma = 0.1;
        cfg.k_max = 50;
        const auto r = run_sdm_gs_alm(testing::ex2(), cfg);
        CHECK(r.state.phi_check == doctest::Approx(-2.0).epsilon(1e-6));
        CHECK(r.records.back().phi_check_best == doctest::Approx(-2.0).epsilon(1e-6));
    }
    SUBCASE("gap example closes to the convexified bound") {
        AlmConfig cfg;
        cfg.k_max = 200;
        const auto r = run_sdm_gs_alm(testing::gap_example(), cfg);
        CHECK(r.status == AlmStatus::converged);
        CHECK(std::abs(r.records.back().phi_hat) <= 1e-5);
        CHECK(std::abs(r.records.back().phi_check_best) <= 1e-5);
        CHECK(r.records.back().residual_norm <= 1e-4);
        CHECK(solve_ld_exact(testing::gap_example()).value == doctest::Approx(0.5));
    }
    SUBCASE("omega0 outside Z-perp is rejected") {
        AlmConfig cfg;
        cfg.omega0 = {1.0, 0.0};
        CHECK_THROWS_AS(run_sdm_gs_alm(testing::ex2(), cfg), Error);
    }
    SUBCASE("nonpositive rho0 is rejected") {
        AlmConfig cfg;
        cfg.rho0 = 0.0;
        CHECK_THROWS_AS(run_sdm_gs_alm(testing::ex2(), cfg), Error);
    }
}

TEST_CASE("run_sdm_gs_alm invariants on generated instances") {
    std::size_t views = 0;
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
        const auto inst = generate_instance(seed, 4, 3, 0.7, seed % 3 == 0);
        AlmConfig cfg;
        cfg.k_max = 25;
        cfg.rho_mode = seed % 2 == 0 ? RhoMode::kiwiel : RhoMode::fixed;
        double last_check = -1e300;
        const auto r = run_sdm_gs_alm(inst, cfg, [&](const AlmIterationView& v) {
            ++views;
            CHECK(max_group_sum(inst, v.omega->omega) <= 1e-9);
            const Vector res = residual(inst, *v.x, *v.z);
            CHECK(max_group_sum(inst, res) <= 1e-9);
            CHECK(v.big_gamma >= -1e-9);
            DualPoint shifted = *v.omega;
            for (std::size_t j = 0; j < res.size(); ++j) shifted.omega[j] += v.rho * res[j];
            const double check = phi_check(inst, shifted, *v.x).value;
            CHECK(v.phi_hat >= check - 1e-9);
            CHECK(std::abs(v.phi_tilde - check) <= 1e-8);
            if (v.k > 0 && !v.terminated) CHECK(v.gamma_k <= 1.0 + 1e-9);
            CHECK(v.phi_check >= last_check - 1e-12);
            last_check = v.phi_check;
        });
        for (std::size_t t = 1; t < r.records.size(); ++t) {
            CHECK(r.records[t].phi_check_best >= r.records[t - 1].phi_check_best - 1e-12);
        }
        const auto orc = run_oracle(inst);
        for (const auto& rec : r.records) CHECK(rec.phi_check_best <= orc.zeta_cld + 1e-7);
    }
    CHECK(views > 50);
}

TEST_CASE("run_subgradient_baseline") {
    const auto ex2 = testing::ex2();
    SUBCASE("optimal start") {
        SubgradientConfig cfg;
        cfg.omega0 = {-2.0, 2.0};
        cfg.k_max = 5;
        const auto log = run_subgradient_baseline(ex2, cfg);
        CHECK(log.front().phi == doctest::Approx(-2.0));
    }
    SUBCASE("zero step keeps the trajectory constant") {
        SubgradientConfig cfg;
        cfg.s0 = 0.0;
        cfg.k_max = 10;
        const auto log = run_subgradient_baseline(ex2, cfg);
        for (const auto& rec : log) CHECK(rec.phi == log.front().phi);
    }
    SUBCASE("200 iterations approach the dual bound") {
        SubgradientConfig cfg;
        const auto log = run_subgradient_baseline(ex2, cfg);
        CHECK(log.size() == 200);
        CHECK(log.back().phi_best >= -2.0 - 1e-3);
        for (const auto& rec : log) CHECK(rec.phi <= -2.0 + 1e-9);
    }
    SUBCASE("quadratic objectives are unsupported") {
        try {
            run_subgradient_baseline(testing::gap_example(), SubgradientConfig{});
            FAIL("expected unsupported");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::unsupported);
        }
    }
}
