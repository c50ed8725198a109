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
#include <limits>
#include <random>

#include "fixtures.hpp"
#include "sdmgs/error.hpp"
#include "sdmgs/model.hpp"

using namespace sdmgs;
using sdmgs::testing::binary_block;

namespace {

ProblemInstance two_block_three_coords() {
    ProblemInstance inst;
    inst.blocks.push_back(binary_block({1.0, 2.0}, {{1.0, 0.0}, {0.0, 1.0}}));
    inst.blocks.push_back(binary_block({3.0}, {{1.0}}));
    inst.linkage.groups = {{0, 1}, {2}};
    return inst;
}

}  // namespace

TEST_CASE("validate_instance accepts the two-binary gap example") {
    CHECK(validate_instance(testing::gap_example()).empty());
    CHECK(validate_instance(testing::ex2()).empty());
}

TEST_CASE("validate_instance reports an unbounded variable") {
    ProblemInstance inst = testing::gap_example();
    inst.blocks[0].upper[0] = std::numeric_limits<double>::infinity();
    const auto v = validate_instance(inst);
    REQUIRE(v.size() == 1);
    CHECK(v[0] == "block 0: unbounded variable 0");
}

TEST_CASE("validate_instance reports a linkage coordinate out of range") {
    ProblemInstance inst = testing::gap_example();
    inst.linkage.groups = {{0, 1, 2}};
    const auto v = validate_instance(inst);
    REQUIRE(v.size() == 1);
    CHECK(v[0] == "linkage: coordinate out of range");
}

TEST_CASE("validate_instance catches partition and cost violations") {
    ProblemInstance inst = two_block_three_coords();
    inst.linkage.groups = {{0, 1}, {1}};
    auto v = validate_instance(inst);
    CHECK(v.size() == 2);  // coordinate 2 uncovered, coordinate 1 twice

    inst = two_block_three_coords();
    inst.blocks[1].cost_quad_diag[0] = -1.0;
    inst.blocks[0].coupling.clear();
    inst.linkage.groups = {{0}};
    v = validate_instance(inst);
    CHECK(v.size() == 2);

    inst = two_block_three_coords();
    inst.linkage.groups = {{0, 1}, {}, {2}};
    CHECK(validate_instance(inst).size() == 1);
}

TEST_CASE("residual") {
    const ProblemInstance inst = testing::gap_example();
    SUBCASE("feasible point gives zero") {
        const auto r = residual(inst, PrimalPoint{{{0.5, 0.5}}}, Vector{0.5, 0.5});
        CHECK(r == Vector{0.0, 0.0});
    }
    SUBCASE("corner against the centre") {
        const auto r = residual(inst, PrimalPoint{{{1.0, 1.0}}}, Vector{0.5, 0.5});
        CHECK(r == Vector{0.5, 0.5});
    }
    SUBCASE("two blocks") {
        const auto r = residual(testing::ex2(), PrimalPoint{{{0.0}, {1.0}}}, Vector{0.5, 0.5});
        CHECK(r == Vector{-0.5, 0.5});
    }
    SUBCASE("dimension mismatch throws") {
        CHECK_THROWS_AS(residual(inst, PrimalPoint{{{1.0, 1.0}}}, Vector{0.5}), Error);
        CHECK_THROWS_AS(residual(inst, PrimalPoint{{{1.0}}}, Vector{0.5, 0.5}), Error);
    }
}

TEST_CASE("project_onto_Z examples") {
    CHECK(project_onto_Z(testing::gap_example(), Vector{0.2, 0.8}) == Vector{0.5, 0.5});
    CHECK(project_onto_Z(testing::gap_example(), Vector{0.3, 0.3}) == Vector{0.3, 0.3});
    CHECK(project_onto_Z(two_block_three_coords(), Vector{1.0, 2.0, 3.0}) == Vector{1.5, 1.5, 3.0});
}

TEST_CASE("project_onto_Zperp examples") {
    CHECK(project_onto_Zperp(testing::gap_example(), Vector{0.0, 0.0}).omega == Vector{0.0, 0.0});
    CHECK(project_onto_Zperp(testing::gap_example(), Vector{1.0, 0.0}).omega == Vector{0.5, -0.5});
}

TEST_CASE("projection properties on random vectors") {
    const ProblemInstance inst = two_block_three_coords();
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    for (int trial = 0; trial < 200; ++trial) {
        Vector y{u(rng), u(rng), u(rng)};
        Vector y2{u(rng), u(rng), u(rng)};
        const Vector z = project_onto_Z(inst, y);
        const Vector w = project_onto_Zperp(inst, y).omega;
        // Orthogonal decomposition, idempotence, constant within groups.
        for (std::size_t j = 0; j < 3; ++j) CHECK(z[j] + w[j] == doctest::Approx(y[j]).epsilon(1e-14));
        const Vector zz = project_onto_Z(inst, z);
        for (std::size_t j = 0; j < 3; ++j) CHECK(zz[j] == doctest::Approx(z[j]).epsilon(1e-15));
        CHECK(z[0] == z[1]);
        CHECK(max_group_sum(inst, w) <= 1e-12);
        const Vector ww = project_onto_Zperp(inst, w).omega;
        for (std::size_t j = 0; j < 3; ++j) CHECK(ww[j] == doctest::Approx(w[j]).epsilon(1e-14));
        // Nonexpansive.
        const Vector z2 = project_onto_Z(inst, y2);
        double dz = 0.0;
        double dy = 0.0;
        for (std::size_t j = 0; j < 3; ++j) {
            dz += (z[j] - z2[j]) * (z[j] - z2[j]);
            dy += (y[j] - y2[j]) * (y[j] - y2[j]);
        }
        CHECK(dz <= dy + 1e-12);
    }
}

TEST_CASE("residual at the Z projection of Qx is orthogonal to Z") {
    const ProblemInstance inst = two_block_three_coords();
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        PrimalPoint x{{{u(rng), u(rng)}, {u(rng)}}};
        const Vector z = project_onto_Z(inst, couple(inst, x));
        const Vector r = residual(inst, x, z);
        CHECK(max_group_sum(inst, r) <= 1e-12);
    }
}

TEST_CASE("block objective and gradient") {
    const ProblemInstance inst = testing::gap_example();
    const BlockSpec& b = inst.blocks[0];
    CHECK(b.objective(Vector{0.5, 0.5}) == doctest::Approx(0.0));
    CHECK(b.objective(Vector{1.0, 1.0}) == doctest::Approx(0.5));
    CHECK(b.objective(Vector{0.0, 1.0}) == doctest::Approx(0.5));
    CHECK(b.gradient(Vector{1.0, 0.0}) == Vector{1.0, -1.0});
    CHECK_FALSE(b.is_linear());
    CHECK(testing::ex2().is_linear());
}
