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
#include <vector>

#include "sdmgs/model.hpp"

namespace sdmgs {

/// Every feasible point of X_i. Continuous variables are allowed only when
/// their bounds coincide.
struct EnumeratedBlock {
    std::vector<Vector> points;
};

struct OracleResult {
    double zeta_star = 0.0;
    double zeta_ld = 0.0;
    double zeta_cld = 0.0;
    DualPoint omega_ld;
};

inline constexpr std::size_t max_enumerated_points = 4096;

/// Throws Error(not_pure_integer) or Error(too_large) past 4096 box points.
EnumeratedBlock enumerate_block_points(const BlockSpec& block);

/// phi(omega) = sum_i min_v f_i(v) + omega_i'Q_i v over the enumerated points.
double phi_exact(const ProblemInstance& inst, const DualPoint& omega);

struct LdSolution {
    double value = 0.0;
    DualPoint omega;
};

/// Lagrangian dual bound from one finite LP over the enumerated points, with
/// a maximizing multiplier recovered from its row duals.
LdSolution solve_ld_exact(const ProblemInstance& inst);

/// Convexified dual bound. Linear f reuses the finite LP; quadratic f runs a
/// multiplier method over the hulls of the enumerated points and certifies the
/// result against the exact convexified dual function. Throws
/// Error(no_certificate) when the certificate misses 1e-6.
double solve_cld_exact(const ProblemInstance& inst);

/// Optimal value of the original problem by dynamic programming over blocks.
/// Throws Error(infeasible) when no linked assignment exists.
double zeta_star(const ProblemInstance& inst);

OracleResult run_oracle(const ProblemInstance& inst);

}  // namespace sdmgs
