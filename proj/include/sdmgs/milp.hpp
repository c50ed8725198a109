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

#include <vector>

#include "sdmgs/lp.hpp"

namespace sdmgs {

enum class MilpStatus { optimal, infeasible };

struct MilpSolution {
    MilpStatus status = MilpStatus::infeasible;
    Vector point;
    double objective = 0.0;
    std::size_t nodes = 0;
};

/// Exact branch-and-bound over the LP relaxation.
///
/// Branches on the most fractional variable (lowest index on ties) and
/// explores depth-first, visiting the child with the better relaxation bound
/// first (down branch on ties). Deterministic: identical inputs give the
/// identical point. Throws Error(node_limit_exceeded) past tol.node_limit.
MilpSolution solve_milp(const LpProblem& problem, const std::vector<bool>& integer_mask,
                        const Tolerances& tol = default_tolerances());

}  // namespace sdmgs
