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

#include "sdmgs/model.hpp"
#include "sdmgs/tolerances.hpp"

namespace sdmgs {

/// min c'x  s.t.  rows, lower <= x <= upper (all bounds finite).
struct LpProblem {
    Vector objective;
    std::vector<LinearConstraint> rows;
    Vector lower;
    Vector upper;

    std::size_t n_vars() const noexcept { return objective.size(); }
};

enum class LpStatus { optimal, infeasible };

struct LpResult {
    LpStatus status = LpStatus::infeasible;
    Vector x;
    double value = 0.0;
    /// Row multipliers y with c - A'y the reduced costs (zero for dropped redundant rows).
    Vector duals;
    std::size_t iterations = 0;
};

/// Dense bounded-variable primal simplex (two phases). Dantzig pricing with a
/// switch to Bland's rule once degenerate pivots stall, so it always
/// terminates. Throws Error(numerical_failure) if the final point misses the
/// residual tolerance.
LpResult solve_lp(const LpProblem& problem, const Tolerances& tol = default_tolerances());

}  // namespace sdmgs
