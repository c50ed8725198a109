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

namespace sdmgs {

/// Numerical tolerances shared by every solver in the library.
struct Tolerances {
    // Linkage / dual feasibility.
    double dual_feasibility = 1e-9;

    // LP simplex.
    double lp_pivot = 1e-9;
    double lp_optimality = 1e-9;
    double lp_feasibility = 1e-9;
    double lp_residual = 1e-8;
    std::size_t lp_stall_pivots = 50;

    // Branch-and-bound.
    double integrality = 1e-7;
    double bnb_improvement = 1e-9;
    std::size_t node_limit = 1'000'000;

    // Simplicial QP (Frank-Wolfe gap at termination).
    double qp_kkt_gap = 1e-10;
    std::size_t qp_max_iterations = 10'000;

    // Inner approximation vertex dedup (infinity norm).
    double vertex_dedup = 1e-9;
};

inline const Tolerances& default_tolerances() {
    static const Tolerances tol{};
    return tol;
}

}  // namespace sdmgs
