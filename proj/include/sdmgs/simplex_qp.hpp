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

#include <Eigen/Dense>

#include "sdmgs/model.hpp"
#include "sdmgs/tolerances.hpp"

namespace sdmgs {

/// Convex quadratic over the unit simplex in the weight space:
///   min 1/2 w'Hw + h'w + constant   s.t.  w >= 0, sum(w) = 1,
/// where w are the weights of `vertices` and the combined point is sum_v w_v v.
/// H must be symmetric positive semidefinite.
struct SimplexQpProblem {
    std::vector<Vector> vertices;
    Eigen::MatrixXd hessian;
    Eigen::VectorXd linear;
    double constant = 0.0;
    /// Optional starting weights (ignored unless feasible and correctly sized).
    Vector warm_start;
};

struct SimplexQpResult {
    Vector weights;
    Vector point;
    double value = 0.0;
    /// Frank-Wolfe gap g'w - min_j g_j, an upper bound on the suboptimality.
    double kkt_gap = 0.0;
    std::size_t iterations = 0;
};

/// Primal active-set method. Singular reduced Hessians are handled by
/// following zero-curvature descent rays to the boundary of the simplex.
/// Throws Error(max_inner_iterations) if the gap target is not met.
SimplexQpResult solve_simplex_qp(const SimplexQpProblem& problem, double tol = default_tolerances().qp_kkt_gap,
                                 std::size_t max_iterations = default_tolerances().qp_max_iterations);

}  // namespace sdmgs
