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
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "sdmgs/milp.hpp"
#include "sdmgs/model.hpp"
#include "sdmgs/parallel.hpp"

namespace sdmgs {

/// Inner approximation of conv(X_i) for one block, kept as a vertex list
/// together with the Gram data the x-update needs.
struct BlockHull {
    std::vector<Vector> vertices;
    std::vector<Vector> images;  // Q_i v for every vertex
    Vector weights;              // simplex weights from the latest x-update
    Vector last_weight;          // last positive weight each vertex carried
    Eigen::MatrixXd gram_f;      // V' diag(d) V
    Eigen::MatrixXd gram_q;      // (Q_i V)' (Q_i V)
    Eigen::VectorXd cost_v;      // V' c

    std::size_t size() const noexcept { return vertices.size(); }
    /// Point represented by the current weights.
    Vector point() const;
};

struct InnerApprox {
    std::vector<BlockHull> blocks;
    /// Vertex cap per block; 0 disables trimming.
    std::size_t cap = 0;
};

struct SdmGsResult {
    PrimalPoint x;
    Vector z;
    PrimalPoint x_hat;
    double gamma = 0.0;
    // Totals from the scalar reduce at the returned (x, z) and the input omega.
    double lagrangian_part = 0.0;  // f(x) + omega'Qx
    double f = 0.0;
    double residual_sq = 0.0;
};

/// True when x lies in X_i: bounds, rows and integrality within tolerance.
bool block_contains(const BlockSpec& block, std::span<const double> x, const Tolerances& tol = default_tolerances());

/// min row'x over X_i by branch-and-bound. Throws Error(infeasible) when X_i is empty.
MilpSolution minimize_linear_over_block(const BlockSpec& block, const Vector& row);

/// Appends v to the hull unless an existing vertex lies within the dedup
/// tolerance. Returns the vertex index. Throws Error(invalid_argument) if v is
/// not in X_i.
std::size_t add_vertex(BlockHull& hull, const BlockSpec& block, Vector v);

/// One hull per block, each the singleton {x_i}.
InnerApprox make_inner_approx(const ProblemInstance& inst, const PrimalPoint& x);

/// x-update over conv(D_i) for one block; stores the weights in the hull.
Vector gs_x_update_block(const BlockSpec& block, BlockHull& hull, std::span<const double> z_i,
                         std::span<const double> omega_i, double rho);

PrimalPoint gs_x_update(const ProblemInstance& inst, InnerApprox& D, std::span<const double> z, const DualPoint& omega,
                        double rho, BlockExecutor* exec = nullptr);

/// z = project_onto_Z(Qx) through a reduce of the group sums.
Vector gs_z_update(const ProblemInstance& inst, const PrimalPoint& x, BlockExecutor* exec = nullptr);

struct DirectionResult {
    PrimalPoint x_hat;
    double gamma = 0.0;
};

/// Linearized subproblem at (x, z): per block minimize
/// [grad f_i(x_i) + Q_i'(omega_i + rho (Q_i x_i - z_i))] x over X_i.
DirectionResult direction_subproblem(const ProblemInstance& inst, const PrimalPoint& x, std::span<const double> z,
                                     const DualPoint& omega, double rho, BlockExecutor* exec = nullptr);

/// Adds x_hat to every D_i, then applies the optional vertex cap. The cap
/// only removes vertices with zero current weight, so the current x stays
/// representable; it is exceeded when every vertex is in use.
void expand_vertex_set(const ProblemInstance& inst, InnerApprox& D, const PrimalPoint& x_hat);
void expand_block_hull(const BlockSpec& block, BlockHull& hull, const Vector& x_hat, std::size_t cap);

/// t_max Gauss-Seidel alternations over conv(D), then one direction solve and
/// the hull expansion. D is updated in place. Performs t_max group reduces and
/// one scalar reduce.
SdmGsResult sdm_gs(const ProblemInstance& inst, const DualPoint& omega, double rho, const PrimalPoint& x0,
                   std::span<const double> z0, InnerApprox& D, std::size_t t_max, BlockExecutor* exec = nullptr);

/// Backtracking on phi(alpha) = F(x + alpha d, z): the largest alpha in
/// {1, beta, beta^2, ...} with phi(alpha) - phi(0) <= alpha sigma slope.
/// Throws Error(nondescent_direction) unless slope < 0.
double armijo_step(const std::function<double(double)>& phi, double slope, double beta, double sigma);

/// Armijo step for F = L_rho(., z, omega) along d from x.
double armijo_step(const ProblemInstance& inst, const DualPoint& omega, double rho, const PrimalPoint& x,
                   std::span<const double> z, const PrimalPoint& d, double beta, double sigma);

}  // namespace sdmgs
