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

#include "sdmgs/milp.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "sdmgs/error.hpp"

namespace sdmgs {

namespace {

struct Node {
    Vector lower;
    Vector upper;
    LpResult relaxation;
};

bool rows_satisfied(const LpProblem& p, const Vector& x, double tol) {
    for (const auto& row : p.rows) {
        double act = 0.0;
        double scale = std::max(1.0, std::abs(row.rhs));
        for (std::size_t j = 0; j < x.size(); ++j) {
            act += row.coeffs[j] * x[j];
            scale = std::max(scale, std::abs(row.coeffs[j] * x[j]));
        }
        const double viol = row.relation == Relation::less_equal    ? act - row.rhs
                            : row.relation == Relation::greater_equal ? row.rhs - act
                                                                      : std::abs(act - row.rhs);
        if (viol > tol * scale) return false;
    }
    return true;
}

LpResult relax(const LpProblem& base, const Vector& lower, const Vector& upper, const Tolerances& tol) {
    LpProblem p = base;
    p.lower = lower;
    p.upper = upper;
    return solve_lp(p, tol);
}

}  // namespace

MilpSolution solve_milp(const LpProblem& problem, const std::vector<bool>& integer_mask, const Tolerances& tol) {
    const std::size_t n = problem.n_vars();
    if (integer_mask.size() != n) throw Error(ErrorCode::dimension_mismatch, "integer mask length");

    Vector lower = problem.lower;
    Vector upper = problem.upper;
    bool has_continuous = false;
    for (std::size_t j = 0; j < n; ++j) {
        if (integer_mask[j]) {
            lower[j] = std::ceil(lower[j] - tol.integrality);
            upper[j] = std::floor(upper[j] + tol.integrality);
        } else {
            has_continuous = true;
        }
    }

    MilpSolution best;
    double incumbent = std::numeric_limits<double>::infinity();

    std::vector<Node> stack;
    {
        LpResult root = relax(problem, lower, upper, tol);
        if (root.status == LpStatus::infeasible) return best;
        stack.push_back({std::move(lower), std::move(upper), std::move(root)});
    }

    std::size_t nodes = 0;
    while (!stack.empty()) {
        Node node = std::move(stack.back());
        stack.pop_back();
        if (++nodes > tol.node_limit) throw Error(ErrorCode::node_limit_exceeded, "branch-and-bound node limit");
        if (node.relaxation.value >= incumbent - tol.bnb_improvement) continue;

        const Vector& x = node.relaxation.x;
        std::size_t branch = n;
        double most = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (!integer_mask[j]) continue;
            const double frac = x[j] - std::floor(x[j]);
            const double dist = std::min(frac, 1.0 - frac);
            if (dist > tol.integrality && dist > most) {
                most = dist;
                branch = j;
            }
        }

        if (branch == n) {
            Vector point = x;
            for (std::size_t j = 0; j < n; ++j) {
                if (integer_mask[j]) point[j] = std::round(point[j]);
            }
            if (has_continuous) {
                Vector lo = node.lower;
                Vector hi = node.upper;
                for (std::size_t j = 0; j < n; ++j) {
                    if (integer_mask[j]) lo[j] = hi[j] = point[j];
                }
                LpResult fixed = relax(problem, lo, hi, tol);
                if (fixed.status != LpStatus::optimal) continue;
                point = fixed.x;
                for (std::size_t j = 0; j < n; ++j) {
                    if (integer_mask[j]) point[j] = lo[j];
                }
            } else if (!rows_satisfied(problem, point, tol.lp_residual)) {
                continue;
            }
            const double value = dot(problem.objective, point);
            if (value < incumbent - tol.bnb_improvement) {
                incumbent = value;
                best.status = MilpStatus::optimal;
                best.point = std::move(point);
                best.objective = value;
            }
            continue;
        }

        Node down{node.lower, node.upper, {}};
        down.upper[branch] = std::floor(x[branch]);
        down.relaxation = relax(problem, down.lower, down.upper, tol);
        Node up{std::move(node.lower), std::move(node.upper), {}};
        up.lower[branch] = std::ceil(x[branch]);
        up.relaxation = relax(problem, up.lower, up.upper, tol);

        const bool down_ok = down.relaxation.status == LpStatus::optimal &&
                             down.relaxation.value < incumbent - tol.bnb_improvement;
        const bool up_ok = up.relaxation.status == LpStatus::optimal &&
                           up.relaxation.value < incumbent - tol.bnb_improvement;
        if (down_ok && up_ok) {
            // The child pushed last is explored first.
            if (up.relaxation.value < down.relaxation.value) {
                stack.push_back(std::move(down));
                stack.push_back(std::move(up));
            } else {
                stack.push_back(std::move(up));
                stack.push_back(std::move(down));
            }
        } else if (down_ok) {
            stack.push_back(std::move(down));
        } else if (up_ok) {
            stack.push_back(std::move(up));
        }
    }
    best.nodes = nodes;
    return best;
}

}  // namespace sdmgs
