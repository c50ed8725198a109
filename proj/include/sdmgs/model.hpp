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
#include <span>
#include <string>
#include <vector>

namespace sdmgs {

using Vector = std::vector<double>;

enum class Relation { less_equal, equal, greater_equal };

struct LinearConstraint {
    Vector coeffs;
    Relation relation = Relation::less_equal;
    double rhs = 0.0;
};

/// One block of the decomposed problem: objective f_i, feasible set X_i and
/// coupling rows Q_i.
///
/// The objective is f_i(x) = constant + c'x + 1/2 sum_j d_j x_j^2 with d >= 0.
/// X_i is the set of points inside [lower, upper] that satisfy `constraints`
/// and are integral wherever `integer` is set.
struct BlockSpec {
    Vector cost_linear;
    Vector cost_quad_diag;
    double cost_constant = 0.0;
    std::vector<LinearConstraint> constraints;
    Vector lower;
    Vector upper;
    std::vector<bool> integer;
    std::vector<Vector> coupling;  // q_i rows, each of length n_vars

    std::size_t n_vars() const noexcept { return cost_linear.size(); }
    std::size_t coupling_rows() const noexcept { return coupling.size(); }
    bool is_linear() const noexcept;

    double objective(std::span<const double> x) const;
    Vector gradient(std::span<const double> x) const;
    /// Q_i x.
    Vector couple(std::span<const double> x) const;
    /// Q_i' y.
    Vector couple_transpose(std::span<const double> y) const;
};

/// Partition of the global coupling coordinates [0, q) into groups. Z is the
/// set of vectors that are constant on every group.
struct LinkageStructure {
    std::vector<std::vector<std::size_t>> groups;
};

struct ProblemInstance {
    std::string name;
    std::vector<BlockSpec> blocks;
    LinkageStructure linkage;

    std::size_t block_count() const noexcept { return blocks.size(); }
    std::size_t coupling_dim() const noexcept;
    bool is_linear() const noexcept;
};

/// Index maps derived from a validated instance.
struct CouplingLayout {
    std::vector<std::size_t> offset;      // block -> first global coordinate; size m + 1
    std::vector<std::size_t> group_of;    // coordinate -> group
    std::vector<std::size_t> group_size;  // group -> member count

    static CouplingLayout from(const ProblemInstance& inst);

    std::size_t q() const noexcept { return group_of.size(); }
    std::size_t group_count() const noexcept { return group_size.size(); }
    std::span<const double> block_slice(std::span<const double> v, std::size_t block) const {
        return v.subspan(offset[block], offset[block + 1] - offset[block]);
    }
    std::span<double> block_slice(std::span<double> v, std::size_t block) const {
        return v.subspan(offset[block], offset[block + 1] - offset[block]);
    }
};

struct PrimalPoint {
    std::vector<Vector> blocks;
};

struct DualPoint {
    Vector omega;
};

/// Returns one message per violated invariant; empty means valid.
std::vector<std::string> validate_instance(const ProblemInstance& inst);

/// Global coupling image Qx.
Vector couple(const ProblemInstance& inst, const PrimalPoint& x);

/// r = Qx - z.
Vector residual(const ProblemInstance& inst, const PrimalPoint& x, std::span<const double> z);

/// Sum of the block objectives.
double objective(const ProblemInstance& inst, const PrimalPoint& x);

/// Euclidean projection onto Z: the group-wise mean.
Vector project_onto_Z(const ProblemInstance& inst, std::span<const double> y);

/// Euclidean projection onto the orthogonal complement of Z (group mean removed).
DualPoint project_onto_Zperp(const ProblemInstance& inst, std::span<const double> v);

/// Largest absolute group sum of v.
double max_group_sum(const ProblemInstance& inst, std::span<const double> v);

double dot(std::span<const double> a, std::span<const double> b);
double squared_norm(std::span<const double> a);

}  // namespace sdmgs
