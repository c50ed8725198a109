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

#include "sdmgs/sdm_gs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <string>

#include "sdmgs/error.hpp"
#include "sdmgs/simplex_qp.hpp"

namespace sdmgs {

namespace {

// Runs on the caller's executor, or inline on a private one.
class ExecRef {
public:
    ExecRef(BlockExecutor* exec, std::size_t blocks) {
        if (exec == nullptr) {
            own_ = std::make_unique<BlockExecutor>(blocks, 1);
            exec = own_.get();
        }
        exec_ = exec;
    }
    BlockExecutor& operator*() const { return *exec_; }
    BlockExecutor* operator->() const { return exec_; }

private:
    std::unique_ptr<BlockExecutor> own_;
    BlockExecutor* exec_ = nullptr;
};

void check_shapes(const ProblemInstance& inst, const CouplingLayout& layout, std::size_t z_size,
                  const DualPoint& omega) {
    if (z_size != layout.q() || omega.omega.size() != layout.q()) {
        throw Error(ErrorCode::dimension_mismatch, "z and omega must have length q");
    }
    (void)inst;
}

Vector direction_row(const BlockSpec& block, std::span<const double> x_i, std::span<const double> z_i,
                     std::span<const double> omega_i, double rho) {
    const Vector qx = block.couple(x_i);
    Vector y(qx.size());
    for (std::size_t r = 0; r < y.size(); ++r) y[r] = omega_i[r] + rho * (qx[r] - z_i[r]);
    Vector row = block.gradient(x_i);
    const Vector qty = block.couple_transpose(y);
    for (std::size_t j = 0; j < row.size(); ++j) row[j] += qty[j];
    return row;
}

void erase_vertex(BlockHull& hull, std::size_t idx) {
    const auto n = static_cast<Eigen::Index>(hull.size());
    const auto k = static_cast<Eigen::Index>(idx);
    auto shrink = [&](Eigen::MatrixXd& m) {
        Eigen::MatrixXd out(n - 1, n - 1);
        for (Eigen::Index a = 0, ra = 0; a < n; ++a) {
            if (a == k) continue;
            for (Eigen::Index b = 0, rb = 0; b < n; ++b) {
                if (b == k) continue;
                out(ra, rb++) = m(a, b);
            }
            ++ra;
        }
        m = std::move(out);
    };
    shrink(hull.gram_f);
    shrink(hull.gram_q);
    Eigen::VectorXd c(n - 1);
    for (Eigen::Index a = 0, ra = 0; a < n; ++a) {
        if (a != k) c[ra++] = hull.cost_v[a];
    }
    hull.cost_v = std::move(c);
    hull.vertices.erase(hull.vertices.begin() + static_cast<std::ptrdiff_t>(idx));
    hull.images.erase(hull.images.begin() + static_cast<std::ptrdiff_t>(idx));
    hull.weights.erase(hull.weights.begin() + static_cast<std::ptrdiff_t>(idx));
    hull.last_weight.erase(hull.last_weight.begin() + static_cast<std::ptrdiff_t>(idx));
}

}  // namespace

Vector BlockHull::point() const {
    Vector x(vertices.empty() ? 0 : vertices.front().size(), 0.0);
    for (std::size_t v = 0; v < vertices.size(); ++v) {
        if (weights[v] == 0.0) continue;
        for (std::size_t j = 0; j < x.size(); ++j) x[j] += weights[v] * vertices[v][j];
    }
    return x;
}

bool block_contains(const BlockSpec& block, std::span<const double> x, const Tolerances& tol) {
    if (x.size() != block.n_vars()) return false;
    for (std::size_t j = 0; j < x.size(); ++j) {
        if (!std::isfinite(x[j])) return false;
        if (x[j] < block.lower[j] - tol.dual_feasibility || x[j] > block.upper[j] + tol.dual_feasibility) return false;
        if (block.integer[j] && std::abs(x[j] - std::round(x[j])) > tol.integrality) return false;
    }
    for (const auto& row : block.constraints) {
        double act = 0.0;
        double scale = std::max(1.0, std::abs(row.rhs));
        for (std::size_t j = 0; j < x.size(); ++j) {
            act += row.coeffs[j] * x[j];
            scale = std::max(scale, std::abs(row.coeffs[j] * x[j]));
        }
        const double viol = row.relation == Relation::less_equal      ? act - row.rhs
                            : row.relation == Relation::greater_equal ? row.rhs - act
                                                                      : std::abs(act - row.rhs);
        if (viol > tol.lp_residual * scale) return false;
    }
    return true;
}

MilpSolution minimize_linear_over_block(const BlockSpec& block, const Vector& row) {
    const LpProblem p{row, block.constraints, block.lower, block.upper};
    MilpSolution s = solve_milp(p, block.integer);
    if (s.status != MilpStatus::optimal) throw Error(ErrorCode::infeasible, "block feasible set is empty");
    return s;
}

std::size_t add_vertex(BlockHull& hull, const BlockSpec& block, Vector v) {
    if (!block_contains(block, v)) throw Error(ErrorCode::invalid_argument, "vertex is not a point of the block set");
    const double dedup = default_tolerances().vertex_dedup;
    for (std::size_t k = 0; k < hull.size(); ++k) {
        double dist = 0.0;
        for (std::size_t j = 0; j < v.size(); ++j) dist = std::max(dist, std::abs(hull.vertices[k][j] - v[j]));
        if (dist <= dedup) return k;
    }

    const auto n = static_cast<Eigen::Index>(hull.size());
    Vector image = block.couple(v);
    hull.gram_f.conservativeResize(n + 1, n + 1);
    hull.gram_q.conservativeResize(n + 1, n + 1);
    hull.cost_v.conservativeResize(n + 1);
    for (Eigen::Index a = 0; a <= n; ++a) {
        const Vector& u = a == n ? v : hull.vertices[static_cast<std::size_t>(a)];
        const Vector& qu = a == n ? image : hull.images[static_cast<std::size_t>(a)];
        double gf = 0.0;
        for (std::size_t j = 0; j < v.size(); ++j) gf += block.cost_quad_diag[j] * u[j] * v[j];
        const double gq = dot(qu, image);
        hull.gram_f(a, n) = hull.gram_f(n, a) = gf;
        hull.gram_q(a, n) = hull.gram_q(n, a) = gq;
    }
    hull.cost_v[n] = dot(block.cost_linear, v);
    hull.vertices.push_back(std::move(v));
    hull.images.push_back(std::move(image));
    hull.weights.push_back(hull.weights.empty() ? 1.0 : 0.0);
    hull.last_weight.push_back(hull.weights.back());
    return static_cast<std::size_t>(n);
}

InnerApprox make_inner_approx(const ProblemInstance& inst, const PrimalPoint& x) {
    if (x.blocks.size() != inst.block_count()) throw Error(ErrorCode::dimension_mismatch, "point has wrong block count");
    InnerApprox D;
    D.blocks.resize(inst.block_count());
    for (std::size_t i = 0; i < inst.block_count(); ++i) add_vertex(D.blocks[i], inst.blocks[i], x.blocks[i]);
    return D;
}

Vector gs_x_update_block(const BlockSpec& block, BlockHull& hull, std::span<const double> z_i,
                         std::span<const double> omega_i, double rho) {
    if (hull.size() == 0) throw Error(ErrorCode::invalid_argument, "empty inner approximation");
    const auto n = static_cast<Eigen::Index>(hull.size());
    const std::size_t rows = block.coupling_rows();
    // F_i(V w) = const + c'Vw + 1/2 w'V'DVw + omega'QVw + rho/2 |QVw - z|^2
    SimplexQpProblem p;
    p.vertices = hull.vertices;
    p.hessian = hull.gram_f + rho * hull.gram_q;
    p.linear = hull.cost_v;
    Vector shift(rows);
    for (std::size_t r = 0; r < rows; ++r) shift[r] = omega_i[r] - rho * z_i[r];
    for (Eigen::Index a = 0; a < n; ++a) p.linear[a] += dot(hull.images[static_cast<std::size_t>(a)], shift);
    p.constant = block.cost_constant + 0.5 * rho * squared_norm(z_i);
    p.warm_start = hull.weights;
    SimplexQpResult r = solve_simplex_qp(p);
    hull.weights = std::move(r.weights);
    for (std::size_t v = 0; v < hull.size(); ++v) {
        if (hull.weights[v] > 0.0) hull.last_weight[v] = hull.weights[v];
    }
    return std::move(r.point);
}

PrimalPoint gs_x_update(const ProblemInstance& inst, InnerApprox& D, std::span<const double> z, const DualPoint& omega,
                        double rho, BlockExecutor* exec) {
    const CouplingLayout layout = CouplingLayout::from(inst);
    check_shapes(inst, layout, z.size(), omega);
    if (D.blocks.size() != inst.block_count()) throw Error(ErrorCode::dimension_mismatch, "inner approximation block count");
    ExecRef ex(exec, inst.block_count());
    PrimalPoint x;
    x.blocks.resize(inst.block_count());
    const std::span<const double> w(omega.omega);
    ex->for_each_block([&](std::size_t i) {
        x.blocks[i] = gs_x_update_block(inst.blocks[i], D.blocks[i], layout.block_slice(z, i), layout.block_slice(w, i), rho);
    });
    return x;
}

Vector gs_z_update(const ProblemInstance& inst, const PrimalPoint& x, BlockExecutor* exec) {
    const CouplingLayout layout = CouplingLayout::from(inst);
    if (x.blocks.size() != inst.block_count()) throw Error(ErrorCode::dimension_mismatch, "point has wrong block count");
    ExecRef ex(exec, inst.block_count());
    std::vector<ReducePacket> packets(inst.block_count());
    ex->for_each_block([&](std::size_t i) {
        const Vector qx = inst.blocks[i].couple(x.blocks[i]);
        Vector sums(layout.group_count(), 0.0);
        for (std::size_t r = 0; r < qx.size(); ++r) sums[layout.group_of[layout.offset[i] + r]] += qx[r];
        packets[i] = {i, std::move(sums)};
    });
    const Vector totals = ex->reduce_sum(packets);
    Vector z(layout.q());
    for (std::size_t j = 0; j < z.size(); ++j) {
        const std::size_t g = layout.group_of[j];
        z[j] = totals[g] / static_cast<double>(layout.group_size[g]);
    }
    return z;
}

DirectionResult direction_subproblem(const ProblemInstance& inst, const PrimalPoint& x, std::span<const double> z,
                                     const DualPoint& omega, double rho, BlockExecutor* exec) {
    const CouplingLayout layout = CouplingLayout::from(inst);
    check_shapes(inst, layout, z.size(), omega);
    ExecRef ex(exec, inst.block_count());
    DirectionResult out;
    out.x_hat.blocks.resize(inst.block_count());
    Vector gammas(inst.block_count(), 0.0);
    const std::span<const double> w(omega.omega);
    ex->for_each_block([&](std::size_t i) {
        const BlockSpec& b = inst.blocks[i];
        const Vector row = direction_row(b, x.blocks[i], layout.block_slice(z, i), layout.block_slice(w, i), rho);
        MilpSolution s = minimize_linear_over_block(b, row);
        double g = 0.0;
        for (std::size_t j = 0; j < row.size(); ++j) g -= row[j] * (s.point[j] - x.blocks[i][j]);
        gammas[i] = g;
        out.x_hat.blocks[i] = std::move(s.point);
    });
    for (double g : gammas) out.gamma += g;
    return out;
}

void expand_block_hull(const BlockSpec& block, BlockHull& hull, const Vector& x_hat, std::size_t cap) {
    const std::size_t added = add_vertex(hull, block, x_hat);
    if (cap == 0) return;
    while (hull.size() > cap) {
        std::size_t drop = hull.size();
        for (std::size_t v = 0; v < hull.size(); ++v) {
            if (v == added || hull.weights[v] > 0.0) continue;
            if (drop == hull.size() || hull.last_weight[v] < hull.last_weight[drop]) drop = v;
        }
        if (drop == hull.size()) return;
        erase_vertex(hull, drop);
    }
}

void expand_vertex_set(const ProblemInstance& inst, InnerApprox& D, const PrimalPoint& x_hat) {
    if (D.blocks.size() != inst.block_count() || x_hat.blocks.size() != inst.block_count()) {
        throw Error(ErrorCode::dimension_mismatch, "inner approximation block count");
    }
    for (std::size_t i = 0; i < inst.block_count(); ++i) expand_block_hull(inst.blocks[i], D.blocks[i], x_hat.blocks[i], D.cap);
}

SdmGsResult sdm_gs(const ProblemInstance& inst, const DualPoint& omega, double rho, const PrimalPoint& x0,
                   std::span<const double> z0, InnerApprox& D, std::size_t t_max, BlockExecutor* exec) {
    if (t_max == 0) throw Error(ErrorCode::invalid_argument, "t_max must be at least 1");
    const CouplingLayout layout = CouplingLayout::from(inst);
    check_shapes(inst, layout, z0.size(), omega);
    if (x0.blocks.size() != inst.block_count() || D.blocks.size() != inst.block_count()) {
        throw Error(ErrorCode::dimension_mismatch, "point or inner approximation has wrong block count");
    }
    ExecRef ex(exec, inst.block_count());
    const std::size_t m = inst.block_count();

    SdmGsResult out;
    out.x = x0;
    out.z.assign(z0.begin(), z0.end());
    for (std::size_t t = 0; t < t_max; ++t) {
        out.x = gs_x_update(inst, D, out.z, omega, rho, &*ex);
        out.z = gs_z_update(inst, out.x, &*ex);
    }

    // Direction, hull expansion and the per-block scalars in one pass.
    out.x_hat.blocks.resize(m);
    std::vector<ReducePacket> packets(m);
    const std::span<const double> w(omega.omega);
    const std::span<const double> z(out.z);
    ex->for_each_block([&](std::size_t i) {
        const BlockSpec& b = inst.blocks[i];
        const Vector& xi = out.x.blocks[i];
        const auto zi = layout.block_slice(z, i);
        const auto wi = layout.block_slice(w, i);
        const Vector row = direction_row(b, xi, zi, wi, rho);
        MilpSolution s = minimize_linear_over_block(b, row);
        double g = 0.0;
        for (std::size_t j = 0; j < row.size(); ++j) g -= row[j] * (s.point[j] - xi[j]);
        expand_block_hull(b, D.blocks[i], s.point, D.cap);
        out.x_hat.blocks[i] = std::move(s.point);

        const Vector qx = b.couple(xi);
        const double fi = b.objective(xi);
        double res = 0.0;
        for (std::size_t r = 0; r < qx.size(); ++r) res += (qx[r] - zi[r]) * (qx[r] - zi[r]);
        packets[i] = {i, {fi + dot(wi, qx), fi, res, g}};
    });
    const Vector totals = ex->reduce_sum(packets);
    out.lagrangian_part = totals[0];
    out.f = totals[1];
    out.residual_sq = totals[2];
    out.gamma = totals[3];
    return out;
}

double armijo_step(const std::function<double(double)>& phi, double slope, double beta, double sigma) {
    if (!(beta > 0.0 && beta < 1.0 && sigma > 0.0 && sigma < 1.0)) {
        throw Error(ErrorCode::invalid_argument, "beta and sigma must lie in (0,1)");
    }
    if (!(slope < 0.0)) throw Error(ErrorCode::nondescent_direction, "directional derivative is not negative");
    const double base = phi(0.0);
    double alpha = 1.0;
    while (phi(alpha) - base > alpha * sigma * slope) {
        alpha *= beta;
        if (alpha < std::numeric_limits<double>::min()) {
            throw Error(ErrorCode::numerical_failure, "Armijo backtracking underflowed");
        }
    }
    return alpha;
}

double armijo_step(const ProblemInstance& inst, const DualPoint& omega, double rho, const PrimalPoint& x,
                   std::span<const double> z, const PrimalPoint& d, double beta, double sigma) {
    const CouplingLayout layout = CouplingLayout::from(inst);
    check_shapes(inst, layout, z.size(), omega);
    const std::size_t m = inst.block_count();
    auto moved = [&](double alpha) {
        PrimalPoint y = x;
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < y.blocks[i].size(); ++j) y.blocks[i][j] += alpha * d.blocks[i][j];
        return y;
    };
    auto lagrangian = [&](double alpha) {
        const PrimalPoint y = moved(alpha);
        const Vector qy = couple(inst, y);
        double value = objective(inst, y) + dot(omega.omega, qy);
        double res = 0.0;
        for (std::size_t j = 0; j < qy.size(); ++j) res += (qy[j] - z[j]) * (qy[j] - z[j]);
        return value + 0.5 * rho * res;
    };
    const std::span<const double> w(omega.omega);
    double slope = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const Vector row = direction_row(inst.blocks[i], x.blocks[i], layout.block_slice(z, i), layout.block_slice(w, i), rho);
        slope += dot(row, d.blocks[i]);
    }
    return armijo_step(lagrangian, slope, beta, sigma);
}

}  // namespace sdmgs
