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

#include "sdmgs/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

#include <Eigen/Dense>

#include "sdmgs/error.hpp"
#include "sdmgs/lp.hpp"
#include "sdmgs/simplex_qp.hpp"

namespace sdmgs {

namespace {

void require_valid(const ProblemInstance& inst) {
    const auto issues = validate_instance(inst);
    if (!issues.empty()) throw Error(ErrorCode::validation_error, issues.front());
}

bool feasible_point(const BlockSpec& b, const Vector& x) {
    for (const auto& row : b.constraints) {
        const double act = dot(row.coeffs, x);
        const double scale = 1e-9 * std::max(1.0, std::abs(row.rhs));
        if (row.relation == Relation::less_equal && act > row.rhs + scale) return false;
        if (row.relation == Relation::greater_equal && act < row.rhs - scale) return false;
        if (row.relation == Relation::equal && std::abs(act - row.rhs) > scale) return false;
    }
    return true;
}

std::vector<EnumeratedBlock> enumerate_all(const ProblemInstance& inst) {
    std::vector<EnumeratedBlock> out;
    for (std::size_t i = 0; i < inst.block_count(); ++i) {
        out.push_back(enumerate_block_points(inst.blocks[i]));
        if (out.back().points.empty()) throw Error(ErrorCode::infeasible, "block " + std::to_string(i) + " has no feasible point");
    }
    return out;
}

// Hull data over the enumerated points of one block.
struct PointHull {
    std::vector<Vector> points;
    Eigen::MatrixXd gram_f;
    Eigen::MatrixXd gram_q;
    Eigen::VectorXd cost;
    Eigen::MatrixXd images;  // column v is Q_i v
    double constant = 0.0;
};

PointHull make_hull(const BlockSpec& b, const EnumeratedBlock& e) {
    PointHull h;
    h.points = e.points;
    const auto n = static_cast<Eigen::Index>(e.points.size());
    const auto rows = static_cast<Eigen::Index>(b.coupling_rows());
    Eigen::MatrixXd V(static_cast<Eigen::Index>(b.n_vars()), n);
    for (Eigen::Index v = 0; v < n; ++v)
        for (Eigen::Index j = 0; j < V.rows(); ++j) V(j, v) = e.points[static_cast<std::size_t>(v)][static_cast<std::size_t>(j)];
    Eigen::VectorXd d(V.rows());
    Eigen::VectorXd c(V.rows());
    Eigen::MatrixXd Q(rows, V.rows());
    for (Eigen::Index j = 0; j < V.rows(); ++j) {
        d[j] = b.cost_quad_diag[static_cast<std::size_t>(j)];
        c[j] = b.cost_linear[static_cast<std::size_t>(j)];
    }
    for (Eigen::Index r = 0; r < rows; ++r)
        for (Eigen::Index j = 0; j < V.rows(); ++j) Q(r, j) = b.coupling[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)];
    h.gram_f = V.transpose() * d.asDiagonal() * V;
    h.images = Q * V;
    h.gram_q = h.images.transpose() * h.images;
    h.cost = V.transpose() * c;
    h.constant = b.cost_constant;
    return h;
}

// min over the hull of f_i + omega_i'Q_i x + rho/2 |Q_i x - z_i|^2.
SimplexQpResult hull_minimize(const PointHull& h, const Eigen::VectorXd& omega_i, const Eigen::VectorXd& z_i, double rho,
                              const Vector& warm) {
    SimplexQpProblem p;
    p.vertices = h.points;
    p.hessian = h.gram_f + rho * h.gram_q;
    p.linear = h.cost + h.images.transpose() * (omega_i - rho * z_i);
    p.constant = h.constant + 0.5 * rho * z_i.squaredNorm();
    p.warm_start = warm;
    return solve_simplex_qp(p);
}

Eigen::VectorXd slice(const Vector& v, const CouplingLayout& layout, std::size_t i) {
    const auto s = layout.block_slice(std::span<const double>(v), i);
    return Eigen::Map<const Eigen::VectorXd>(s.data(), static_cast<Eigen::Index>(s.size()));
}

long long key_of(double v) { return std::llround(v * 1e9); }

}  // namespace

EnumeratedBlock enumerate_block_points(const BlockSpec& block) {
    const std::size_t n = block.n_vars();
    Vector lo(n);
    Vector hi(n);
    double box = 1.0;
    for (std::size_t j = 0; j < n; ++j) {
        if (block.integer[j]) {
            lo[j] = std::ceil(block.lower[j] - 1e-9);
            hi[j] = std::floor(block.upper[j] + 1e-9);
        } else if (block.lower[j] == block.upper[j]) {
            lo[j] = hi[j] = block.lower[j];
        } else {
            throw Error(ErrorCode::not_pure_integer, "variable " + std::to_string(j) + " is continuous");
        }
        if (hi[j] < lo[j]) return {};
        box *= hi[j] - lo[j] + 1.0;
        if (box > static_cast<double>(max_enumerated_points)) {
            throw Error(ErrorCode::too_large, "bound box exceeds " + std::to_string(max_enumerated_points) + " points");
        }
    }
    EnumeratedBlock out;
    Vector x = lo;
    while (true) {
        if (feasible_point(block, x)) out.points.push_back(x);
        std::size_t j = n;
        while (j > 0 && x[j - 1] >= hi[j - 1]) {
            x[j - 1] = lo[j - 1];
            --j;
        }
        if (j == 0) break;
        x[j - 1] += 1.0;
    }
    return out;
}

double phi_exact(const ProblemInstance& inst, const DualPoint& omega) {
    const CouplingLayout layout = CouplingLayout::from(inst);
    if (omega.omega.size() != layout.q()) throw Error(ErrorCode::dimension_mismatch, "omega must have length q");
    const auto blocks = enumerate_all(inst);
    double total = 0.0;
    for (std::size_t i = 0; i < inst.block_count(); ++i) {
        const auto w = layout.block_slice(std::span<const double>(omega.omega), i);
        double best = std::numeric_limits<double>::infinity();
        for (const auto& v : blocks[i].points) {
            best = std::min(best, inst.blocks[i].objective(v) + dot(w, inst.blocks[i].couple(v)));
        }
        total += best;
    }
    return total;
}

LdSolution solve_ld_exact(const ProblemInstance& inst) {
    require_valid(inst);
    const CouplingLayout layout = CouplingLayout::from(inst);
    const auto blocks = enumerate_all(inst);
    const std::size_t m = inst.block_count();

    // Columns: one weight per enumerated point, then one z per group.
    // Rows: convexity per block, then (Q_i x_i)_j - z_g(j) = 0 per coordinate.
    std::vector<std::size_t> first(m + 1, 0);
    for (std::size_t i = 0; i < m; ++i) first[i + 1] = first[i] + blocks[i].points.size();
    const std::size_t n_lambda = first[m];
    const std::size_t n = n_lambda + layout.group_count();

    LpProblem p;
    p.objective.assign(n, 0.0);
    p.lower.assign(n, 0.0);
    p.upper.assign(n, 1.0);
    std::vector<Vector> images(n_lambda);
    double lo = 0.0;
    double hi = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t v = 0; v < blocks[i].points.size(); ++v) {
            const Vector& x = blocks[i].points[v];
            p.objective[first[i] + v] = inst.blocks[i].objective(x);
            images[first[i] + v] = inst.blocks[i].couple(x);
            for (double a : images[first[i] + v]) {
                lo = std::min(lo, a);
                hi = std::max(hi, a);
            }
        }
        LinearConstraint convexity{Vector(n, 0.0), Relation::equal, 1.0};
        for (std::size_t v = first[i]; v < first[i + 1]; ++v) convexity.coeffs[v] = 1.0;
        p.rows.push_back(std::move(convexity));
    }
    // Any linked value is a convex combination of point images, so these
    // bounds never bind.
    for (std::size_t g = 0; g < layout.group_count(); ++g) {
        p.lower[n_lambda + g] = lo - 1.0;
        p.upper[n_lambda + g] = hi + 1.0;
    }
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t r = 0; r < inst.blocks[i].coupling_rows(); ++r) {
            const std::size_t j = layout.offset[i] + r;
            LinearConstraint link{Vector(n, 0.0), Relation::equal, 0.0};
            for (std::size_t v = first[i]; v < first[i + 1]; ++v) link.coeffs[v] = images[v][r];
            link.coeffs[n_lambda + layout.group_of[j]] = -1.0;
            p.rows.push_back(std::move(link));
        }
    }

    const LpResult lp = solve_lp(p);
    if (lp.status != LpStatus::optimal) throw Error(ErrorCode::infeasible, "linked hull problem has no feasible point");
    Vector y(layout.q());
    for (std::size_t j = 0; j < layout.q(); ++j) y[j] = -lp.duals[m + j];
    LdSolution out;
    out.value = lp.value;
    out.omega = project_onto_Zperp(inst, y);
    const double check = phi_exact(inst, out.omega);
    if (std::abs(check - out.value) > 1e-7 * std::max(1.0, std::abs(out.value))) {
        throw Error(ErrorCode::no_certificate,
                    "recovered multiplier gives " + std::to_string(check) + " against LP value " + std::to_string(out.value));
    }
    return out;
}

double solve_cld_exact(const ProblemInstance& inst) {
    require_valid(inst);
    if (inst.is_linear()) return solve_ld_exact(inst).value;

    const CouplingLayout layout = CouplingLayout::from(inst);
    const auto blocks = enumerate_all(inst);
    const std::size_t m = inst.block_count();
    std::vector<PointHull> hulls;
    for (std::size_t i = 0; i < m; ++i) hulls.push_back(make_hull(inst.blocks[i], blocks[i]));

    const double rho = 1.0;
    Vector omega(layout.q(), 0.0);
    std::vector<Vector> weights(m);
    PrimalPoint x;
    x.blocks.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        x.blocks[i] = hull_minimize(hulls[i], slice(omega, layout, i), Eigen::VectorXd::Zero(static_cast<Eigen::Index>(inst.blocks[i].coupling_rows())), 0.0, {}).point;
    }
    Vector z = project_onto_Z(inst, couple(inst, x));

    auto dual_value = [&](const Vector& w) {
        double total = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            const Eigen::VectorXd zero = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(inst.blocks[i].coupling_rows()));
            total += hull_minimize(hulls[i], slice(w, layout, i), zero, 0.0, {}).value;
        }
        return total;
    };

    double lower = -std::numeric_limits<double>::infinity();
    double gap = std::numeric_limits<double>::infinity();
    double res_inf = std::numeric_limits<double>::infinity();
    for (int outer = 0; outer < 2000; ++outer) {
        double prev = std::numeric_limits<double>::infinity();
        for (int inner = 0; inner < 20000; ++inner) {
            double value = 0.0;
            for (std::size_t i = 0; i < m; ++i) {
                SimplexQpResult r = hull_minimize(hulls[i], slice(omega, layout, i), slice(z, layout, i), rho, weights[i]);
                weights[i] = r.weights;
                x.blocks[i] = std::move(r.point);
            }
            z = project_onto_Z(inst, couple(inst, x));
            const Vector qx = couple(inst, x);
            for (std::size_t j = 0; j < qx.size(); ++j) value += omega[j] * qx[j] + 0.5 * rho * (qx[j] - z[j]) * (qx[j] - z[j]);
            value += objective(inst, x);
            if (prev - value <= 1e-15 * (1.0 + std::abs(value))) break;
            prev = value;
        }
        const Vector r = residual(inst, x, z);
        res_inf = 0.0;
        for (double a : r) res_inf = std::max(res_inf, std::abs(a));
        for (std::size_t j = 0; j < r.size(); ++j) omega[j] += rho * r[j];
        omega = project_onto_Zperp(inst, omega).omega;
        lower = dual_value(omega);
        gap = std::abs(objective(inst, x) - lower);
        if (res_inf <= 1e-9 && gap <= 1e-8) return lower;
    }
    if (res_inf <= 1e-6 && gap <= 1e-6) return lower;
    throw Error(ErrorCode::no_certificate, "multiplier method stopped with gap " + std::to_string(gap) +
                                               " and residual " + std::to_string(res_inf));
}

double zeta_star(const ProblemInstance& inst) {
    require_valid(inst);
    const CouplingLayout layout = CouplingLayout::from(inst);
    const auto blocks = enumerate_all(inst);
    const std::size_t m = inst.block_count();
    const std::size_t G = layout.group_count();

    // Last block touching each group; a group is open while later blocks need it.
    std::vector<std::size_t> first_block(G, m);
    std::vector<std::size_t> last_block(G, 0);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = layout.offset[i]; j < layout.offset[i + 1]; ++j) {
            const std::size_t g = layout.group_of[j];
            first_block[g] = std::min(first_block[g], i);
            last_block[g] = std::max(last_block[g], i);
        }
    }

    // State: values of the open groups (NaN when not yet fixed) -> best cost.
    using Key = std::vector<long long>;
    struct Entry {
        Vector values;
        double cost;
    };
    std::map<Key, Entry> states;
    states[Key(G, std::numeric_limits<long long>::min())] = {Vector(G, std::nan("")), 0.0};
    for (std::size_t i = 0; i < m; ++i) {
        const BlockSpec& b = inst.blocks[i];
        std::map<Key, Entry> next;
        for (const auto& [key, entry] : states) {
            for (const auto& v : blocks[i].points) {
                Vector values = entry.values;
                const Vector qv = b.couple(v);
                bool ok = true;
                for (std::size_t r = 0; r < qv.size() && ok; ++r) {
                    const std::size_t g = layout.group_of[layout.offset[i] + r];
                    if (std::isnan(values[g])) {
                        values[g] = qv[r];
                    } else if (std::abs(values[g] - qv[r]) > 1e-9) {
                        ok = false;
                    }
                }
                if (!ok) continue;
                Key k(G, std::numeric_limits<long long>::min());
                for (std::size_t g = 0; g < G; ++g) {
                    if (last_block[g] <= i) {
                        values[g] = std::nan("");
                    } else if (!std::isnan(values[g])) {
                        k[g] = key_of(values[g]);
                    }
                }
                const double cost = entry.cost + b.objective(v);
                auto it = next.find(k);
                if (it == next.end() || cost < it->second.cost) next[k] = {std::move(values), cost};
            }
        }
        states = std::move(next);
        if (states.empty()) throw Error(ErrorCode::infeasible, "no assignment satisfies the linkage");
    }
    double best = std::numeric_limits<double>::infinity();
    for (const auto& [key, entry] : states) best = std::min(best, entry.cost);
    return best;
}

OracleResult run_oracle(const ProblemInstance& inst) {
    OracleResult out;
    const LdSolution ld = solve_ld_exact(inst);
    out.zeta_ld = ld.value;
    out.omega_ld = ld.omega;
    out.zeta_cld = solve_cld_exact(inst);
    out.zeta_star = zeta_star(inst);
    return out;
}

}  // namespace sdmgs
