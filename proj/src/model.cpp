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

#include "sdmgs/model.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "sdmgs/error.hpp"

namespace sdmgs {

namespace {

std::string block_msg(std::size_t i, const std::string& text) {
    std::ostringstream os;
    os << "block " << i << ": " << text;
    return os.str();
}

}  // namespace

bool BlockSpec::is_linear() const noexcept {
    for (double d : cost_quad_diag) {
        if (d != 0.0) return false;
    }
    return true;
}

double BlockSpec::objective(std::span<const double> x) const {
    double value = cost_constant;
    for (std::size_t j = 0; j < x.size(); ++j) {
        value += cost_linear[j] * x[j];
        if (cost_quad_diag[j] != 0.0) value += 0.5 * cost_quad_diag[j] * x[j] * x[j];
    }
    return value;
}

Vector BlockSpec::gradient(std::span<const double> x) const {
    Vector g(cost_linear);
    for (std::size_t j = 0; j < g.size(); ++j) g[j] += cost_quad_diag[j] * x[j];
    return g;
}

Vector BlockSpec::couple(std::span<const double> x) const {
    Vector out(coupling.size(), 0.0);
    for (std::size_t r = 0; r < coupling.size(); ++r) out[r] = dot(coupling[r], x);
    return out;
}

Vector BlockSpec::couple_transpose(std::span<const double> y) const {
    Vector out(n_vars(), 0.0);
    for (std::size_t r = 0; r < coupling.size(); ++r) {
        if (y[r] == 0.0) continue;
        for (std::size_t j = 0; j < out.size(); ++j) out[j] += coupling[r][j] * y[r];
    }
    return out;
}

std::size_t ProblemInstance::coupling_dim() const noexcept {
    std::size_t q = 0;
    for (const auto& b : blocks) q += b.coupling_rows();
    return q;
}

bool ProblemInstance::is_linear() const noexcept {
    for (const auto& b : blocks) {
        if (!b.is_linear()) return false;
    }
    return true;
}

CouplingLayout CouplingLayout::from(const ProblemInstance& inst) {
    CouplingLayout layout;
    layout.offset.resize(inst.blocks.size() + 1, 0);
    for (std::size_t i = 0; i < inst.blocks.size(); ++i) {
        layout.offset[i + 1] = layout.offset[i] + inst.blocks[i].coupling_rows();
    }
    const std::size_t q = layout.offset.back();
    layout.group_of.assign(q, 0);
    layout.group_size.assign(inst.linkage.groups.size(), 0);
    for (std::size_t g = 0; g < inst.linkage.groups.size(); ++g) {
        for (std::size_t j : inst.linkage.groups[g]) {
            if (j >= q) throw Error(ErrorCode::validation_error, "linkage: coordinate out of range");
            layout.group_of[j] = g;
        }
        layout.group_size[g] = inst.linkage.groups[g].size();
    }
    return layout;
}

std::vector<std::string> validate_instance(const ProblemInstance& inst) {
    std::vector<std::string> out;
    if (inst.blocks.empty()) out.emplace_back("instance: no blocks");

    for (std::size_t i = 0; i < inst.blocks.size(); ++i) {
        const BlockSpec& b = inst.blocks[i];
        const std::size_t n = b.n_vars();
        if (n == 0) out.push_back(block_msg(i, "no variables"));
        if (b.cost_quad_diag.size() != n) out.push_back(block_msg(i, "cost_quad_diag length mismatch"));
        if (b.lower.size() != n || b.upper.size() != n) out.push_back(block_msg(i, "bounds length mismatch"));
        if (b.integer.size() != n) out.push_back(block_msg(i, "integer mask length mismatch"));
        for (std::size_t j = 0; j < std::min(n, b.cost_quad_diag.size()); ++j) {
            if (!(b.cost_quad_diag[j] >= 0.0) || !std::isfinite(b.cost_quad_diag[j])) {
                out.push_back(block_msg(i, "negative quadratic cost on variable " + std::to_string(j)));
            }
        }
        if (b.lower.size() == n && b.upper.size() == n) {
            for (std::size_t j = 0; j < n; ++j) {
                if (!std::isfinite(b.lower[j]) || !std::isfinite(b.upper[j])) {
                    out.push_back(block_msg(i, "unbounded variable " + std::to_string(j)));
                } else if (b.lower[j] > b.upper[j]) {
                    out.push_back(block_msg(i, "empty bounds on variable " + std::to_string(j)));
                }
            }
        }
        for (std::size_t c = 0; c < b.constraints.size(); ++c) {
            if (b.constraints[c].coeffs.size() != n) {
                out.push_back(block_msg(i, "constraint " + std::to_string(c) + " length mismatch"));
            }
        }
        if (b.coupling.empty()) out.push_back(block_msg(i, "no coupling rows"));
        for (std::size_t r = 0; r < b.coupling.size(); ++r) {
            if (b.coupling[r].size() != n) {
                out.push_back(block_msg(i, "coupling row " + std::to_string(r) + " length mismatch"));
            }
        }
    }

    const std::size_t q = inst.coupling_dim();
    std::vector<int> seen(q, 0);
    bool out_of_range = false;
    for (std::size_t g = 0; g < inst.linkage.groups.size(); ++g) {
        if (inst.linkage.groups[g].empty()) out.push_back("linkage: empty group " + std::to_string(g));
        for (std::size_t j : inst.linkage.groups[g]) {
            if (j >= q) {
                out_of_range = true;
            } else {
                ++seen[j];
            }
        }
    }
    if (out_of_range) out.emplace_back("linkage: coordinate out of range");
    for (std::size_t j = 0; j < q; ++j) {
        if (seen[j] == 0) out.push_back("linkage: coordinate " + std::to_string(j) + " not covered");
        if (seen[j] > 1) out.push_back("linkage: coordinate " + std::to_string(j) + " in several groups");
    }
    return out;
}

Vector couple(const ProblemInstance& inst, const PrimalPoint& x) {
    if (x.blocks.size() != inst.blocks.size()) {
        throw Error(ErrorCode::dimension_mismatch, "primal point block count");
    }
    Vector out;
    out.reserve(inst.coupling_dim());
    for (std::size_t i = 0; i < inst.blocks.size(); ++i) {
        if (x.blocks[i].size() != inst.blocks[i].n_vars()) {
            throw Error(ErrorCode::dimension_mismatch, "primal point block " + std::to_string(i));
        }
        Vector qx = inst.blocks[i].couple(x.blocks[i]);
        out.insert(out.end(), qx.begin(), qx.end());
    }
    return out;
}

Vector residual(const ProblemInstance& inst, const PrimalPoint& x, std::span<const double> z) {
    Vector r = couple(inst, x);
    if (z.size() != r.size()) throw Error(ErrorCode::dimension_mismatch, "z length");
    for (std::size_t j = 0; j < r.size(); ++j) r[j] -= z[j];
    return r;
}

double objective(const ProblemInstance& inst, const PrimalPoint& x) {
    double total = 0.0;
    for (std::size_t i = 0; i < inst.blocks.size(); ++i) total += inst.blocks[i].objective(x.blocks[i]);
    return total;
}

Vector project_onto_Z(const ProblemInstance& inst, std::span<const double> y) {
    if (y.size() != inst.coupling_dim()) throw Error(ErrorCode::dimension_mismatch, "y length");
    Vector z(y.size(), 0.0);
    for (const auto& group : inst.linkage.groups) {
        double sum = 0.0;
        for (std::size_t j : group) sum += y[j];
        const double mean = sum / static_cast<double>(group.size());
        for (std::size_t j : group) z[j] = mean;
    }
    return z;
}

DualPoint project_onto_Zperp(const ProblemInstance& inst, std::span<const double> v) {
    Vector z = project_onto_Z(inst, v);
    DualPoint w{Vector(v.size())};
    for (std::size_t j = 0; j < v.size(); ++j) w.omega[j] = v[j] - z[j];
    return w;
}

double max_group_sum(const ProblemInstance& inst, std::span<const double> v) {
    double worst = 0.0;
    for (const auto& group : inst.linkage.groups) {
        double sum = 0.0;
        for (std::size_t j : group) sum += v[j];
        worst = std::max(worst, std::abs(sum));
    }
    return worst;
}

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) s += a[j] * b[j];
    return s;
}

double squared_norm(std::span<const double> a) { return dot(a, a); }

}  // namespace sdmgs
