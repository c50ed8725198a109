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

#include "sdmgs/generator.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "sdmgs/error.hpp"

namespace sdmgs {

namespace {

// Uses the engine output directly; the std distributions differ between
// standard libraries.
std::uint64_t draw(std::mt19937_64& rng, std::uint64_t range) { return rng() % range; }

}  // namespace

ProblemInstance generate_instance(std::uint64_t seed, std::size_t m, std::size_t n, double density, bool quadratic) {
    if (m == 0 || n == 0) throw Error(ErrorCode::invalid_argument, "generator needs m >= 1 and n >= 1");
    if (!(density >= 0.0 && density <= 1.0)) throw Error(ErrorCode::invalid_argument, "density must lie in [0,1]");
    std::mt19937_64 rng(seed);
    const std::size_t linked = std::max<std::size_t>(1, n / 2);
    const auto threshold = static_cast<std::uint64_t>(std::llround(density * 1000.0));

    ProblemInstance inst;
    inst.name = "gen_s" + std::to_string(seed) + "_m" + std::to_string(m) + "_n" + std::to_string(n);
    for (std::size_t i = 0; i < m; ++i) {
        BlockSpec b;
        b.lower.assign(n, 0.0);
        b.upper.assign(n, 1.0);
        b.integer.assign(n, true);
        b.cost_quad_diag.assign(n, 0.0);
        for (std::size_t j = 0; j < n; ++j) {
            b.cost_linear.push_back((static_cast<double>(draw(rng, 2001)) - 1000.0) / 100.0);
        }
        if (quadratic) {
            for (std::size_t j = 0; j < n; ++j) b.cost_quad_diag[j] = static_cast<double>(draw(rng, 201)) / 100.0;
        }
        if (threshold > 0) {
            LinearConstraint row{Vector(n, 0.0), Relation::less_equal, 0.0};
            double total = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                const std::uint64_t weight = 1 + draw(rng, 10);
                if (draw(rng, 1000) < threshold) {
                    row.coeffs[j] = static_cast<double>(weight);
                    total += row.coeffs[j];
                }
            }
            row.rhs = std::floor(0.5 * total);
            if (total > 0.0) b.constraints.push_back(std::move(row));
        }
        for (std::size_t j = 0; j < linked; ++j) {
            Vector q(n, 0.0);
            q[j] = 1.0;
            b.coupling.push_back(std::move(q));
        }
        inst.blocks.push_back(std::move(b));
    }
    for (std::size_t j = 0; j < linked; ++j) {
        std::vector<std::size_t> group;
        for (std::size_t i = 0; i < m; ++i) group.push_back(i * linked + j);
        inst.linkage.groups.push_back(std::move(group));
    }
    return inst;
}

}  // namespace sdmgs
