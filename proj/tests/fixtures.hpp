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

#include <random>

#include "sdmgs/model.hpp"

namespace sdmgs::testing {

inline BlockSpec binary_block(Vector costs, std::vector<Vector> coupling) {
    BlockSpec b;
    const std::size_t n = costs.size();
    b.cost_linear = std::move(costs);
    b.cost_quad_diag.assign(n, 0.0);
    b.lower.assign(n, 0.0);
    b.upper.assign(n, 1.0);
    b.integer.assign(n, true);
    b.coupling = std::move(coupling);
    return b;
}

/// f(x) = (x1 - 0.5)^2 + (x2 - 0.5)^2 on {0,1}^2 with z1 = z2.
inline ProblemInstance gap_example() {
    ProblemInstance inst;
    inst.name = "gap_example";
    BlockSpec b = binary_block({-1.0, -1.0}, {{1.0, 0.0}, {0.0, 1.0}});
    b.cost_quad_diag = {2.0, 2.0};
    b.cost_constant = 0.5;
    inst.blocks.push_back(b);
    inst.linkage.groups = {{0, 1}};
    return inst;
}

/// Two single-binary blocks with costs 1 and -3, linked copies.
inline ProblemInstance ex2() {
    ProblemInstance inst;
    inst.name = "ex2";
    inst.blocks.push_back(binary_block({1.0}, {{1.0}}));
    inst.blocks.push_back(binary_block({-3.0}, {{1.0}}));
    inst.linkage.groups = {{0, 1}};
    return inst;
}

}  // namespace sdmgs::testing
