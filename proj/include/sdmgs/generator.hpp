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

#include <cstdint>

#include "sdmgs/model.hpp"

namespace sdmgs {

/// Seeded two-stage style instance: m blocks of n binaries, costs that are
/// multiples of 0.01 in [-10, 10], the first max(1, n/2) variables of every
/// block linked across blocks, and with density > 0 one knapsack row per
/// block (weights in [1, 10], each present with probability density,
/// capacity floor(half the weight sum)). quadratic adds diagonal terms in
/// [0, 2]. Identical arguments give identical instances on every platform.
ProblemInstance generate_instance(std::uint64_t seed, std::size_t m, std::size_t n, double density,
                                  bool quadratic = false);

}  // namespace sdmgs
