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

#include <string>

#include "sdmgs/model.hpp"

namespace sdmgs {

/// JSON instance format:
///   {"name": ..., "blocks": [{"cost_linear": [...], "cost_quad_diag": [...],
///    "cost_constant": 0, "constraints": [{"coeffs": [...], "rel": "<=", "rhs": 1}],
///    "lb": [...], "ub": [...], "integer": [...], "Q": [[...], ...]}],
///    "groups": [[0, 2], [1, 3]]}
/// cost_quad_diag, cost_constant and constraints are optional. Errors carry
/// the source name and line: Error(parse_error) for malformed input and
/// Error(validation_error) when the instance breaks an invariant.
ProblemInstance parse_instance_json(const std::string& text, const std::string& source = "<string>");
ProblemInstance parse_instance(const std::string& path);

std::string write_instance_json(const ProblemInstance& inst);
void write_instance(const ProblemInstance& inst, const std::string& path);

}  // namespace sdmgs
