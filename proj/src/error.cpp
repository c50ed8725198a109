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

#include "sdmgs/error.hpp"

namespace sdmgs {

const char* to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::invalid_argument: return "invalid_argument";
        case ErrorCode::dimension_mismatch: return "dimension_mismatch";
        case ErrorCode::parse_error: return "parse_error";
        case ErrorCode::validation_error: return "validation_error";
        case ErrorCode::infeasible: return "infeasible";
        case ErrorCode::numerical_failure: return "numerical_failure";
        case ErrorCode::node_limit_exceeded: return "node_limit_exceeded";
        case ErrorCode::max_inner_iterations: return "max_inner_iterations";
        case ErrorCode::nondescent_direction: return "nondescent_direction";
        case ErrorCode::degenerate_denominator: return "degenerate_denominator";
        case ErrorCode::missing_packet: return "missing_packet";
        case ErrorCode::worker_failure: return "worker_failure";
        case ErrorCode::too_large: return "too_large";
        case ErrorCode::not_pure_integer: return "not_pure_integer";
        case ErrorCode::no_certificate: return "no_certificate";
        case ErrorCode::nondeterministic_trajectory: return "nondeterministic_trajectory";
        case ErrorCode::unsupported: return "unsupported";
        case ErrorCode::io_error: return "io_error";
    }
    return "unknown";
}

}  // namespace sdmgs
