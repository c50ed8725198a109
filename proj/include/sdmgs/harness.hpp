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
#include <ostream>
#include <string>
#include <vector>

#include "sdmgs/alm.hpp"

namespace sdmgs {

inline constexpr const char* iteration_csv_header = "k,phi_check_best,phi_hat,residual_norm,gamma_k,serious,rho,wall_ms";
inline constexpr const char* subgradient_csv_header = "k,phi,phi_best,residual_norm,step,wall_ms";

/// Doubles are written with %.17g so the file round-trips exactly.
void write_iteration_csv(std::ostream& out, const std::vector<IterationRecord>& records);
void write_subgradient_csv(std::ostream& out, const std::vector<SubgradientRecord>& records);

/// Every column except wall_ms, formatted as in the CSV.
std::string bound_columns(const std::vector<IterationRecord>& records);

struct SweepCell {
    double gamma = 0.0;  // NaN for the cell without the serious step test
    double rho = 0.0;
    bool use_ssc = true;
    std::string path;
    AlmResult result;
};

/// One run per (gamma, rho) plus one run without the serious step test per
/// rho, all with fixed rho and the same k_max. Writes
/// ssc_g<gamma>_r<rho>.csv and nossc_r<rho>.csv into out_dir when it is not
/// empty.
std::vector<SweepCell> ssc_sweep(const ProblemInstance& inst, const std::vector<double>& gammas,
                                 const std::vector<double>& rhos, std::size_t k_max, const AlmConfig& base,
                                 const std::string& out_dir);

struct SpeedupRow {
    std::size_t threads = 1;
    double ms_per_iteration = 0.0;
    double speedup = 1.0;
};

/// Times repeats runs for every thread count. T_1 is the minimum over the
/// single-thread repeats and T_N the mean over the N-thread repeats. Throws
/// Error(nondeterministic_trajectory) if any run's bound columns differ.
std::vector<SpeedupRow> speedup_harness(const ProblemInstance& inst, const AlmConfig& cfg,
                                        const std::vector<std::size_t>& thread_counts, std::size_t repeats);

void write_speedup_tsv(std::ostream& out, const std::vector<SpeedupRow>& rows);

}  // namespace sdmgs
