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

#include "sdmgs/harness.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "sdmgs/error.hpp"

namespace sdmgs {

namespace {

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string tag(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

void write_bounds(std::ostream& out, const IterationRecord& r) {
    out << r.k << ',' << num(r.phi_check_best) << ',' << num(r.phi_hat) << ',' << num(r.residual_norm) << ','
        << num(r.gamma_k) << ',' << (r.serious ? 1 : 0) << ',' << num(r.rho);
}

double ms_per_iteration(const AlmResult& r) {
    double total = 0.0;
    std::size_t count = 0;
    for (const auto& rec : r.records) {
        if (rec.k == 0) continue;
        total += rec.wall_ms;
        ++count;
    }
    return count == 0 ? 0.0 : total / static_cast<double>(count);
}

}  // namespace

void write_iteration_csv(std::ostream& out, const std::vector<IterationRecord>& records) {
    out << iteration_csv_header << '\n';
    for (const auto& r : records) {
        write_bounds(out, r);
        out << ',' << num(r.wall_ms) << '\n';
    }
}

void write_subgradient_csv(std::ostream& out, const std::vector<SubgradientRecord>& records) {
    out << subgradient_csv_header << '\n';
    for (const auto& r : records) {
        out << r.k << ',' << num(r.phi) << ',' << num(r.phi_best) << ',' << num(r.residual_norm) << ',' << num(r.step)
            << ',' << num(r.wall_ms) << '\n';
    }
}

std::string bound_columns(const std::vector<IterationRecord>& records) {
    std::ostringstream out;
    for (const auto& r : records) {
        write_bounds(out, r);
        out << '\n';
    }
    return out.str();
}

std::vector<SweepCell> ssc_sweep(const ProblemInstance& inst, const std::vector<double>& gammas,
                                 const std::vector<double>& rhos, std::size_t k_max, const AlmConfig& base,
                                 const std::string& out_dir) {
    if (gammas.empty() || rhos.empty()) throw Error(ErrorCode::invalid_argument, "sweep needs gamma and rho values");
    if (!out_dir.empty()) std::filesystem::create_directories(out_dir);
    std::vector<SweepCell> cells;
    auto run_cell = [&](double gamma, double rho, bool use_ssc) {
        AlmConfig cfg = base;
        cfg.rho0 = rho;
        cfg.rho_mode = RhoMode::fixed;
        cfg.k_max = k_max;
        cfg.use_ssc = use_ssc;
        if (use_ssc) cfg.gamma = gamma;
        SweepCell cell;
        cell.gamma = use_ssc ? gamma : std::numeric_limits<double>::quiet_NaN();
        cell.rho = rho;
        cell.use_ssc = use_ssc;
        cell.result = run_sdm_gs_alm(inst, cfg);
        if (!out_dir.empty()) {
            const std::string name = use_ssc ? "ssc_g" + tag(gamma) + "_r" + tag(rho) + ".csv" : "nossc_r" + tag(rho) + ".csv";
            cell.path = (std::filesystem::path(out_dir) / name).string();
            std::ofstream out(cell.path);
            if (!out) throw Error(ErrorCode::io_error, "cannot write " + cell.path);
            write_iteration_csv(out, cell.result.records);
        }
        cells.push_back(std::move(cell));
    };
    for (double rho : rhos) {
        for (double gamma : gammas) run_cell(gamma, rho, true);
        run_cell(0.0, rho, false);
    }
    return cells;
}

std::vector<SpeedupRow> speedup_harness(const ProblemInstance& inst, const AlmConfig& cfg,
                                        const std::vector<std::size_t>& thread_counts, std::size_t repeats) {
    if (repeats == 0) throw Error(ErrorCode::invalid_argument, "repeats must be at least 1");
    bool has_one = false;
    for (std::size_t n : thread_counts) has_one = has_one || n == 1;
    if (!has_one) throw Error(ErrorCode::invalid_argument, "thread counts must include 1");

    std::string reference;
    std::vector<SpeedupRow> rows;
    double t1 = std::numeric_limits<double>::infinity();
    std::vector<double> means;
    for (std::size_t n : thread_counts) {
        double sum = 0.0;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t rep = 0; rep < repeats; ++rep) {
            const AlmResult r = run_parallel(inst, cfg, n);
            const std::string bounds = bound_columns(r.records);
            if (reference.empty()) {
                reference = bounds;
            } else if (bounds != reference) {
                throw Error(ErrorCode::nondeterministic_trajectory,
                            "bound columns with " + std::to_string(n) + " threads differ from the first run");
            }
            const double t = ms_per_iteration(r);
            sum += t;
            best = std::min(best, t);
        }
        if (n == 1) t1 = std::min(t1, best);
        means.push_back(sum / static_cast<double>(repeats));
        rows.push_back({n, 0.0, 1.0});
    }
    for (std::size_t idx = 0; idx < rows.size(); ++idx) {
        rows[idx].ms_per_iteration = rows[idx].threads == 1 ? t1 : means[idx];
        rows[idx].speedup = rows[idx].ms_per_iteration > 0.0 ? t1 / rows[idx].ms_per_iteration : 1.0;
    }
    return rows;
}

void write_speedup_tsv(std::ostream& out, const std::vector<SpeedupRow>& rows) {
    out << "threads\tms_per_iter\tspeedup\n";
    for (const auto& r : rows) {
        char buf[96];
        std::snprintf(buf, sizeof buf, "%zu\t%.6f\t%.2f\n", r.threads, r.ms_per_iteration, r.speedup);
        out << buf;
    }
}

}  // namespace sdmgs
