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

// Command line front end. Talks to the library only through the C API.
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sdmgs/sdmgs.h"

namespace {

struct Options {
    std::string mode = "sdmgsalm";
    std::string instance;
    std::string out = "-";
    bool oracle = false;

    double rho0 = 1.0;
    double gamma = 0.1;
    double eps = 1e-6;
    std::size_t t_max = 1;
    std::size_t k_max = 100;
    std::size_t threads = 1;
    std::string rho_update = "fixed";
    std::size_t rho_freeze = 0;
    bool no_ssc = false;
    std::size_t hull_cap = 0;

    double s0 = 1.0;

    std::uint64_t seed = 1;
    std::size_t blocks = 8;
    std::size_t vars = 4;
    double density = 0.5;
    bool quadratic = false;

    std::vector<double> gammas{0.125, 0.5};
    std::vector<double> rhos{50.0, 100.0};
    std::vector<std::size_t> thread_list{1, 2, 4, 8};
    std::size_t repeats = 5;
};

class Failure {
public:
    explicit Failure(sdmgs_status s) : status(s) {}
    sdmgs_status status;
};

void check(sdmgs_status s) {
    if (s != SDMGS_OK) throw Failure(s);
}

// Frees the handle on scope exit.
template <class T, void (*Free)(T*)>
struct Handle {
    T* ptr = nullptr;
    Handle() = default;
    Handle(const Handle&) = delete;
    Handle& operator=(const Handle&) = delete;
    ~Handle() { Free(ptr); }
};

using Instance = Handle<sdmgs_instance, sdmgs_instance_free>;
using Run = Handle<sdmgs_run, sdmgs_run_free>;

sdmgs_alm_config make_config(const Options& o) {
    sdmgs_alm_config c;
    sdmgs_alm_config_default(&c);
    c.rho0 = o.rho0;
    c.gamma = o.gamma;
    c.eps = o.eps;
    c.t_max = o.t_max;
    c.k_max = o.k_max;
    c.rho_kiwiel = o.rho_update == "kiwiel";
    if (o.rho_freeze > 0) c.rho_freeze = o.rho_freeze;
    c.use_ssc = !o.no_ssc;
    c.hull_cap = o.hull_cap;
    c.threads = o.threads;
    return c;
}

void load(const Options& o, Instance& inst) {
    if (!o.instance.empty()) {
        check(sdmgs_instance_load(o.instance.c_str(), &inst.ptr));
    } else {
        check(sdmgs_instance_generate(o.seed, o.blocks, o.vars, o.density, o.quadratic, &inst.ptr));
    }
}

nlohmann::json oracle_json(const sdmgs_instance* inst) {
    sdmgs_oracle_result r;
    check(sdmgs_oracle(inst, &r));
    return {{"zeta_star", r.zeta_star}, {"zeta_ld", r.zeta_ld}, {"zeta_cld", r.zeta_cld}};
}

// Summaries go to stdout unless stdout already carries the CSV.
void emit_summary(const Options& o, const nlohmann::json& j) {
    std::FILE* sink = o.out == "-" ? stderr : stdout;
    std::fprintf(sink, "%s\n", j.dump().c_str());
}

nlohmann::json number(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

int run_mode(const Options& o) {
    if (o.mode == "generate") {
        Instance inst;
        check(sdmgs_instance_generate(o.seed, o.blocks, o.vars, o.density, o.quadratic, &inst.ptr));
        check(sdmgs_instance_save(inst.ptr, o.out.c_str()));
        return 0;
    }

    Instance inst;
    load(o, inst);
    const sdmgs_alm_config cfg = make_config(o);

    if (o.mode == "sdmgsalm" || o.mode == "subgradient") {
        Run run;
        if (o.mode == "sdmgsalm") {
            check(sdmgs_run_alm(inst.ptr, &cfg, &run.ptr));
        } else {
            check(sdmgs_run_subgradient(inst.ptr, o.s0, o.k_max, &run.ptr));
        }
        check(sdmgs_run_write_csv(run.ptr, o.out.c_str()));
        double lower = 0.0;
        double upper = 0.0;
        check(sdmgs_run_final_bounds(run.ptr, &lower, &upper));
        nlohmann::json summary{{"mode", o.mode},
                               {"iterations", sdmgs_run_record_count(run.ptr)},
                               {"lower_bound", number(lower)}};
        if (sdmgs_run_is_alm(run.ptr)) {
            summary["phi_hat"] = number(upper);
            summary["converged"] = sdmgs_run_converged(run.ptr) == 1;
        }
        if (o.oracle) summary["oracle"] = oracle_json(inst.ptr);
        emit_summary(o, summary);
        return 0;
    }
    if (o.mode == "oracle") {
        const std::string text = oracle_json(inst.ptr).dump(1) + "\n";
        if (o.out == "-") {
            std::fputs(text.c_str(), stdout);
        } else {
            std::FILE* f = std::fopen(o.out.c_str(), "w");
            if (!f) {
                std::fprintf(stderr, "error: cannot open %s\n", o.out.c_str());
                return 1;
            }
            std::fputs(text.c_str(), f);
            std::fclose(f);
        }
        return 0;
    }
    if (o.mode == "ssc-sweep") {
        if (o.out == "-") {
            std::fprintf(stderr, "error: ssc-sweep needs --out <directory>\n");
            return 2;
        }
        std::size_t cells = 0;
        check(sdmgs_ssc_sweep(inst.ptr, o.gammas.data(), o.gammas.size(), o.rhos.data(), o.rhos.size(), o.k_max, &cfg,
                              o.out.c_str(), &cells));
        std::printf("%zu\n", cells);
        return 0;
    }
    if (o.mode == "speedup-harness") {
        std::vector<sdmgs_speedup_row> rows(o.thread_list.size());
        check(sdmgs_speedup(inst.ptr, &cfg, o.thread_list.data(), o.thread_list.size(), o.repeats, rows.data()));
        check(sdmgs_speedup_write_tsv(rows.data(), rows.size(), o.out.c_str()));
        return 0;
    }
    std::fprintf(stderr, "error: unknown mode %s\n", o.mode.c_str());
    return 2;
}

}  // namespace

int main(int argc, char** argv) {
    Options o;
    CLI::App app{"SDM-GS augmented Lagrangian dual bounds for block-structured MIPs"};
    app.set_version_flag("--version", std::string(sdmgs_version()));

    app.add_option("--mode", o.mode, "What to run")
        ->check(CLI::IsMember({"sdmgsalm", "subgradient", "oracle", "speedup-harness", "ssc-sweep", "generate"}))
        ->capture_default_str();
    app.add_option("--instance", o.instance, "JSON instance; without it the generator flags are used")
        ->check(CLI::ExistingFile);
    app.add_option("--out", o.out, "Output file, or directory for ssc-sweep; '-' is stdout")->capture_default_str();
    app.add_flag("--oracle", o.oracle, "Print exact oracle bounds next to the final bounds");

    app.add_option("--rho0", o.rho0, "Initial penalty")->check(CLI::PositiveNumber)->capture_default_str();
    app.add_option("--gamma", o.gamma, "Serious step threshold in (0,1)")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    app.add_option("--eps", o.eps, "Termination tolerance")->check(CLI::NonNegativeNumber)->capture_default_str();
    app.add_option("--tmax", o.t_max, "Gauss-Seidel sweeps per call")->check(CLI::PositiveNumber)->capture_default_str();
    app.add_option("--kmax", o.k_max, "Outer iteration limit")->check(CLI::PositiveNumber)->capture_default_str();
    app.add_option("--threads", o.threads, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
    app.add_option("--rho-update", o.rho_update, "Penalty rule")
        ->check(CLI::IsMember({"fixed", "kiwiel"}))
        ->capture_default_str();
    app.add_option("--rho-freeze", o.rho_freeze, "Stop updating rho after this many serious steps (0 = never)");
    app.add_flag("--no-ssc", o.no_ssc, "Take the dual step on every iteration");
    app.add_option("--hull-cap", o.hull_cap, "Vertex cap per block (0 = none)");
    app.add_option("--s0", o.s0, "Subgradient step scale")->check(CLI::NonNegativeNumber)->capture_default_str();

    app.add_option("--seed", o.seed, "Generator seed")->capture_default_str();
    app.add_option("--blocks", o.blocks, "Generator block count")->check(CLI::PositiveNumber)->capture_default_str();
    app.add_option("--vars", o.vars, "Generator binaries per block")->check(CLI::PositiveNumber)->capture_default_str();
    app.add_option("--density", o.density, "Generator knapsack density")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    app.add_flag("--quadratic", o.quadratic, "Generator adds diagonal quadratic costs");

    app.add_option("--gamma-list", o.gammas, "ssc-sweep thresholds")->delimiter(',')->capture_default_str();
    app.add_option("--rho-list", o.rhos, "ssc-sweep penalties")->delimiter(',')->capture_default_str();
    app.add_option("--thread-list", o.thread_list, "speedup-harness thread counts")
        ->delimiter(',')
        ->capture_default_str();
    app.add_option("--repeats", o.repeats, "speedup-harness repeats")->check(CLI::PositiveNumber)->capture_default_str();

    CLI11_PARSE(app, argc, argv);
    if (o.gamma <= 0.0 || o.gamma >= 1.0) {
        std::fprintf(stderr, "error: --gamma must lie strictly between 0 and 1\n");
        return 2;
    }

    try {
        return run_mode(o);
    } catch (const Failure& f) {
        std::fprintf(stderr, "error: %s\n", sdmgs_last_error());
        return 1;
    }
}
