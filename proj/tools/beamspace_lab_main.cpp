// SPDX-License-Identifier: Apache-2.0
//
// beamspace-lab: beamspace dimension reduction analysis for massive MU-MIMO
// Copyright (C) 2026 the beamspace-lab authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "beamspace/experiments.hpp"
#include "beamspace/types.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <string>

namespace {

std::string experiment_list()
{
    std::string out;
    for (const auto& name : beamspace::experiment_names()) {
        if (!out.empty())
            out += ", ";
        out += name;
    }
    return out;
}

} // namespace

int main(int argc, char** argv)
{
    using beamspace::ExperimentConfig;

    // Pass 1: pull out --preset/--config so file values load before flag
    // binding; remaining flags then override whatever the files set.
    std::string preset_name;
    std::string config_file;
    {
        CLI::App pre;
        pre.allow_extras();
        pre.set_help_flag();
        pre.set_help_all_flag();
        pre.add_option("--preset", preset_name);
        pre.add_option("--config", config_file);
        try {
            pre.parse(argc, argv);
        } catch (const CLI::ParseError&) {
            // pass 2 reports the real diagnostic
        }
    }

    ExperimentConfig cfg;
    try {
        if (!preset_name.empty())
            beamspace::apply_json_file(cfg, beamspace::find_preset(preset_name, argv[0]));
        if (!config_file.empty())
            beamspace::apply_json_file(cfg, config_file);
    } catch (const beamspace::config_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }

    CLI::App app{"beamspace dimension reduction experiment runner"};
    app.add_option("experiment", cfg.experiment, "one of: " + experiment_list());
    std::string sink;
    app.add_option("--preset", sink, "named preset config shipped under presets/");
    app.add_option("--config", sink, "flat JSON config file; flags override its values");
    app.add_option("--n", cfg.n, "number of antennas");
    app.add_option("--zp", cfg.zp, "zero-pad factor (1 or 2)");
    app.add_option("--w", cfg.w, "window width in fine-grid bins");
    app.add_option("--guard,--guard-bins", cfg.guard_bins, "guard spacing in coarse bins");
    app.add_option("--delta", cfg.delta, "desired-user offset in bins");
    app.add_option("--k,--k-users", cfg.k_users, "number of users");
    app.add_option("--seed", cfg.seed, "64-bit RNG seed");
    app.add_option("--mc,--mc-samples", cfg.mc_samples, "Monte-Carlo sample count");
    app.add_option("--layouts,--n-layouts", cfg.n_layouts, "user layouts per simulation");
    app.add_option("--n-list", cfg.n_list, "array sizes for scaling experiments")
        ->delimiter(',');
    app.add_option("--snr-grid-db", cfg.snr_grid_db, "SNR grid in dB")->delimiter(',');
    app.add_option("--carrier-hz", cfg.carrier_hz, "carrier frequency in Hz");
    app.add_option("--bandwidth-hz", cfg.bandwidth_hz, "total bandwidth in Hz");
    app.add_option("--subcarriers,--n-subcarriers", cfg.n_subcarriers, "subcarrier count");
    app.add_option("--noise-var", cfg.noise_var, "receiver noise variance");
    app.add_option("--dominant-margin-db", cfg.dominant_margin_db,
                   "dominant path power margin in dB");
    app.add_option("--paths-min", cfg.paths_min, "minimum paths per user");
    app.add_option("--paths-max", cfg.paths_max, "maximum paths per user");
    app.add_option("--paths-file", cfg.paths_file, "load user channels from this file");
    app.add_option("--out", cfg.out, "output path (default stdout)");
    app.add_option("--format", cfg.format, "output format: csv or json");
    app.add_option("--threads", cfg.threads,
                   "worker threads (0 = $BEAMSPACE_LAB_THREADS or all cores)");
    app.add_flag("--no-timestamp", cfg.no_timestamp, "omit the generated-at header");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        const beamspace::ResultTable table = beamspace::run_experiment(cfg);
        beamspace::write_output(cfg, table);
    } catch (const beamspace::config_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const beamspace::infeasible_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const beamspace::numerical_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 4;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
