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
//
// Declarative experiment runner: a flat configuration mirrored by the CLI
// flags and by JSON config files, named experiments producing stable row
// schemas, and CSV/JSON renderers with deterministic formatting.

#ifndef BEAMSPACE_EXPERIMENTS_HPP
#define BEAMSPACE_EXPERIMENTS_HPP

#include "beamspace/types.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace beamspace {

// Every knob of every experiment, flat. JSON config files use exactly these
// field names; unknown keys are rejected.
struct ExperimentConfig {
    std::string experiment;

    int n = 128;
    int zp = 1;
    int w = 5;
    double guard_bins = 2.0;
    double delta = 0.25; // anchor offset inside a DFT bin, in bins
    int k_users = 61;

    std::uint64_t seed = 12345;
    std::int64_t mc_samples = 200000;
    int n_layouts = 30;
    std::vector<int> n_list = {32, 64, 128, 256};
    std::vector<double> snr_grid_db = {10, 15, 20, 25, 30, 35, 40};

    double carrier_hz = 28.5e9;
    double bandwidth_hz = 5.7e9;
    int n_subcarriers = 64;
    double noise_var = 1.0;
    double dominant_margin_db = 18.0;
    int paths_min = 24;
    int paths_max = 36;
    std::string paths_file;

    std::string out;            // empty writes to stdout
    std::string format = "csv"; // or "json"
    int threads = 0;            // 0: BEAMSPACE_LAB_THREADS, then hardware
    bool no_timestamp = false;
};

// Experiment names accepted by run_experiment, in a stable order.
const std::vector<std::string>& experiment_names();

// Merges the flat JSON object at `file` into `cfg`. Unknown keys, type
// mismatches, and unreadable files raise config_error.
void apply_json_file(ExperimentConfig& cfg, const std::filesystem::path& file);

// Pure validation: empty result iff the config can run. Feasibility problems
// mention the achievable user count.
std::vector<std::string> validate(const ExperimentConfig& cfg);

// One table per run: a fixed column list and one JSON object per row.
// Missing keys render as blanks in CSV; +infinity is stored as null.
struct ResultTable {
    std::vector<std::string> columns;
    std::vector<nlohmann::json> rows;
};

// Runs the named experiment. Throws config_error for bad configs,
// infeasible_error when no schedule fits, numerical_error on solver failure.
ResultTable run_experiment(const ExperimentConfig& cfg);

// Renderers. CSV begins with "# generated <ISO8601>" unless no_timestamp;
// fields use '.' decimals, '\n' newlines, and blanks for absent/null values.
std::string render_csv(const ExperimentConfig& cfg, const ResultTable& table);
std::string render_json(const ExperimentConfig& cfg, const ResultTable& table);

// Renders per cfg.format and writes to cfg.out or stdout.
void write_output(const ExperimentConfig& cfg, const ResultTable& table);

// Resolves a preset name ("table1" or "table1.json") against
// $BEAMSPACE_LAB_PRESETS, ./presets/, and the executable's neighborhood.
// Throws config_error when nothing matches.
std::filesystem::path find_preset(const std::string& name, const char* argv0);

} // namespace beamspace

#endif
