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

#include "beamspace/array_core.hpp"
#include "beamspace/channel.hpp"
#include "beamspace/parallel.hpp"
#include "beamspace/receiver.hpp"
#include "beamspace/rng.hpp"
#include "beamspace/scheduling.hpp"
#include "beamspace/stochastic.hpp"
#include "beamspace/wideband.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <set>
#include <sstream>

namespace beamspace {

namespace {

using nlohmann::json;

constexpr const char* kToolVersion = "0.1.0";

const std::set<std::string>& allowed_keys()
{
    static const std::set<std::string> keys = {
        "experiment",  "n",          "zp",           "w",
        "guard_bins",  "delta",      "k_users",      "seed",
        "mc_samples",  "n_layouts",  "n_list",       "snr_grid_db",
        "carrier_hz",  "bandwidth_hz", "n_subcarriers", "noise_var",
        "dominant_margin_db", "paths_min", "paths_max", "paths_file",
        "out",         "format",     "threads",      "no_timestamp",
    };
    return keys;
}

template <typename T>
void read_key(const json& j, const char* key, T& into)
{
    const auto it = j.find(key);
    if (it == j.end())
        return;
    try {
        it->get_to(into);
    } catch (const json::exception&) {
        throw config_error(std::string("config key '") + key + "' has the wrong type");
    }
}

int resolve_threads(const ExperimentConfig& cfg)
{
    int t = cfg.threads;
    if (t == 0) {
        if (const char* env = std::getenv("BEAMSPACE_LAB_THREADS")) {
            char* end = nullptr;
            const long v = std::strtol(env, &end, 10);
            if (end != env && *end == '\0' && v > 0 && v < 1024)
                t = static_cast<int>(v);
        }
    }
    return resolve_thread_count(t);
}

std::string iso_timestamp()
{
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string cell_text(const json& v)
{
    if (v.is_null())
        return "";
    if (v.is_string())
        return v.get<std::string>();
    if (v.is_boolean())
        return v.get<bool>() ? "true" : "false";
    if (v.is_number_integer())
        return std::to_string(v.get<long long>());
    if (v.is_number_unsigned())
        return std::to_string(v.get<unsigned long long>());
    const double d = v.get<double>();
    if (!std::isfinite(d))
        return "";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", d);
    return buf;
}

// stores +inf as null so both renderers share one sentinel
json db_or_null(double linear)
{
    if (!std::isfinite(linear))
        return nullptr;
    return linear_to_db(linear);
}

bool uses_mc(const std::string& experiment)
{
    return experiment == "eigen-concentration" || experiment == "sir-margin" ||
           experiment == "scaling" || experiment == "sinr-table" ||
           experiment == "mf-scaling";
}

// ---------------------------------------------------------------- energy

ResultTable run_energy_capture(const ExperimentConfig& cfg)
{
    const ArrayConfig acfg(cfg.n, cfg.zp);
    ResultTable t;
    t.columns = {"n", "w", "zp", "delta", "capture", "bound"};
    for (int i = 0; i <= 100; ++i) {
        const double delta = 0.5 * i / 100.0;
        const double omega = kTwoPi * delta / cfg.n;
        json row;
        row["n"] = cfg.n;
        row["w"] = cfg.w;
        row["zp"] = cfg.zp;
        row["delta"] = delta;
        row["capture"] = energy_capture(omega, acfg, cfg.w);
        row["bound"] = capture_lower_bound(cfg.w, locate_on_grid(omega, acfg), cfg.zp);
        t.rows.push_back(std::move(row));
    }
    return t;
}

ResultTable run_noise_capture(const ExperimentConfig& cfg)
{
    ResultTable t;
    t.columns = {"n", "delta", "zp", "w", "eta"};
    for (int zp : {1, 2}) {
        const ArrayConfig acfg(cfg.n, zp);
        const double omega = kTwoPi * cfg.delta / cfg.n;
        for (int w = 1; w <= cfg.w; ++w) {
            json row;
            row["n"] = cfg.n;
            row["delta"] = cfg.delta;
            row["zp"] = zp;
            row["w"] = w;
            row["eta"] = noise_limited_capture(omega, acfg, w);
            t.rows.push_back(std::move(row));
        }
    }
    return t;
}

ResultTable run_cosine_sim(const ExperimentConfig& cfg)
{
    const ArrayConfig acfg(cfg.n, cfg.zp);
    const double omega1 = kTwoPi * cfg.delta / cfg.n;
    const BeamspaceWindow win = place_window(omega1, acfg, cfg.w);
    const CVecd u1 = normalized_signature(omega1, acfg, win);
    const double n1 = u1.norm();

    ResultTable t;
    t.columns = {"n", "w", "zp", "delta", "omega", "rho"};
    const int sweep = 1024;
    for (int i = 0; i < sweep; ++i) {
        const double omega = -kPi + kTwoPi * i / sweep;
        const CVecd u2 = normalized_signature(omega, acfg, win);
        const double n2 = u2.norm();
        json row;
        row["n"] = cfg.n;
        row["w"] = cfg.w;
        row["zp"] = cfg.zp;
        row["delta"] = cfg.delta;
        row["omega"] = omega;
        row["rho"] = (n2 < 1e-15) ? 0.0 : std::abs(u1.dot(u2)) / (n1 * n2);
        t.rows.push_back(std::move(row));
    }
    return t;
}

// ------------------------------------------------------------ stochastic

ResultTable run_eigen_concentration(const ExperimentConfig& cfg)
{
    const ArrayConfig acfg(cfg.n, cfg.zp);
    const double omega1 = kTwoPi * cfg.delta / cfg.n;
    const auto model = estimate_mean_interference(omega1, acfg, cfg.w, cfg.guard_bins, cfg.seed,
                                                  cfg.mc_samples, resolve_threads(cfg));
    const CVecd u1 = normalized_signature(omega1, acfg, model.window);
    const auto rep = eigen_report(model, u1);
    const double trace_db = linear_to_db(rep.eigenvalues.sum());

    ResultTable t;
    t.columns = {"n",   "w",          "zp",    "guard_bins",       "delta",
                 "mode", "eigenvalue", "share", "cumulative_share", "desired_projection",
                 "trace_db"};
    for (long i = 0; i < rep.eigenvalues.size(); ++i) {
        json row;
        row["n"] = cfg.n;
        row["w"] = cfg.w;
        row["zp"] = cfg.zp;
        row["guard_bins"] = cfg.guard_bins;
        row["delta"] = cfg.delta;
        row["mode"] = i + 1;
        row["eigenvalue"] = rep.eigenvalues(i);
        row["share"] = rep.shares(i);
        row["cumulative_share"] = rep.cumulative_shares(i);
        row["desired_projection"] = rep.desired_projections(i);
        row["trace_db"] = trace_db;
        t.rows.push_back(std::move(row));
    }
    return t;
}

ResultTable run_sir_margin(const ExperimentConfig& cfg)
{
    ResultTable t;
    t.columns = {"n", "w", "guard_bins", "zp", "delta", "trace_db", "margin_db"};
    const int threads = resolve_threads(cfg);
    for (int zp : {1, 2}) {
        const ArrayConfig acfg(cfg.n, zp);
        for (int i = 0; i <= 10; ++i) {
            const double delta = 0.05 * i;
            const double omega1 = kTwoPi * delta / cfg.n;
            // common random numbers across zp factors at each anchor
            const std::uint64_t sub = mix_seed(cfg.seed ^ mix_seed(static_cast<std::uint64_t>(i)));
            const auto model = estimate_mean_interference(omega1, acfg, cfg.w, cfg.guard_bins,
                                                          sub, cfg.mc_samples, threads);
            const CVecd u1 = normalized_signature(omega1, acfg, model.window);
            json row;
            row["n"] = cfg.n;
            row["w"] = cfg.w;
            row["guard_bins"] = cfg.guard_bins;
            row["zp"] = zp;
            row["delta"] = delta;
            row["trace_db"] = linear_to_db(model.m_i.trace().real());
            row["margin_db"] = linear_to_db(sir_margin(u1, model));
            t.rows.push_back(std::move(row));
        }
    }
    return t;
}

ResultTable run_scaling(const ExperimentConfig& cfg)
{
    const auto study = scaling_study(cfg.n_list, cfg.w, cfg.guard_bins, cfg.seed,
                                     cfg.mc_samples, cfg.n_layouts, resolve_threads(cfg));
    ResultTable t;
    t.columns = {"n",          "k_users",    "margin_db", "predicted_sinr_db",
                 "sim_min_db", "sim_mean_db", "slope"};
    for (const ScalingRow& r : study.rows) {
        json row;
        row["n"] = r.n_antennas;
        row["k_users"] = r.k_users;
        row["margin_db"] = r.margin_db;
        row["predicted_sinr_db"] = r.predicted_sinr_db;
        row["sim_min_db"] = r.sim_min_db;
        row["sim_mean_db"] = r.sim_mean_db;
        row["slope"] = study.slope;
        t.rows.push_back(std::move(row));
    }
    return t;
}

ResultTable run_sinr_table(const ExperimentConfig& cfg)
{
    const auto table = sinr_prediction_table(cfg.n, cfg.w, cfg.guard_bins, cfg.k_users,
                                             cfg.seed, cfg.mc_samples, cfg.n_layouts,
                                             resolve_threads(cfg));
    ResultTable t;
    t.columns = {"n",  "w",     "guard_bins",    "k_users",    "zp",
                 "label", "prediction_db", "sim_min_db", "sim_mean_db"};
    for (const SinrCaseResult& r : table) {
        json row;
        row["n"] = cfg.n;
        row["w"] = cfg.w;
        row["guard_bins"] = cfg.guard_bins;
        row["k_users"] = cfg.k_users;
        row["zp"] = r.zp_factor;
        row["label"] = r.label;
        row["prediction_db"] = r.prediction_db;
        row["sim_min_db"] = r.sim_min_db;
        row["sim_mean_db"] = r.sim_mean_db;
        t.rows.push_back(std::move(row));
    }
    return t;
}

ResultTable run_jensen_check(const ExperimentConfig& cfg)
{
    const int dim = 5, vectors = 5, ensemble = 32;
    const int ensembles = static_cast<int>(std::min<std::int64_t>(cfg.mc_samples, 1000000));
    const double viol =
        verify_operator_jensen(cfg.seed, dim, ensembles, vectors, ensemble,
                               resolve_threads(cfg));
    ResultTable t;
    t.columns = {"dim", "n_ensembles", "n_vectors", "ensemble_size", "max_rel_violation"};
    json row;
    row["dim"] = dim;
    row["n_ensembles"] = ensembles;
    row["n_vectors"] = vectors;
    row["ensemble_size"] = ensemble;
    row["max_rel_violation"] = viol;
    t.rows.push_back(std::move(row));
    return t;
}

ResultTable run_mf_scaling(const ExperimentConfig& cfg)
{
    ResultTable t;
    t.columns = {"n", "omega", "signal_energy", "mean_interference_energy",
                 "scaled_interference"};
    for (int n : cfg.n_list) {
        const ArrayConfig acfg(n, 1);
        Rng rng = derive_stream(cfg.seed, static_cast<std::uint64_t>(n));
        const double omega = cfg.delta * kTwoPi / n;
        const auto st = two_bin_mf_stats(omega, acfg, rng, cfg.mc_samples);
        json row;
        row["n"] = n;
        row["omega"] = omega;
        row["signal_energy"] = st.signal_energy;
        row["mean_interference_energy"] = st.mean_interference_energy;
        row["scaled_interference"] = n * st.mean_interference_energy;
        t.rows.push_back(std::move(row));
    }
    return t;
}

// --------------------------------------------------------------- wideband

ResultTable run_wideband_se(const ExperimentConfig& cfg)
{
    const ArrayConfig acfg(cfg.n, cfg.zp);
    const WidebandConfig wcfg(cfg.carrier_hz, cfg.bandwidth_hz, cfg.n_subcarriers,
                              cfg.noise_var);
    const int threads = resolve_threads(cfg);

    std::vector<UserChannel> users;
    if (!cfg.paths_file.empty()) {
        users = load_paths(cfg.paths_file);
    } else {
        Rng rng(cfg.seed);
        GuardPolicy policy;
        policy.guard_bins = cfg.guard_bins;
        policy.reference = GuardPolicy::Reference::lowest_frequency;
        policy.fractional_bandwidth = wcfg.fractional_bandwidth();
        const auto omegas = sample_user_frequencies(rng, cfg.k_users, acfg, policy);
        SynthOptions opt;
        opt.paths_min = cfg.paths_min;
        opt.paths_max = cfg.paths_max;
        opt.dominant_margin_db = cfg.dominant_margin_db;
        opt.fov_rad = field_of_view_bound(wcfg.bandwidth_hz, wcfg.carrier_hz);
        users = synth_multipath_at(rng, omegas, opt);
    }
    const auto solo = strip_to_dominant(users);

    const auto un = unconstrained_se(users, acfg, wcfg, cfg.snr_grid_db, threads);
    const auto fa = full_array_lmmse_se(users, acfg, wcfg, cfg.snr_grid_db, threads);
    const auto bs = beamspace_lmmse_se(users, acfg, wcfg, cfg.w, cfg.snr_grid_db, true,
                                       threads);
    const auto fa_dom = full_array_lmmse_se(solo, acfg, wcfg, cfg.snr_grid_db, threads);
    const auto bs_dom = beamspace_lmmse_se(solo, acfg, wcfg, cfg.w, cfg.snr_grid_db, true,
                                           threads);

    ResultTable t;
    t.columns = {"snr_db",          "se_unconstrained",     "se_full", "se_beamspace",
                 "se_full_dominant", "se_beamspace_dominant", "user_idx", "subcarrier",
                 "sir_db"};
    for (std::size_t s = 0; s < cfg.snr_grid_db.size(); ++s) {
        json row;
        row["snr_db"] = cfg.snr_grid_db[s];
        row["se_unconstrained"] = un[s];
        row["se_full"] = fa[s];
        row["se_beamspace"] = bs.se[s];
        row["se_full_dominant"] = fa_dom[s];
        row["se_beamspace_dominant"] = bs_dom.se[s];
        t.rows.push_back(std::move(row));
    }
    for (std::size_t k = 0; k < bs.sir_traces.size(); ++k) {
        for (std::size_t m = 0; m < bs.sir_traces[k].size(); ++m) {
            json row;
            row["user_idx"] = static_cast<int>(k);
            row["subcarrier"] = static_cast<int>(m);
            row["sir_db"] = db_or_null(bs.sir_traces[k][m]);
            t.rows.push_back(std::move(row));
        }
    }
    return t;
}

} // namespace

const std::vector<std::string>& experiment_names()
{
    static const std::vector<std::string> names = {
        "energy-capture", "noise-capture", "cosine-sim",  "eigen-concentration",
        "sir-margin",     "scaling",       "sinr-table",  "wideband-se",
        "jensen-check",   "mf-scaling",
    };
    return names;
}

void apply_json_file(ExperimentConfig& cfg, const std::filesystem::path& file)
{
    std::ifstream in(file);
    if (!in)
        throw config_error("cannot open config file: " + file.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw config_error("config file " + file.string() + ": " + e.what());
    }
    if (!j.is_object())
        throw config_error("config file " + file.string() + ": expected a JSON object");
    for (const auto& item : j.items()) {
        if (allowed_keys().find(item.key()) == allowed_keys().end())
            throw config_error("config file " + file.string() + ": unknown key '" +
                               item.key() + "'");
    }

    read_key(j, "experiment", cfg.experiment);
    read_key(j, "n", cfg.n);
    read_key(j, "zp", cfg.zp);
    read_key(j, "w", cfg.w);
    read_key(j, "guard_bins", cfg.guard_bins);
    read_key(j, "delta", cfg.delta);
    read_key(j, "k_users", cfg.k_users);
    read_key(j, "seed", cfg.seed);
    read_key(j, "mc_samples", cfg.mc_samples);
    read_key(j, "n_layouts", cfg.n_layouts);
    read_key(j, "n_list", cfg.n_list);
    read_key(j, "snr_grid_db", cfg.snr_grid_db);
    read_key(j, "carrier_hz", cfg.carrier_hz);
    read_key(j, "bandwidth_hz", cfg.bandwidth_hz);
    read_key(j, "n_subcarriers", cfg.n_subcarriers);
    read_key(j, "noise_var", cfg.noise_var);
    read_key(j, "dominant_margin_db", cfg.dominant_margin_db);
    read_key(j, "paths_min", cfg.paths_min);
    read_key(j, "paths_max", cfg.paths_max);
    read_key(j, "paths_file", cfg.paths_file);
    read_key(j, "out", cfg.out);
    read_key(j, "format", cfg.format);
    read_key(j, "threads", cfg.threads);
    read_key(j, "no_timestamp", cfg.no_timestamp);
}

std::vector<std::string> validate(const ExperimentConfig& cfg)
{
    std::vector<std::string> out;
    const auto& names = experiment_names();
    const bool known = std::find(names.begin(), names.end(), cfg.experiment) != names.end();
    if (cfg.experiment.empty())
        out.push_back("missing experiment name");
    else if (!known)
        out.push_back("unknown experiment '" + cfg.experiment + "'");

    if (cfg.zp != 1 && cfg.zp != 2)
        out.push_back("unsupported zero-pad factor " + std::to_string(cfg.zp));
    if (cfg.n < 2 || cfg.n % 2 != 0)
        out.push_back("array size must be an even number of at least 2");
    const bool array_ok = (cfg.zp == 1 || cfg.zp == 2) && cfg.n >= 2 && cfg.n % 2 == 0;
    if (array_ok && (cfg.w < 1 || cfg.w > cfg.n * cfg.zp))
        out.push_back("window width must be between 1 and the padded grid size");
    if (cfg.guard_bins < 0.0)
        out.push_back("guard must be nonnegative");
    if (cfg.delta < 0.0 || cfg.delta > 1.0)
        out.push_back("delta must lie in [0, 1]");
    if (cfg.format != "csv" && cfg.format != "json")
        out.push_back("format must be csv or json");
    if (cfg.threads < 0)
        out.push_back("threads must be nonnegative");
    if (!known)
        return out;

    if (uses_mc(cfg.experiment) && cfg.mc_samples < 1000)
        out.push_back("mc_samples must be at least 1000");
    if (cfg.experiment == "jensen-check" && cfg.mc_samples < 1)
        out.push_back("mc_samples must be positive");
    if ((cfg.experiment == "scaling" || cfg.experiment == "sinr-table") && cfg.n_layouts < 1)
        out.push_back("n_layouts must be positive");

    if (cfg.experiment == "scaling" || cfg.experiment == "mf-scaling") {
        if (cfg.n_list.size() < (cfg.experiment == "scaling" ? 2u : 1u))
            out.push_back("n_list needs more entries for this experiment");
        for (int n : cfg.n_list)
            if (n < 4 || n % 2 != 0)
                out.push_back("n_list entries must be even and at least 4");
    }

    if (array_ok && cfg.experiment == "scaling" && cfg.guard_bins >= 0.0) {
        for (int n : cfg.n_list) {
            if (n < 4 || n % 2 != 0)
                continue;
            GuardPolicy policy;
            policy.guard_bins = cfg.guard_bins;
            const int k = std::max(2, n / 2 - 3);
            const int cap = max_users_for_guard(ArrayConfig(n, 1), policy);
            if (k > cap)
                out.push_back("infeasible guard for n=" + std::to_string(n) + ": needs " +
                              std::to_string(k) + " users but at most " + std::to_string(cap) +
                              " fit");
        }
    }
    if (array_ok && cfg.experiment == "sinr-table") {
        if (cfg.k_users < 3) {
            out.push_back("k_users must be at least 3");
        } else if (cfg.guard_bins >= 0.0) {
            GuardPolicy policy;
            policy.guard_bins = cfg.guard_bins;
            const int cap = max_users_for_guard(ArrayConfig(cfg.n, cfg.zp), policy);
            if (cfg.k_users > cap)
                out.push_back("infeasible guard: at most " + std::to_string(cap) +
                              " users fit, got " + std::to_string(cfg.k_users));
        }
    }
    if (cfg.experiment == "wideband-se") {
        if (cfg.carrier_hz <= 0.0)
            out.push_back("carrier frequency must be positive");
        else if (cfg.bandwidth_hz < 0.0 || cfg.bandwidth_hz >= 2.0 * cfg.carrier_hz)
            out.push_back("bandwidth must lie in [0, 2*carrier)");
        if (cfg.n_subcarriers < 1)
            out.push_back("n_subcarriers must be positive");
        if (cfg.noise_var <= 0.0)
            out.push_back("noise_var must be positive");
        if (cfg.snr_grid_db.empty())
            out.push_back("snr_grid_db must not be empty");
        if (cfg.paths_min < 1 || cfg.paths_max < cfg.paths_min)
            out.push_back("need 1 <= paths_min <= paths_max");
        if (cfg.dominant_margin_db < 0.0)
            out.push_back("dominant_margin_db must be nonnegative");
        if (!cfg.paths_file.empty()) {
            std::error_code ec;
            if (!std::filesystem::exists(cfg.paths_file, ec))
                out.push_back("paths_file does not exist: " + cfg.paths_file);
        } else if (array_ok && cfg.k_users >= 1 && cfg.carrier_hz > 0.0 &&
                   cfg.bandwidth_hz >= 0.0 && cfg.bandwidth_hz < 2.0 * cfg.carrier_hz &&
                   cfg.guard_bins >= 0.0) {
            GuardPolicy policy;
            policy.guard_bins = cfg.guard_bins;
            policy.reference = GuardPolicy::Reference::lowest_frequency;
            policy.fractional_bandwidth = cfg.bandwidth_hz / cfg.carrier_hz;
            const int cap = max_users_for_guard(ArrayConfig(cfg.n, cfg.zp), policy);
            if (cfg.k_users > cap)
                out.push_back("infeasible guard: at most " + std::to_string(cap) +
                              " users fit, got " + std::to_string(cfg.k_users));
        }
        if (cfg.k_users < 1)
            out.push_back("k_users must be positive");
    }
    return out;
}

ResultTable run_experiment(const ExperimentConfig& cfg)
{
    const auto problems = validate(cfg);
    if (!problems.empty()) {
        std::string joined;
        bool infeasible = false;
        for (const auto& p : problems) {
            if (!joined.empty())
                joined += "; ";
            joined += p;
            if (p.find("infeasible") != std::string::npos)
                infeasible = true;
        }
        if (infeasible)
            throw infeasible_error(joined);
        throw config_error(joined);
    }

    if (cfg.experiment == "energy-capture")
        return run_energy_capture(cfg);
    if (cfg.experiment == "noise-capture")
        return run_noise_capture(cfg);
    if (cfg.experiment == "cosine-sim")
        return run_cosine_sim(cfg);
    if (cfg.experiment == "eigen-concentration")
        return run_eigen_concentration(cfg);
    if (cfg.experiment == "sir-margin")
        return run_sir_margin(cfg);
    if (cfg.experiment == "scaling")
        return run_scaling(cfg);
    if (cfg.experiment == "sinr-table")
        return run_sinr_table(cfg);
    if (cfg.experiment == "wideband-se")
        return run_wideband_se(cfg);
    if (cfg.experiment == "jensen-check")
        return run_jensen_check(cfg);
    return run_mf_scaling(cfg);
}

std::string render_csv(const ExperimentConfig& cfg, const ResultTable& table)
{
    std::string out;
    if (!cfg.no_timestamp)
        out += "# generated " + iso_timestamp() + "\n";
    out += "experiment";
    for (const auto& c : table.columns)
        out += "," + c;
    out += ",seed,version\n";
    for (const json& row : table.rows) {
        out += cfg.experiment;
        for (const auto& c : table.columns) {
            out += ',';
            const auto it = row.find(c);
            if (it != row.end())
                out += cell_text(*it);
        }
        out += "," + std::to_string(cfg.seed) + "," + kToolVersion + "\n";
    }
    return out;
}

std::string render_json(const ExperimentConfig& cfg, const ResultTable& table)
{
    json doc;
    doc["experiment"] = cfg.experiment;
    doc["version"] = kToolVersion;
    doc["seed"] = cfg.seed;
    if (!cfg.no_timestamp)
        doc["generated"] = iso_timestamp();
    doc["columns"] = table.columns;
    json rows = json::array();
    for (const json& row : table.rows)
        rows.push_back(row);
    doc["rows"] = std::move(rows);
    return doc.dump(2) + "\n";
}

void write_output(const ExperimentConfig& cfg, const ResultTable& table)
{
    const std::string text =
        cfg.format == "json" ? render_json(cfg, table) : render_csv(cfg, table);
    if (cfg.out.empty()) {
        std::fwrite(text.data(), 1, text.size(), stdout);
        return;
    }
    std::ofstream f(cfg.out, std::ios::binary);
    if (!f)
        throw config_error("cannot open output file: " + cfg.out);
    f.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!f)
        throw config_error("failed writing output file: " + cfg.out);
}

std::filesystem::path find_preset(const std::string& name, const char* argv0)
{
    namespace fs = std::filesystem;
    std::string fname = name;
    if (fname.size() < 5 || fname.substr(fname.size() - 5) != ".json")
        fname += ".json";

    std::vector<fs::path> dirs;
    if (const char* env = std::getenv("BEAMSPACE_LAB_PRESETS"))
        dirs.emplace_back(env);
    dirs.emplace_back("presets");
    if (argv0 != nullptr && argv0[0] != '\0') {
        std::error_code ec;
        const fs::path exe = fs::weakly_canonical(argv0, ec);
        if (!ec && exe.has_parent_path()) {
            const fs::path d = exe.parent_path();
            dirs.push_back(d / "presets");
            dirs.push_back(d.parent_path() / "presets");
            dirs.push_back(d.parent_path().parent_path() / "presets");
        }
    }
    for (const fs::path& d : dirs) {
        std::error_code ec;
        const fs::path candidate = d / fname;
        if (fs::exists(candidate, ec))
            return candidate;
    }
    throw config_error("preset '" + name +
                       "' not found (searched $BEAMSPACE_LAB_PRESETS, ./presets, and next to "
                       "the executable)");
}

} // namespace beamspace
