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
// Multipath uplink channels: per-path records, frequency-dependent spatial
// frequencies (beam squint), a CSV loader/saver, and a synthetic generator.

#ifndef BEAMSPACE_CHANNEL_HPP
#define BEAMSPACE_CHANNEL_HPP

#include "beamspace/array_core.hpp"
#include "beamspace/rng.hpp"
#include "beamspace/types.hpp"

#include <complex>
#include <filesystem>
#include <vector>

namespace beamspace {

// One propagation path. The angle of arrival is measured from broadside;
// gain may be zero (the path then contributes nothing).
struct PathRecord {
    std::complex<double> gain{0.0, 0.0};
    double delay_s = 0.0;
    double aoa_rad = 0.0;

    // Spatial frequency at the carrier: pi * sin(aoa).
    double omega_ref() const { return spatial_frequency_from_aoa(aoa_rad); }
};

struct UserChannel {
    int user_id = 0;
    std::vector<PathRecord> paths;

    // Strongest path; ties resolve to the lowest index.
    int dominant_index() const;
    const PathRecord& dominant() const { return paths.at(dominant_index()); }
};

// Carrier/bandwidth layout shared by every frequency-dependent computation.
// noise_var is the total per-antenna noise variance (both quadratures).
struct WidebandConfig {
    double carrier_hz = 0.0;
    double bandwidth_hz = 0.0;
    int n_subcarriers = 1;
    double noise_var = 1.0;

    WidebandConfig(double carrier, double bandwidth, int subcarriers, double noise);

    double fractional_bandwidth() const { return bandwidth_hz / carrier_hz; }

    // Midpoint-rule baseband offset of subcarrier m, in [-B/2, B/2].
    double subcarrier_hz(int m) const
    {
        return -0.5 * bandwidth_hz + bandwidth_hz * (m + 0.5) / n_subcarriers;
    }
};

// Beam squint: a path at reference spatial frequency omega_ref appears at
// omega_ref * (1 + f / carrier) when observed at baseband offset f.
inline double spatial_frequency_at(double omega_ref, double f_hz, double carrier_hz)
{
    return wrap_to_pi(omega_ref * (1.0 + f_hz / carrier_hz));
}

// Array-domain channel of one user at baseband offset f_hz:
// sum over paths of gain * a(omega(f)) * exp(-j 2 pi (carrier + f) delay).
CVecd channel_at(const UserChannel& user, double f_hz, const ArrayConfig& cfg,
                 const WidebandConfig& wcfg);

// CSV path files: header "user_id,path_id,gain_db,phase_rad,delay_ns,aoa_deg"
// followed by one row per path. Users are returned sorted by id, paths by
// path_id. Parse errors name the offending line.
std::vector<UserChannel> load_paths(const std::filesystem::path& file);
void save_paths(const std::filesystem::path& file, const std::vector<UserChannel>& users);

struct SynthOptions {
    int paths_min = 24;
    int paths_max = 36;
    // Secondary path magnitudes are log-uniform between dominant_margin_db
    // and 40 dB below the dominant path; +inf margin produces zero-gain
    // secondaries.
    double dominant_margin_db = 18.0;
    double delay_spread_s = 100e-9;
    double fov_rad = 0.5 * kPi; // angles of arrival stay inside (-fov, fov)
};

// Synthetic multipath users with uniformly drawn dominant angles.
std::vector<UserChannel> synth_multipath(Rng& rng, int n_users, const SynthOptions& opt);

// Same, with the dominant reference spatial frequencies prescribed (one user
// per entry); secondaries are drawn as in synth_multipath.
std::vector<UserChannel> synth_multipath_at(Rng& rng, const std::vector<double>& dominant_omegas,
                                            const SynthOptions& opt);

// Rescales each user so the dominant path alone would reach the target
// beamformed SNR: |gain|^2 * n_antennas / noise_var = 10^(target_db/10).
void normalize_dominant_snr(std::vector<UserChannel>& users, double target_snr_db,
                            const ArrayConfig& cfg, double noise_var);

} // namespace beamspace

#endif
