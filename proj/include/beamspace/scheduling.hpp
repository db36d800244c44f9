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
// User placement with pairwise guard spacing in the spatial-frequency
// domain, plus field-of-view checks for wideband operation.

#ifndef BEAMSPACE_SCHEDULING_HPP
#define BEAMSPACE_SCHEDULING_HPP

#include "beamspace/channel.hpp"
#include "beamspace/rng.hpp"
#include "beamspace/types.hpp"

#include <vector>

namespace beamspace {

// Pairwise spacing policy. guard_bins is measured in bins of the base
// N-point grid (arc 2 pi / N each). With Reference::narrowband the guard is
// enforced on the full circle at the carrier; with Reference::lowest_frequency
// it is enforced at baseband offset -B/2, where beam squint compresses
// spacings by (1 - fractional_bandwidth / 2), and users are confined to the
// squint-safe field of view.
struct GuardPolicy {
    enum class Reference { narrowband, lowest_frequency };

    double guard_bins = 0.0;
    Reference reference = Reference::narrowband;
    double fractional_bandwidth = 0.0;
};

// Largest user count the policy can place on the given array.
int max_users_for_guard(const ArrayConfig& cfg, const GuardPolicy& policy);

// Draws k_users spatial frequencies uniformly from the set of configurations
// whose pairwise distances all satisfy the guard. Sampling is by the exact
// spacing construction (sorted uniform gaps plus mandatory spacing), so any
// feasible density is reached without rejection; labels are shuffled so users
// are exchangeable. Throws infeasible_error, naming the achievable count,
// when k_users does not fit.
std::vector<double> sample_user_frequencies(Rng& rng, int k_users, const ArrayConfig& cfg,
                                            const GuardPolicy& policy);

// One interfering frequency, uniform on the circle minus the open guard
// interval of guard_bins bins on each side of omega_desired.
double sample_interferer(Rng& rng, double omega_desired, const ArrayConfig& cfg,
                         double guard_bins);

// Angles strictly inside the bound keep every subcarrier's spatial frequency
// within the unambiguous range under beam squint.
double field_of_view_bound(double bandwidth_hz, double carrier_hz);
bool check_field_of_view(double theta_rad, double bandwidth_hz, double carrier_hz);

// True when the dominant spatial frequencies keep the guard at the band edge
// -B/2, the squint-worst frequency.
bool wideband_guard_ok(const std::vector<UserChannel>& users, const ArrayConfig& cfg,
                       const WidebandConfig& wcfg, double guard_bins);

} // namespace beamspace

#endif
