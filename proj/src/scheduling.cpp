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

#include "beamspace/scheduling.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace beamspace {

namespace {

// Shrink factor applied to spatial frequencies at the bottom edge of the band.
double edge_shrink(double fractional_bandwidth)
{
    return 1.0 - 0.5 * fractional_bandwidth;
}

void validate_policy(const GuardPolicy& policy)
{
    if (policy.guard_bins < 0.0)
        throw std::invalid_argument("GuardPolicy: guard must be nonnegative");
    if (policy.reference == GuardPolicy::Reference::lowest_frequency &&
        (policy.fractional_bandwidth < 0.0 || policy.fractional_bandwidth >= 2.0))
        throw std::invalid_argument("GuardPolicy: fractional bandwidth must lie in [0, 2)");
}

// Fisher-Yates with our own generator, so results do not depend on the
// standard library's std::shuffle implementation.
void shuffle_labels(Rng& rng, std::vector<double>& v)
{
    for (std::size_t i = v.size(); i > 1; --i)
        std::swap(v[i - 1], v[rng.uniform_below(i)]);
}

} // namespace

int max_users_for_guard(const ArrayConfig& cfg, const GuardPolicy& policy)
{
    validate_policy(policy);
    const double g = policy.guard_bins * kTwoPi / cfg.n_antennas;
    if (policy.reference == GuardPolicy::Reference::narrowband) {
        if (g <= 0.0)
            return std::numeric_limits<int>::max();
        return static_cast<int>(std::floor(kTwoPi / g + 1e-12));
    }
    const double shrink = edge_shrink(policy.fractional_bandwidth);
    const double omega_max = kPi / (1.0 + 0.5 * policy.fractional_bandwidth);
    const double span = 2.0 * omega_max;
    if (g <= 0.0)
        return std::numeric_limits<int>::max();
    const double spacing = g / shrink;
    return static_cast<int>(std::floor(span / spacing + 1e-12)) + 1;
}

std::vector<double> sample_user_frequencies(Rng& rng, int k_users, const ArrayConfig& cfg,
                                            const GuardPolicy& policy)
{
    validate_policy(policy);
    if (k_users < 1)
        throw std::invalid_argument("sample_user_frequencies: need at least one user");

    const double g = policy.guard_bins * kTwoPi / cfg.n_antennas;
    std::vector<double> omegas(static_cast<std::size_t>(k_users));

    if (policy.reference == GuardPolicy::Reference::narrowband) {
        if (k_users > max_users_for_guard(cfg, policy))
            throw infeasible_error(
                "sample_user_frequencies: a guard of " + std::to_string(policy.guard_bins) +
                " bins fits at most " + std::to_string(max_users_for_guard(cfg, policy)) +
                " users on " + std::to_string(cfg.n_antennas) + " antennas; requested " +
                std::to_string(k_users));
        if (g <= 0.0 || k_users == 1) {
            for (auto& w : omegas)
                w = rng.uniform(-kPi, kPi);
            return omegas;
        }
        // circle construction: mandatory arcs of length g plus sorted uniform
        // slack, rotated by a uniform base point
        const double slack = kTwoPi - k_users * g;
        std::vector<double> gaps(static_cast<std::size_t>(k_users - 1));
        for (auto& u : gaps)
            u = rng.uniform(0.0, slack);
        std::sort(gaps.begin(), gaps.end());
        const double base = rng.uniform(-kPi, kPi);
        omegas[0] = wrap_to_pi(base);
        for (int i = 1; i < k_users; ++i)
            omegas[static_cast<std::size_t>(i)] =
                wrap_to_pi(base + gaps[static_cast<std::size_t>(i - 1)] + i * g);
    } else {
        // guard enforced at the band edge; users confined to the field of view
        const double shrink = edge_shrink(policy.fractional_bandwidth);
        const double omega_max = kPi / (1.0 + 0.5 * policy.fractional_bandwidth);
        const double spacing = g > 0.0 ? g / shrink : 0.0;
        const double span = 2.0 * omega_max;
        if (k_users > max_users_for_guard(cfg, policy))
            throw infeasible_error(
                "sample_user_frequencies: a guard of " + std::to_string(policy.guard_bins) +
                " bins at the band edge fits at most " +
                std::to_string(max_users_for_guard(cfg, policy)) + " users on " +
                std::to_string(cfg.n_antennas) + " antennas within the field of view; requested " +
                std::to_string(k_users));
        const double slack = span - (k_users - 1) * spacing;
        std::vector<double> v(static_cast<std::size_t>(k_users));
        for (auto& u : v)
            u = rng.uniform(0.0, slack);
        std::sort(v.begin(), v.end());
        for (int i = 0; i < k_users; ++i)
            omegas[static_cast<std::size_t>(i)] =
                -omega_max + v[static_cast<std::size_t>(i)] + i * spacing;
    }

    shuffle_labels(rng, omegas);
    return omegas;
}

double sample_interferer(Rng& rng, double omega_desired, const ArrayConfig& cfg,
                         double guard_bins)
{
    if (guard_bins < 0.0)
        throw std::invalid_argument("sample_interferer: guard must be nonnegative");
    const double g = guard_bins * kTwoPi / cfg.n_antennas;
    if (2.0 * g >= kTwoPi)
        throw infeasible_error("sample_interferer: guard excludes the whole circle");
    const double u = rng.uniform(0.0, kTwoPi - 2.0 * g);
    return wrap_to_pi(omega_desired + g + u);
}

double field_of_view_bound(double bandwidth_hz, double carrier_hz)
{
    if (carrier_hz <= 0.0)
        throw std::invalid_argument("field_of_view_bound: carrier must be positive");
    if (bandwidth_hz < 0.0)
        throw std::invalid_argument("field_of_view_bound: bandwidth must be nonnegative");
    return std::asin(1.0 / (1.0 + 0.5 * bandwidth_hz / carrier_hz));
}

bool check_field_of_view(double theta_rad, double bandwidth_hz, double carrier_hz)
{
    return std::abs(theta_rad) < field_of_view_bound(bandwidth_hz, carrier_hz);
}

bool wideband_guard_ok(const std::vector<UserChannel>& users, const ArrayConfig& cfg,
                       const WidebandConfig& wcfg, double guard_bins)
{
    const double g = guard_bins * kTwoPi / cfg.n_antennas;
    const double f_min = -0.5 * wcfg.bandwidth_hz;
    std::vector<double> edge(users.size());
    for (std::size_t k = 0; k < users.size(); ++k)
        edge[k] = spatial_frequency_at(users[k].dominant().omega_ref(), f_min, wcfg.carrier_hz);
    for (std::size_t i = 0; i < users.size(); ++i)
        for (std::size_t j = i + 1; j < users.size(); ++j)
            if (circular_distance(edge[i], edge[j]) < g - 1e-12)
                return false;
    return true;
}

} // namespace beamspace
