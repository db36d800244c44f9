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

#include "beamspace/wideband.hpp"

#include "beamspace/scheduling.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>

using namespace beamspace;
using Catch::Approx;

namespace {

UserChannel single_path_user(int id, double omega_ref, double gain = 1.0, double delay = 0.0)
{
    UserChannel u;
    u.user_id = id;
    PathRecord p;
    p.gain = gain;
    p.delay_s = delay;
    p.aoa_rad = std::asin(wrap_to_pi(omega_ref) / kPi);
    u.paths.push_back(p);
    return u;
}

// guarded single-path ensemble at the band-edge spacing rule
std::vector<UserChannel> guarded_ensemble(Rng& rng, int k_users, const ArrayConfig& cfg,
                                          const WidebandConfig& wcfg, double guard_bins)
{
    GuardPolicy policy;
    policy.guard_bins = guard_bins;
    policy.reference = GuardPolicy::Reference::lowest_frequency;
    policy.fractional_bandwidth = wcfg.fractional_bandwidth();
    const auto omegas = sample_user_frequencies(rng, k_users, cfg, policy);
    std::vector<UserChannel> users;
    for (int k = 0; k < k_users; ++k)
        users.push_back(single_path_user(k, omegas[static_cast<std::size_t>(k)]));
    return users;
}

const std::vector<double> kGrid = {10.0, 20.0, 30.0};

} // namespace

TEST_CASE("subcarrier scenes track the squinted dominant path")
{
    const ArrayConfig cfg(32, 1);
    const WidebandConfig wcfg(28.5e9, 5.7e9, 8, 1.0);
    const double om = kTwoPi * 6.3 / 32;
    const std::vector<UserChannel> users = {single_path_user(0, om)};

    const auto lo = build_subcarrier_scene(users, 0, cfg, wcfg, 5, true);
    const auto hi = build_subcarrier_scene(users, 7, cfg, wcfg, 5, true);
    REQUIRE(lo.f_hz < 0.0);
    REQUIRE(hi.f_hz > 0.0);
    REQUIRE(lo.channel.rows() == 32);
    REQUIRE(lo.channel.cols() == 1);
    // squint compresses below the carrier and stretches above it
    const double nu_lo = spatial_frequency_at(om, lo.f_hz, wcfg.carrier_hz) * 32 / kTwoPi;
    const double nu_hi = spatial_frequency_at(om, hi.f_hz, wcfg.carrier_hz) * 32 / kTwoPi;
    REQUIRE(nu_lo < 6.3);
    REQUIRE(nu_hi > 6.3);
    REQUIRE(lo.windows[0].contains(static_cast<int>(std::lround(nu_lo)) % 32));
    REQUIRE(hi.windows[0].contains(static_cast<int>(std::lround(nu_hi)) % 32));

    const auto fixed = build_subcarrier_scene(users, 0, cfg, wcfg, 5, false);
    REQUIRE(fixed.windows[0].start == place_window(om, cfg, 5).start);
    REQUIRE_THROWS_AS(build_subcarrier_scene(users, 8, cfg, wcfg, 5, true),
                      std::invalid_argument);
}

TEST_CASE("dominant-path stripping keeps one path per user")
{
    Rng rng(3);
    SynthOptions opt;
    const auto users = synth_multipath(rng, 4, opt);
    const auto solo = strip_to_dominant(users);
    REQUIRE(solo.size() == users.size());
    for (std::size_t k = 0; k < solo.size(); ++k) {
        REQUIRE(solo[k].paths.size() == 1);
        REQUIRE(std::abs(solo[k].paths[0].gain -
                         users[k].paths[static_cast<std::size_t>(users[k].dominant_index())]
                             .gain) == 0.0);
    }
}

TEST_CASE("single-user rates hit the rank-one closed form at every bandwidth")
{
    // one path, zero delay: log2(1 + snr) independent of the subcarrier
    const ArrayConfig cfg(32, 1);
    const WidebandConfig wcfg(28.5e9, 5.7e9, 16, 0.37);
    const std::vector<UserChannel> users = {single_path_user(0, kTwoPi * 5.2 / 32, 2.7)};

    const auto un = unconstrained_se(users, cfg, wcfg, kGrid);
    const auto fa = full_array_lmmse_se(users, cfg, wcfg, kGrid);
    for (std::size_t s = 0; s < kGrid.size(); ++s) {
        const double expected = std::log2(1.0 + db_to_linear(kGrid[s]));
        REQUIRE(un[s] == Approx(expected).epsilon(1e-9));
        REQUIRE(fa[s] == Approx(expected).epsilon(1e-9));
    }
}

TEST_CASE("subcarrier refinement converges for smooth channels")
{
    const ArrayConfig cfg(16, 1);
    const std::vector<UserChannel> users = {single_path_user(0, kTwoPi * 3.3 / 16),
                                            single_path_user(1, kTwoPi * 9.6 / 16)};
    const WidebandConfig coarse(28.5e9, 5.7e9, 32, 1.0);
    const WidebandConfig fine(28.5e9, 5.7e9, 64, 1.0);
    const auto a = unconstrained_se(users, cfg, coarse, {20.0});
    const auto b = unconstrained_se(users, cfg, fine, {20.0});
    REQUIRE(a[0] == Approx(b[0]).margin(1e-4));
}

TEST_CASE("orthogonal on-grid users decouple at the carrier")
{
    // zero bandwidth: every subcarrier sees the narrowband channel
    const ArrayConfig cfg(16, 1);
    const WidebandConfig wcfg(28.5e9, 0.0, 4, 1.0);
    const std::vector<UserChannel> users = {single_path_user(0, kTwoPi * 3.0 / 16),
                                            single_path_user(1, kTwoPi * 9.0 / 16),
                                            single_path_user(2, kTwoPi * 13.0 / 16)};
    const auto un = unconstrained_se(users, cfg, wcfg, kGrid);
    const auto fa = full_array_lmmse_se(users, cfg, wcfg, kGrid);
    const auto bs = beamspace_lmmse_se(users, cfg, wcfg, 5, kGrid);
    for (std::size_t s = 0; s < kGrid.size(); ++s) {
        const double expected = std::log2(1.0 + db_to_linear(kGrid[s]));
        REQUIRE(un[s] == Approx(expected).epsilon(1e-9));
        REQUIRE(fa[s] == Approx(expected).epsilon(1e-9));
        REQUIRE(bs.se[s] == Approx(expected).epsilon(1e-9));
    }
    // on-grid orthogonal users leak nothing into each other's windows
    for (const auto& trace : bs.sir_traces)
        for (double v : trace)
            REQUIRE(std::isinf(v));
}

TEST_CASE("full-window beamspace matches the full array")
{
    Rng rng(17);
    const ArrayConfig cfg(16, 1);
    const WidebandConfig wcfg(28.5e9, 2.85e9, 8, 1.0);
    const auto users = guarded_ensemble(rng, 5, cfg, wcfg, 1.0);
    const auto fa = full_array_lmmse_se(users, cfg, wcfg, kGrid);
    const auto bs = beamspace_lmmse_se(users, cfg, wcfg, 16, kGrid);
    for (std::size_t s = 0; s < kGrid.size(); ++s)
        REQUIRE(bs.se[s] == Approx(fa[s]).epsilon(1e-9));
}

TEST_CASE("rates are ordered and monotone on a random ensemble")
{
    Rng rng(29);
    const ArrayConfig cfg(32, 1);
    const WidebandConfig wcfg(28.5e9, 5.7e9, 16, 1.0);
    auto users = guarded_ensemble(rng, 8, cfg, wcfg, 0.95);
    // sprinkle weak multipath on top of the guarded dominants
    SynthOptions opt;
    opt.fov_rad = field_of_view_bound(wcfg.bandwidth_hz, wcfg.carrier_hz);
    std::vector<double> dom;
    for (const auto& u : users)
        dom.push_back(u.dominant().omega_ref());
    users = synth_multipath_at(rng, dom, opt);

    const std::vector<double> grid = {0.0, 10.0, 20.0, 30.0};
    const auto un = unconstrained_se(users, cfg, wcfg, grid);
    const auto fa = full_array_lmmse_se(users, cfg, wcfg, grid);
    const auto bs = beamspace_lmmse_se(users, cfg, wcfg, 5, grid);
    for (std::size_t s = 0; s < grid.size(); ++s) {
        REQUIRE(bs.se[s] >= 0.0);
        REQUIRE(bs.se[s] <= fa[s] + 1e-9);
        REQUIRE(fa[s] <= un[s] + 1e-9);
        if (s > 0) {
            REQUIRE(un[s] >= un[s - 1] - 1e-12);
            REQUIRE(fa[s] >= fa[s - 1] - 1e-12);
            REQUIRE(bs.se[s] >= bs.se[s - 1] - 1e-12);
        }
    }
}

TEST_CASE("squint stretches pairwise separations up the band")
{
    Rng rng(31);
    const ArrayConfig cfg(32, 1);
    const WidebandConfig wcfg(28.5e9, 5.7e9, 16, 1.0);
    const auto users = guarded_ensemble(rng, 10, cfg, wcfg, 0.95);
    const double f_lo = -0.5 * wcfg.bandwidth_hz;
    const double f_hi = 0.5 * wcfg.bandwidth_hz;
    for (std::size_t a = 0; a < users.size(); ++a) {
        for (std::size_t b = a + 1; b < users.size(); ++b) {
            const double oa = users[a].dominant().omega_ref();
            const double ob = users[b].dominant().omega_ref();
            const double lo = std::abs(spatial_frequency_at(oa, f_lo, wcfg.carrier_hz) -
                                       spatial_frequency_at(ob, f_lo, wcfg.carrier_hz));
            const double hi = std::abs(spatial_frequency_at(oa, f_hi, wcfg.carrier_hz) -
                                       spatial_frequency_at(ob, f_hi, wcfg.carrier_hz));
            REQUIRE(hi > lo);
        }
    }
}

TEST_CASE("sir trace flags invisible interference and tracks real leakage")
{
    const ArrayConfig cfg(32, 1);
    const WidebandConfig wcfg(28.5e9, 0.0, 4, 1.0);

    SECTION("a lone user sees an all-infinite trace")
    {
        const std::vector<UserChannel> users = {single_path_user(0, kTwoPi * 4.25 / 32)};
        for (double v : sir_trace(0, users, cfg, wcfg, 5))
            REQUIRE(std::isinf(v));
    }
    SECTION("an in-window secondary path caps the trace")
    {
        // five off-grid interferers make the windowed covariance full rank,
        // so zero-forcing cannot escape and the trace is finite
        const double om0 = kTwoPi * 4.25 / 32;
        std::vector<UserChannel> users = {single_path_user(0, om0)};
        int id = 1;
        for (double bin : {10.5, 13.5, 17.5, 23.5, 27.5})
            users.push_back(single_path_user(id++, kTwoPi * bin / 32));
        const auto clean = sir_trace(0, users, cfg, wcfg, 5);

        PathRecord leak;
        leak.gain = 0.2;
        leak.delay_s = 30e-9;
        leak.aoa_rad = std::asin(wrap_to_pi(om0 + kTwoPi * 1.3 / 32) / kPi);
        users[1].paths.push_back(leak);
        const auto dirty = sir_trace(0, users, cfg, wcfg, 5);

        double min_clean = std::numeric_limits<double>::infinity();
        double min_dirty = std::numeric_limits<double>::infinity();
        for (double v : clean)
            min_clean = std::min(min_clean, v);
        for (double v : dirty)
            min_dirty = std::min(min_dirty, v);
        REQUIRE(std::isfinite(min_clean));
        REQUIRE(std::isfinite(min_dirty));
        REQUIRE(min_dirty < min_clean);
    }
    SECTION("user index is validated")
    {
        const std::vector<UserChannel> users = {single_path_user(0, 0.3)};
        REQUIRE_THROWS_AS(sir_trace(1, users, cfg, wcfg, 5), std::invalid_argument);
    }
}

TEST_CASE("guarded single-path traces clear the margin prediction")
{
    Rng rng(41);
    const ArrayConfig cfg(32, 1);
    const WidebandConfig wcfg(28.5e9, 5.7e9, 16, 1.0);
    const auto users = guarded_ensemble(rng, 16, cfg, wcfg, 0.95);
    double min_sir = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 16; ++k)
        for (double v : sir_trace(k, users, cfg, wcfg, 5))
            min_sir = std::min(min_sir, v);
    // windowed single-path interference stays well above the 15 dB floor
    REQUIRE(linear_to_db(min_sir) > 15.0);
}

TEST_CASE("beamspace saturates in multipath while the benchmarks keep growing")
{
    Rng rng(53);
    const ArrayConfig cfg(32, 1);
    const WidebandConfig wcfg(28.5e9, 5.7e9, 16, 1.0);
    auto users = guarded_ensemble(rng, 8, cfg, wcfg, 0.95);
    SynthOptions opt;
    opt.fov_rad = field_of_view_bound(wcfg.bandwidth_hz, wcfg.carrier_hz);
    std::vector<double> dom;
    for (const auto& u : users)
        dom.push_back(u.dominant().omega_ref());
    users = synth_multipath_at(rng, dom, opt);

    const std::vector<double> grid = {30.0, 40.0};
    const auto fa = full_array_lmmse_se(users, cfg, wcfg, grid);
    const auto bs = beamspace_lmmse_se(users, cfg, wcfg, 5, grid);
    REQUIRE(bs.se[1] - bs.se[0] < fa[1] - fa[0]);
}

TEST_CASE("spectral efficiencies are independent of the thread count")
{
    Rng rng(61);
    const ArrayConfig cfg(32, 1);
    const WidebandConfig wcfg(28.5e9, 5.7e9, 16, 1.0);
    const auto users = guarded_ensemble(rng, 6, cfg, wcfg, 0.95);
    const auto a = full_array_lmmse_se(users, cfg, wcfg, kGrid, 1);
    const auto b = full_array_lmmse_se(users, cfg, wcfg, kGrid, 5);
    for (std::size_t s = 0; s < kGrid.size(); ++s)
        REQUIRE(a[s] == b[s]);
    const auto ta = sir_trace(0, users, cfg, wcfg, 5, true, 1);
    const auto tb = sir_trace(0, users, cfg, wcfg, 5, true, 4);
    REQUIRE(ta == tb);
    REQUIRE_THROWS_AS(unconstrained_se({}, cfg, wcfg, kGrid), std::invalid_argument);
    REQUIRE_THROWS_AS(unconstrained_se(users, cfg, wcfg, {}), std::invalid_argument);
}
