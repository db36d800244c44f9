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

#include "beamspace/receiver.hpp"

#include "oracles.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

using namespace beamspace;
using Catch::Approx;

namespace {

CVecd random_cvec(Rng& rng, long n)
{
    CVecd v(n);
    for (long i = 0; i < n; ++i)
        v(i) = rng.cnormal();
    return v;
}

} // namespace

TEST_CASE("noise covariance is white without zero padding")
{
    const ArrayConfig cfg(32, 1);
    const BeamspaceWindow win = place_window(kTwoPi * 7.3 / 32, cfg, 5);
    const CMatd r = noise_covariance(cfg, win, 0.25);
    REQUIRE((r - 0.25 * CMatd::Identity(5, 5)).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("noise covariance follows the transform gram when oversampled")
{
    const ArrayConfig cfg(16, 2);
    const BeamspaceWindow win = place_window(kTwoPi * 3.4 / 16, cfg, 6);
    const CMatd r = noise_covariance(cfg, win, 2.0);
    const CMatd ref = 2.0 * oracle::gram_brute(cfg, win);
    REQUIRE((r - ref).cwiseAbs().maxCoeff() < 1e-12);
    // adjacent oversampled bins correlate; diagonal halves
    REQUIRE(r(0, 0).real() == Approx(1.0).margin(1e-12));
    REQUIRE(std::abs(r(0, 1)) > 0.1);
    REQUIRE_THROWS_AS(noise_covariance(cfg, win, -1.0), std::invalid_argument);
}

TEST_CASE("scene covariance assembles rank-one updates")
{
    Rng rng(11);
    const long w = 4;
    ReceiverScene scene;
    scene.desired = random_cvec(rng, w);
    scene.noise_cov = 0.3 * CMatd::Identity(w, w);
    CMatd ref = scene.noise_cov;
    for (int k = 0; k < 3; ++k) {
        const CVecd u = random_cvec(rng, w);
        const double p = 0.5 + k;
        scene.interferers.push_back(u);
        scene.powers.push_back(p);
        ref += p * u * u.adjoint();
    }
    const CMatd r = scene_covariance(scene);
    REQUIRE((r - ref).cwiseAbs().maxCoeff() < 1e-12);
    REQUIRE((r - r.adjoint()).cwiseAbs().maxCoeff() < 1e-14);

    scene.powers.pop_back();
    REQUIRE_THROWS_AS(scene_covariance(scene), std::invalid_argument);
    scene.powers.push_back(-1.0);
    REQUIRE_THROWS_AS(scene_covariance(scene), std::invalid_argument);
}

TEST_CASE("lmmse sinr matches closed forms on canonical scenes")
{
    Rng rng(42);
    const long w = 5;
    const double sigma2 = 0.37;
    ReceiverScene scene;
    scene.desired = random_cvec(rng, w);
    scene.desired_power = 1.8;
    scene.noise_cov = sigma2 * CMatd::Identity(w, w);
    const double e = scene.desired.squaredNorm();

    SECTION("noise only")
    {
        REQUIRE(lmmse_sinr(scene) == Approx(1.8 * e / sigma2).epsilon(1e-12));
    }
    SECTION("fully aligned interferer uses the rank-one inverse")
    {
        const double q = 2.3;
        scene.interferers.push_back(scene.desired);
        scene.powers.push_back(q);
        const double expected = 1.8 * e / (sigma2 + q * e);
        REQUIRE(lmmse_sinr(scene) == Approx(expected).epsilon(1e-12));
    }
    SECTION("orthogonal interferer costs nothing")
    {
        CVecd v = random_cvec(rng, w);
        v -= scene.desired * (scene.desired.dot(v) / e);
        REQUIRE(std::abs(scene.desired.dot(v)) < 1e-12 * v.norm());
        scene.interferers.push_back(v);
        scene.powers.push_back(50.0);
        REQUIRE(lmmse_sinr(scene) == Approx(1.8 * e / sigma2).epsilon(1e-12));
    }
}

TEST_CASE("singular covariance raises a numerical error")
{
    ReceiverScene scene;
    scene.desired = CVecd::Ones(3);
    scene.noise_cov = CMatd::Zero(3, 3);
    REQUIRE_THROWS_AS(lmmse_sinr(scene), numerical_error);
}

TEST_CASE("lmmse weights are optimal and scale invariant")
{
    Rng rng(7);
    const long w = 5;
    ReceiverScene scene;
    scene.desired = random_cvec(rng, w);
    scene.desired_power = 1.0;
    scene.noise_cov = 0.05 * CMatd::Identity(w, w);
    for (int k = 0; k < 4; ++k) {
        scene.interferers.push_back(random_cvec(rng, w));
        scene.powers.push_back(0.7 + 0.3 * k);
    }
    const double best = lmmse_sinr(scene);
    const CVecd c = lmmse_weights(scene);
    REQUIRE(sinr_of_weights(scene, c) == Approx(best).epsilon(1e-10));
    REQUIRE(sinr_of_weights(scene, std::complex<double>(3.7, -0.4) * c) ==
            Approx(best).epsilon(1e-10));
    for (int t = 0; t < 25; ++t) {
        const CVecd probe = c + 0.3 * random_cvec(rng, w);
        REQUIRE(sinr_of_weights(scene, probe) <= best * (1.0 + 1e-10));
    }
}

TEST_CASE("noise-limited capture reduces to energy capture without padding")
{
    const ArrayConfig cfg(64, 1);
    for (double delta : {0.0, 0.17, 0.5}) {
        const double omega = kTwoPi * (5.0 + delta) / 64;
        for (int w : {1, 3, 5}) {
            REQUIRE(noise_limited_capture(omega, cfg, w) ==
                    Approx(energy_capture(omega, cfg, w)).epsilon(1e-10));
        }
    }
}

TEST_CASE("noise-limited capture matches the projector oracle when oversampled")
{
    const ArrayConfig cfg(16, 2);
    for (double nu : {2.0, 2.3, 2.5, 9.75}) {
        const double omega = kTwoPi * nu / 32; // fine-grid coordinates
        for (int w : {2, 5, 8}) {
            const BeamspaceWindow win = place_window(omega, cfg, w);
            const CMatd p = oracle::projector_brute(cfg, win);
            const CVecd a = steering_vector(omega, cfg.n_antennas);
            const double ref = a.dot(p * a).real() / cfg.n_antennas;
            REQUIRE(noise_limited_capture(omega, cfg, w) == Approx(ref).epsilon(1e-9));
        }
    }
}

TEST_CASE("noise-limited capture handles rank-deficient windows")
{
    // a full oversampled grid spans the whole space, so capture is exactly 1
    const ArrayConfig cfg(8, 2);
    for (double nu : {0.0, 3.7}) {
        const double omega = kTwoPi * nu / 16;
        REQUIRE(noise_limited_capture(omega, cfg, 16) == Approx(1.0).margin(1e-9));
    }
}

TEST_CASE("noise-limited capture is monotone in the window width")
{
    const ArrayConfig cfg(32, 1);
    const double omega = kTwoPi * 4.37 / 32;
    double prev = 0.0;
    for (int w = 1; w <= 9; ++w) {
        const double c = noise_limited_capture(omega, cfg, w);
        REQUIRE(c >= prev - 1e-12);
        REQUIRE(c <= 1.0 + 1e-12);
        prev = c;
    }
}

TEST_CASE("two-bin probe signal term is the coherent bin sum")
{
    const int n = 64;
    const ArrayConfig cfg(n, 1);
    Rng rng(5);
    for (double frac : {0.0, 0.25, 0.5, 1.0}) {
        const double omega = frac * kTwoPi / n;
        const auto st = two_bin_mf_stats(omega, cfg, rng, 1000);
        const double a = std::abs(dirichlet(omega, n));
        const double b = std::abs(dirichlet(omega - kTwoPi / n, n));
        REQUIRE(st.signal_energy == Approx((a + b) * (a + b)).epsilon(1e-12));
        REQUIRE(st.signal_energy >= 1.0 - 1e-12); // never below the one-bin peak
    }
}

TEST_CASE("two-bin probe interference shrinks like one over n")
{
    const std::int64_t samples = 200000;
    double scaled_min = 1e300, scaled_max = 0.0;
    for (int n : {32, 64, 128, 256}) {
        const ArrayConfig cfg(n, 1);
        Rng rng(99);
        const auto st = two_bin_mf_stats(0.25 * kTwoPi / n, cfg, rng, samples);
        REQUIRE(st.mean_interference_energy > 0.0);
        const double scaled = n * st.mean_interference_energy;
        scaled_min = std::min(scaled_min, scaled);
        scaled_max = std::max(scaled_max, scaled);
    }
    REQUIRE(scaled_max / scaled_min < 2.0);
}

TEST_CASE("two-bin probe is deterministic and validates inputs")
{
    const ArrayConfig cfg(32, 1);
    Rng a(123), b(123);
    const auto s1 = two_bin_mf_stats(0.1, cfg, a, 5000);
    const auto s2 = two_bin_mf_stats(0.1, cfg, b, 5000);
    REQUIRE(s1.mean_interference_energy == s2.mean_interference_energy);
    Rng c(1);
    REQUIRE_THROWS_AS(two_bin_mf_stats(-0.01, cfg, c, 100), std::invalid_argument);
    REQUIRE_THROWS_AS(two_bin_mf_stats(kTwoPi / 32 + 0.01, cfg, c, 100), std::invalid_argument);
    REQUIRE_THROWS_AS(two_bin_mf_stats(0.1, cfg, c, 0), std::invalid_argument);
}
