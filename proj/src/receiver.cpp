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

#include <Eigen/Eigenvalues>

#include <cmath>
#include <iostream>

namespace beamspace {

HpdSolver::HpdSolver(const CMatd& r, const char* context)
{
    if (r.rows() != r.cols() || r.rows() == 0)
        throw std::invalid_argument(std::string(context) + ": covariance must be square");
    llt_.compute(r);
    if (llt_.info() == Eigen::Success)
        return;
    const double jitter = 1e-12 * r.real().trace() / static_cast<double>(r.rows());
    if (std::isfinite(jitter) && jitter > 0.0) {
        std::cerr << "warning: " << context
                  << ": covariance factorization failed, retrying with diagonal jitter "
                  << jitter << "\n";
        llt_.compute(r + jitter * CMatd::Identity(r.rows(), r.cols()));
        if (llt_.info() == Eigen::Success)
            return;
    }
    throw numerical_error(std::string(context) +
                          ": covariance is singular; use a nonzero noise floor");
}

CMatd noise_covariance(const ArrayConfig& cfg, const BeamspaceWindow& win, double noise_var)
{
    if (noise_var < 0.0)
        throw std::invalid_argument("noise_covariance: noise variance must be nonnegative");
    return noise_var * transform_gram(cfg, win);
}

namespace {

void validate_scene(const ReceiverScene& scene)
{
    const long w = scene.desired.size();
    if (w == 0)
        throw std::invalid_argument("ReceiverScene: empty desired signature");
    if (scene.desired_power < 0.0)
        throw std::invalid_argument("ReceiverScene: negative desired power");
    if (scene.interferers.size() != scene.powers.size())
        throw std::invalid_argument("ReceiverScene: one power per interferer required");
    for (const auto& u : scene.interferers)
        if (u.size() != w)
            throw std::invalid_argument("ReceiverScene: interferer dimension mismatch");
    for (double p : scene.powers)
        if (p < 0.0)
            throw std::invalid_argument("ReceiverScene: negative interferer power");
    if (scene.noise_cov.rows() != w || scene.noise_cov.cols() != w)
        throw std::invalid_argument("ReceiverScene: noise covariance dimension mismatch");
}

} // namespace

CMatd scene_covariance(const ReceiverScene& scene)
{
    validate_scene(scene);
    CMatd r = 0.5 * (scene.noise_cov + scene.noise_cov.adjoint());
    for (std::size_t k = 0; k < scene.interferers.size(); ++k)
        r.selfadjointView<Eigen::Lower>().rankUpdate(scene.interferers[k], scene.powers[k]);
    return CMatd(r.selfadjointView<Eigen::Lower>());
}

double lmmse_sinr(const ReceiverScene& scene)
{
    const CMatd r = scene_covariance(scene);
    const HpdSolver solver(r, "lmmse_sinr");
    return scene.desired_power * scene.desired.dot(solver.solve(scene.desired)).real();
}

CVecd lmmse_weights(const ReceiverScene& scene)
{
    const CMatd r = scene_covariance(scene);
    const HpdSolver solver(r, "lmmse_weights");
    return solver.solve(scene.desired);
}

double sinr_of_weights(const ReceiverScene& scene, const CVecd& c)
{
    if (c.size() != scene.desired.size())
        throw std::invalid_argument("sinr_of_weights: weight dimension mismatch");
    const CMatd r = scene_covariance(scene);
    const double denom = c.dot(r * c).real();
    if (denom <= 0.0)
        throw numerical_error("sinr_of_weights: receiver output has no interference or noise "
                              "energy; use a nonzero noise floor");
    return scene.desired_power * std::norm(c.dot(scene.desired)) / denom;
}

double noise_limited_capture(double omega, const ArrayConfig& cfg, int w)
{
    const BeamspaceWindow win = place_window(omega, cfg, w);
    const CVecd u = windowed_signature(omega, cfg, win);
    const CMatd gram = transform_gram(cfg, win);

    // T T^H is rank-deficient when the window exceeds the antenna count, so
    // project through a spectral pseudo-inverse rather than a plain solve.
    Eigen::SelfAdjointEigenSolver<CMatd> eig(gram);
    if (eig.info() != Eigen::Success)
        throw numerical_error("noise_limited_capture: eigendecomposition failed");
    const RVecd& lam = eig.eigenvalues();
    const double lam_max = lam(lam.size() - 1);
    const double tol = 1e-12 * std::max(lam_max, 1.0);
    const CVecd proj = eig.eigenvectors().adjoint() * u;
    double acc = 0.0;
    for (long i = 0; i < lam.size(); ++i)
        if (lam(i) > tol)
            acc += std::norm(proj(i)) / lam(i);
    return acc / static_cast<double>(cfg.n_antennas);
}

TwoBinMfStats two_bin_mf_stats(double omega_desired, const ArrayConfig& cfg, Rng& rng,
                               std::int64_t n_samples)
{
    const int n = cfg.n_antennas;
    const double bin = kTwoPi / n;
    if (omega_desired < -1e-12 || omega_desired > bin + 1e-12)
        throw std::invalid_argument(
            "two_bin_mf_stats: desired frequency must lie between bins 0 and 1");
    if (n_samples < 1)
        throw std::invalid_argument("two_bin_mf_stats: need at least one sample");

    TwoBinMfStats out;
    // coherent two-bin combination: both desired terms carry the same sign
    const double a = std::abs(dirichlet(omega_desired, n));
    const double b = std::abs(dirichlet(omega_desired - bin, n));
    out.signal_energy = (a + b) * (a + b);

    // interference statistic Z = |s(omega) - s(omega - 2 pi / n)| with the
    // signed kernel ratios s; the guard keeps both denominators away from 0
    const double guard_lo = -0.5 * kPi / n;
    const double guard_hi = 2.5 * kPi / n;
    const double allowed = kTwoPi - (guard_hi - guard_lo);
    double acc = 0.0;
    for (std::int64_t i = 0; i < n_samples; ++i) {
        const double omega = guard_hi + rng.uniform(0.0, allowed);
        const double num = std::sin(0.5 * n * omega);
        const double z = num / (n * std::sin(0.5 * omega)) -
                         num / (n * std::sin(0.5 * (omega - bin)));
        acc += z * z;
    }
    out.mean_interference_energy = acc / static_cast<double>(n_samples);
    return out;
}

} // namespace beamspace
