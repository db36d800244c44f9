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
// Linear MMSE detection in a beamspace window: scene covariances, optimal
// weights and SINR, the noise-limited capture ratio, and a two-bin
// matched-filter probe used by the margin scaling analysis.

#ifndef BEAMSPACE_RECEIVER_HPP
#define BEAMSPACE_RECEIVER_HPP

#include "beamspace/array_core.hpp"
#include "beamspace/rng.hpp"
#include "beamspace/types.hpp"

#include <Eigen/Cholesky>

#include <cstdint>
#include <vector>

namespace beamspace {

// One detection instance in a fixed window: the desired user's signature,
// interferer signatures with their receive powers, and the noise covariance.
// All vectors share the window dimension.
struct ReceiverScene {
    CVecd desired;
    double desired_power = 1.0;
    std::vector<CVecd> interferers;
    std::vector<double> powers;
    CMatd noise_cov;
};

// Hermitian positive-definite solver. If the factorization fails, one retry
// adds a jitter of 1e-12 * trace / dim to the diagonal and warns on stderr;
// a covariance that is still singular raises numerical_error.
class HpdSolver {
  public:
    HpdSolver(const CMatd& r, const char* context);

    CVecd solve(const CVecd& b) const { return llt_.solve(b); }
    CMatd solve(const CMatd& b) const { return llt_.solve(b); }

  private:
    Eigen::LLT<CMatd> llt_;
};

// Beamspace noise covariance noise_var * T T^H (diagonal when zp_factor = 1).
CMatd noise_covariance(const ArrayConfig& cfg, const BeamspaceWindow& win, double noise_var);

// Interference-plus-noise covariance sum p_k u_k u_k^H + noise_cov.
CMatd scene_covariance(const ReceiverScene& scene);

// Output SINR of the LMMSE receiver: p1 * u1^H R^{-1} u1.
double lmmse_sinr(const ReceiverScene& scene);

// Unnormalized LMMSE weights R^{-1} u1 (any nonzero scaling yields the same
// output SINR).
CVecd lmmse_weights(const ReceiverScene& scene);

// Output SINR of an arbitrary linear receiver c on the scene.
double sinr_of_weights(const ReceiverScene& scene, const CVecd& c);

// Fraction of the whitened-matched-filter SNR retained by the window when
// only noise is present: u1^H (T T^H)^{-1} u1 / n. The noise level cancels.
double noise_limited_capture(double omega, const ArrayConfig& cfg, int w);

// Two-bin matched-filter probe for a desired frequency in [0, 2 pi / n]:
// bins 0 and 1 are combined coherently for the desired user, and the
// interference statistic Z is averaged over frequencies drawn uniformly
// outside the guard interval [-0.5 pi / n, 2.5 pi / n].
struct TwoBinMfStats {
    double signal_energy = 0.0;       // |c^H u1|^2
    double mean_interference_energy = 0.0; // E[Z^2]
};

TwoBinMfStats two_bin_mf_stats(double omega_desired, const ArrayConfig& cfg, Rng& rng,
                               std::int64_t n_samples);

} // namespace beamspace

#endif
