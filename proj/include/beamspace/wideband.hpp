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
// Per-subcarrier spectral-efficiency benchmarks for the wideband uplink:
// the unconstrained log-det rate, the full-array LMMSE rate, and the
// windowed beamspace LMMSE rate with squint-tracking windows, plus
// noise-free per-subcarrier SIR traces.
//
// Every rate is reported in bits/s/Hz per user, averaged over users and
// subcarriers with the midpoint rule. SNR grid values are interpreted as
// each user's dominant-path beamformed SNR in dB: channels are first
// normalized to 0 dB and then scaled per grid point, so input gain scales
// do not matter.

#ifndef BEAMSPACE_WIDEBAND_HPP
#define BEAMSPACE_WIDEBAND_HPP

#include "beamspace/array_core.hpp"
#include "beamspace/channel.hpp"
#include "beamspace/types.hpp"

#include <vector>

namespace beamspace {

// One OFDM subcarrier prepared for detection: the stacked channel matrix
// (columns indexed by user) and each user's beamspace window, anchored at
// that user's dominant spatial frequency at this subcarrier when
// reanchor = true and at the carrier-frequency position otherwise.
struct SubcarrierScene {
    double f_hz = 0.0;
    CMatd channel; // n_antennas x k_users
    std::vector<BeamspaceWindow> windows;
    double noise_var = 1.0;
};

SubcarrierScene build_subcarrier_scene(const std::vector<UserChannel>& users, int m,
                                       const ArrayConfig& cfg, const WidebandConfig& wcfg,
                                       int w, bool reanchor = true);

// keeps only each user's dominant path (the single-path reference ensemble)
std::vector<UserChannel> strip_to_dominant(const std::vector<UserChannel>& users);

// (1/(K M)) sum_m log2 det(I + H(f_m) H^H(f_m) / noise_var)
std::vector<double> unconstrained_se(const std::vector<UserChannel>& users,
                                     const ArrayConfig& cfg, const WidebandConfig& wcfg,
                                     const std::vector<double>& snr_grid_db, int threads = 1);

// (1/(K M)) sum_{k,m} log2(1 + h_k^H R_{I+N}^{-1} h_k) with the full
// antenna-space covariance of the other users plus white noise
std::vector<double> full_array_lmmse_se(const std::vector<UserChannel>& users,
                                        const ArrayConfig& cfg, const WidebandConfig& wcfg,
                                        const std::vector<double>& snr_grid_db,
                                        int threads = 1);

struct BeamspaceSeReport {
    std::vector<double> se;                      // aligned with the SNR grid
    std::vector<std::vector<double>> sir_traces; // [user][subcarrier], noise-free
};

// Same averaging with per-user windowed signatures and windowed noise; the
// report also carries each user's noise-free SIR trace across subcarriers
// (infinity marks subcarriers whose interference is invisible to the window).
BeamspaceSeReport beamspace_lmmse_se(const std::vector<UserChannel>& users,
                                     const ArrayConfig& cfg, const WidebandConfig& wcfg, int w,
                                     const std::vector<double>& snr_grid_db,
                                     bool reanchor = true, int threads = 1);

// Noise-free windowed SIR of one user per subcarrier: the LMMSE quadratic
// form against the interference-only covariance, +infinity where the
// desired signature has energy in the covariance null space.
std::vector<double> sir_trace(int user_idx, const std::vector<UserChannel>& users,
                              const ArrayConfig& cfg, const WidebandConfig& wcfg, int w,
                              bool reanchor = true, int threads = 1);

} // namespace beamspace

#endif
