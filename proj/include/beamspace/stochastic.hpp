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
// Ensemble analysis of guarded interference: the mean windowed interference
// operator, SIR margins and SINR predictions derived from it, eigenstructure
// reports, an operator-Jensen sanity check, and the margin-vs-array-size
// scaling study.

#ifndef BEAMSPACE_STOCHASTIC_HPP
#define BEAMSPACE_STOCHASTIC_HPP

#include "beamspace/array_core.hpp"
#include "beamspace/receiver.hpp"
#include "beamspace/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace beamspace {

// Monte-Carlo estimate of E[u u^H] for one interferer whose frequency is
// uniform outside the guard zone, expressed in the normalized signature
// scale (T a / sqrt(n)). Its trace is the mean captured interferer energy
// fraction.
struct MeanInterferenceModel {
    CMatd m_i;
    std::int64_t n_samples = 0;
    double guard_bins = 0.0;
    double omega_desired = 0.0;
    GridPosition anchor;
    int zp_factor = 1;
    BeamspaceWindow window;
};

// Estimates the model with a fixed chunk grid, so the result depends only on
// the seed and sample count, never on the thread count.
MeanInterferenceModel estimate_mean_interference(double omega_desired, const ArrayConfig& cfg,
                                                 int w, double guard_bins, std::uint64_t seed,
                                                 std::int64_t n_samples, int threads = 1);

// p_tot * M_I + noise_var * noise_shape (exact affine combination).
CMatd mean_total_covariance(const MeanInterferenceModel& model, double p_tot, double noise_var,
                            const CMatd& noise_shape);

// Interference-limited margin u1^H M_I^{-1} u1 (linear scale).
double sir_margin(const CVecd& u1, const MeanInterferenceModel& model);

// Jensen lower bound on the mean LMMSE SINR:
// p1 * u1^H (p_tot * M_I + noise_var * noise_shape)^{-1} u1 (linear scale).
double expected_sinr_lower_bound(const CVecd& u1, double p1, const MeanInterferenceModel& model,
                                 double p_tot, double noise_var, const CMatd& noise_shape);

// Equal-power prediction: margin_db - 10 log10(k_users - 1).
double predicted_sinr_equal_power_db(double margin, int k_users);

// Prediction for a desired user at relative power p_min among unit-power
// interferers: 10 log10(p_min / (k_users - 1)) + margin_db.
double predicted_sinr_min_power_db(double margin, int k_users, double p_min);

// Eigenstructure of the mean interference operator, eigenvalues descending.
// Eigenvector phases are fixed (largest entry real positive) so reports are
// deterministic.
struct EigenReport {
    RVecd eigenvalues;
    CMatd eigenvectors;
    RVecd shares;              // eigenvalue / trace
    RVecd cumulative_shares;
    RVecd desired_projections; // |q_i^H u1|^2
};

EigenReport eigen_report(const MeanInterferenceModel& model, const CVecd& u1);

// Largest relative violation of u^H (mean R)^{-1} u <= mean(u^H R^{-1} u)
// over random Hermitian positive-definite ensembles. Operator convexity of
// the inverse makes this nonpositive up to roundoff for every finite
// ensemble, so values above ~1e-9 indicate a defect.
double verify_operator_jensen(std::uint64_t seed, int dim, int n_ensembles, int n_vectors,
                              int ensemble_size = 32, int threads = 1);

// Per-user LMMSE SINRs for one narrowband layout. Each user is detected in
// its own window of width w; noise_var_norm is the normalized noise level
// 2 sigma^2 / n (the reciprocal of the beamformed SNR at unit power).
std::vector<double> simulate_user_sinrs(const std::vector<double>& omegas,
                                        const std::vector<double>& powers,
                                        const ArrayConfig& cfg, int w, double noise_var_norm);

// Margin growth across array sizes, with a guarded equal-power simulation at
// roughly half load and per-antenna SNR of 40 dB for cross-checking.
struct ScalingRow {
    int n_antennas = 0;
    int k_users = 0;
    double margin_db = 0.0;
    double predicted_sinr_db = 0.0;
    double sim_min_db = 0.0;
    double sim_mean_db = 0.0;
};

struct ScalingStudy {
    std::vector<ScalingRow> rows;
    double slope = 0.0; // d(margin_db) / d(10 log10 n)
};

ScalingStudy scaling_study(const std::vector<int>& n_list, int w, double guard_bins,
                           std::uint64_t seed, std::int64_t mc_samples, int n_layouts = 20,
                           int threads = 1);

// Five benchmark power/noise configurations evaluated at n = 128, W = 5,
// 2-bin guard: equal power at 10/30/60 dB beamformed SNR, and a mixed
// population where half the interferers are 10 dB stronger, seen from a
// weak and from a strong desired user.
struct SinrCaseResult {
    std::string label;
    int zp_factor = 1;
    double prediction_db = 0.0;
    double sim_min_db = 0.0;
    double sim_mean_db = 0.0;
};

std::vector<SinrCaseResult> sinr_prediction_table(int n_antennas, int w, double guard_bins,
                                                  int k_users, std::uint64_t seed,
                                                  std::int64_t mc_samples, int n_layouts,
                                                  int threads = 1);

} // namespace beamspace

#endif
