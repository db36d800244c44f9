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

#include "beamspace/stochastic.hpp"

#include "beamspace/parallel.hpp"
#include "beamspace/rng.hpp"
#include "beamspace/scheduling.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace beamspace {

namespace {

// Chunk size of the Monte-Carlo grid. Part of the output contract: results
// are a deterministic function of (seed, n_samples) only.
constexpr std::int64_t kMcChunk = 8192;

std::uint64_t sub_seed(std::uint64_t seed, std::uint64_t salt)
{
    return mix_seed(seed ^ mix_seed(salt));
}

} // namespace

MeanInterferenceModel estimate_mean_interference(double omega_desired, const ArrayConfig& cfg,
                                                 int w, double guard_bins, std::uint64_t seed,
                                                 std::int64_t n_samples, int threads)
{
    if (n_samples < 1000)
        throw std::invalid_argument(
            "estimate_mean_interference: need at least 1000 samples for a usable estimate");
    if (guard_bins < 0.0)
        throw std::invalid_argument("estimate_mean_interference: guard must be nonnegative");

    MeanInterferenceModel model;
    model.n_samples = n_samples;
    model.guard_bins = guard_bins;
    model.omega_desired = omega_desired;
    model.anchor = locate_on_grid(omega_desired, cfg);
    model.zp_factor = cfg.zp_factor;
    model.window = place_window(omega_desired, cfg, w);

    const BeamspaceWindow win = model.window;
    CMatd acc = chunked_reduce<CMatd>(
        n_samples, kMcChunk, threads, CMatd::Zero(w, w),
        [&](std::int64_t chunk, std::int64_t begin, std::int64_t end) {
            Rng rng = derive_stream(seed, static_cast<std::uint64_t>(chunk));
            CMatd part = CMatd::Zero(w, w);
            for (std::int64_t i = begin; i < end; ++i) {
                const double omega = sample_interferer(rng, omega_desired, cfg, guard_bins);
                const CVecd u = normalized_signature(omega, cfg, win);
                part.selfadjointView<Eigen::Lower>().rankUpdate(u, 1.0);
            }
            return part;
        },
        [](CMatd a, CMatd b) { return CMatd(a + b); });

    acc /= static_cast<double>(n_samples);
    model.m_i = CMatd(acc.selfadjointView<Eigen::Lower>());
    return model;
}

CMatd mean_total_covariance(const MeanInterferenceModel& model, double p_tot, double noise_var,
                            const CMatd& noise_shape)
{
    if (p_tot < 0.0 || noise_var < 0.0)
        throw std::invalid_argument("mean_total_covariance: negative power or noise");
    if (noise_shape.rows() != model.m_i.rows() || noise_shape.cols() != model.m_i.cols())
        throw std::invalid_argument("mean_total_covariance: noise shape dimension mismatch");
    return p_tot * model.m_i + noise_var * noise_shape;
}

double sir_margin(const CVecd& u1, const MeanInterferenceModel& model)
{
    if (u1.size() != model.m_i.rows())
        throw std::invalid_argument("sir_margin: signature dimension mismatch");
    const HpdSolver solver(model.m_i, "sir_margin");
    return u1.dot(solver.solve(u1)).real();
}

double expected_sinr_lower_bound(const CVecd& u1, double p1, const MeanInterferenceModel& model,
                                 double p_tot, double noise_var, const CMatd& noise_shape)
{
    if (u1.size() != model.m_i.rows())
        throw std::invalid_argument("expected_sinr_lower_bound: signature dimension mismatch");
    if (p1 < 0.0)
        throw std::invalid_argument("expected_sinr_lower_bound: negative desired power");
    const CMatd r = mean_total_covariance(model, p_tot, noise_var, noise_shape);
    const HpdSolver solver(r, "expected_sinr_lower_bound");
    return p1 * u1.dot(solver.solve(u1)).real();
}

double predicted_sinr_equal_power_db(double margin, int k_users)
{
    if (k_users < 2)
        throw std::invalid_argument("predicted_sinr_equal_power_db: need k_users >= 2");
    if (margin <= 0.0)
        throw std::invalid_argument("predicted_sinr_equal_power_db: margin must be positive");
    return linear_to_db(margin) - linear_to_db(static_cast<double>(k_users - 1));
}

double predicted_sinr_min_power_db(double margin, int k_users, double p_min)
{
    if (k_users < 2)
        throw std::invalid_argument("predicted_sinr_min_power_db: need k_users >= 2");
    if (margin <= 0.0 || p_min <= 0.0)
        throw std::invalid_argument("predicted_sinr_min_power_db: margin and power must be "
                                    "positive");
    return linear_to_db(p_min / static_cast<double>(k_users - 1)) + linear_to_db(margin);
}

EigenReport eigen_report(const MeanInterferenceModel& model, const CVecd& u1)
{
    const long w = model.m_i.rows();
    if (u1.size() != w)
        throw std::invalid_argument("eigen_report: signature dimension mismatch");

    Eigen::SelfAdjointEigenSolver<CMatd> es(model.m_i);
    if (es.info() != Eigen::Success)
        throw numerical_error("eigen_report: eigendecomposition failed");

    EigenReport rep;
    rep.eigenvalues.resize(w);
    rep.eigenvectors.resize(w, w);
    rep.shares.resize(w);
    rep.cumulative_shares.resize(w);
    rep.desired_projections.resize(w);

    // Eigen returns ascending order; report descending.
    for (long i = 0; i < w; ++i) {
        rep.eigenvalues(i) = es.eigenvalues()(w - 1 - i);
        rep.eigenvectors.col(i) = es.eigenvectors().col(w - 1 - i);
    }

    // deterministic phases: largest-magnitude entry becomes real positive
    for (long i = 0; i < w; ++i) {
        long imax = 0;
        double best = -1.0;
        for (long r = 0; r < w; ++r) {
            const double m = std::abs(rep.eigenvectors(r, i));
            if (m > best + 1e-15) {
                best = m;
                imax = r;
            }
        }
        const std::complex<double> pivot = rep.eigenvectors(imax, i);
        if (std::abs(pivot) > 0.0)
            rep.eigenvectors.col(i) *= std::conj(pivot) / std::abs(pivot);
    }

    const double trace = rep.eigenvalues.sum();
    if (trace <= 0.0)
        throw numerical_error("eigen_report: interference operator has nonpositive trace");
    double cum = 0.0;
    for (long i = 0; i < w; ++i) {
        rep.shares(i) = rep.eigenvalues(i) / trace;
        cum += rep.shares(i);
        rep.cumulative_shares(i) = cum;
        rep.desired_projections(i) = std::norm(rep.eigenvectors.col(i).dot(u1));
    }
    return rep;
}

double verify_operator_jensen(std::uint64_t seed, int dim, int n_ensembles, int n_vectors,
                              int ensemble_size, int threads)
{
    if (dim < 1 || n_ensembles < 1 || n_vectors < 1 || ensemble_size < 1)
        throw std::invalid_argument("verify_operator_jensen: all counts must be positive");

    return chunked_reduce<double>(
        n_ensembles, 64, threads, -std::numeric_limits<double>::infinity(),
        [&](std::int64_t, std::int64_t begin, std::int64_t end) {
            double worst = -std::numeric_limits<double>::infinity();
            for (std::int64_t e = begin; e < end; ++e) {
                Rng rng = derive_stream(seed, static_cast<std::uint64_t>(e));
                std::vector<Eigen::LLT<CMatd>> factors;
                factors.reserve(static_cast<std::size_t>(ensemble_size));
                CMatd rbar = CMatd::Zero(dim, dim);
                for (int m = 0; m < ensemble_size; ++m) {
                    CMatd a(dim, dim);
                    for (long c = 0; c < a.size(); ++c)
                        a(c) = rng.cnormal();
                    const CMatd r = a * a.adjoint() + 0.05 * CMatd::Identity(dim, dim);
                    rbar += r;
                    factors.emplace_back(r);
                }
                rbar /= static_cast<double>(ensemble_size);
                const Eigen::LLT<CMatd> mean_factor(rbar);
                for (int v = 0; v < n_vectors; ++v) {
                    CVecd u(dim);
                    for (int c = 0; c < dim; ++c)
                        u(c) = rng.cnormal();
                    const double lhs = u.dot(mean_factor.solve(u)).real();
                    double rhs = 0.0;
                    for (const auto& f : factors)
                        rhs += u.dot(f.solve(u)).real();
                    rhs /= static_cast<double>(ensemble_size);
                    worst = std::max(worst, (lhs - rhs) / rhs);
                }
            }
            return worst;
        },
        [](double a, double b) { return std::max(a, b); });
}

std::vector<double> simulate_user_sinrs(const std::vector<double>& omegas,
                                        const std::vector<double>& powers,
                                        const ArrayConfig& cfg, int w, double noise_var_norm)
{
    if (omegas.empty() || omegas.size() != powers.size())
        throw std::invalid_argument("simulate_user_sinrs: need matching frequencies and powers");
    if (noise_var_norm < 0.0)
        throw std::invalid_argument("simulate_user_sinrs: negative noise");

    const std::size_t k_users = omegas.size();
    std::vector<double> sinrs(k_users);
    for (std::size_t k = 0; k < k_users; ++k) {
        const BeamspaceWindow win = place_window(omegas[k], cfg, w);
        ReceiverScene scene;
        scene.desired = normalized_signature(omegas[k], cfg, win);
        scene.desired_power = powers[k];
        scene.noise_cov = noise_var_norm * transform_gram(cfg, win);
        scene.interferers.reserve(k_users - 1);
        scene.powers.reserve(k_users - 1);
        for (std::size_t j = 0; j < k_users; ++j) {
            if (j == k)
                continue;
            scene.interferers.push_back(normalized_signature(omegas[j], cfg, win));
            scene.powers.push_back(powers[j]);
        }
        sinrs[k] = lmmse_sinr(scene);
    }
    return sinrs;
}

ScalingStudy scaling_study(const std::vector<int>& n_list, int w, double guard_bins,
                           std::uint64_t seed, std::int64_t mc_samples, int n_layouts,
                           int threads)
{
    if (n_list.size() < 2)
        throw std::invalid_argument("scaling_study: need at least two array sizes");
    if (n_layouts < 1)
        throw std::invalid_argument("scaling_study: need at least one layout");

    ScalingStudy study;
    for (int n : n_list) {
        const ArrayConfig cfg(n, 1);
        const int k_users = std::max(2, n / 2 - 3);
        const double omega1 = kTwoPi * 0.25 / n; // quarter-bin anchor

        const MeanInterferenceModel model = estimate_mean_interference(
            omega1, cfg, w, guard_bins, sub_seed(seed, static_cast<std::uint64_t>(n)),
            mc_samples, threads);
        const CVecd u1 = normalized_signature(omega1, cfg, model.window);
        const double margin = sir_margin(u1, model);

        ScalingRow row;
        row.n_antennas = n;
        row.k_users = k_users;
        row.margin_db = linear_to_db(margin);
        row.predicted_sinr_db = predicted_sinr_equal_power_db(margin, k_users);

        // equal-power simulation at 40 dB per-antenna SNR
        GuardPolicy policy;
        policy.guard_bins = guard_bins;
        Rng layout_rng = derive_stream(sub_seed(seed, static_cast<std::uint64_t>(n)), 0x51u);
        const std::vector<double> powers(static_cast<std::size_t>(k_users), 1.0);
        const double noise_var_norm = 1e-4 / n;
        double lin_min = std::numeric_limits<double>::infinity();
        double lin_sum = 0.0;
        std::int64_t count = 0;
        for (int l = 0; l < n_layouts; ++l) {
            const auto omegas = sample_user_frequencies(layout_rng, k_users, cfg, policy);
            for (double s : simulate_user_sinrs(omegas, powers, cfg, w, noise_var_norm)) {
                lin_min = std::min(lin_min, s);
                lin_sum += s;
                ++count;
            }
        }
        row.sim_min_db = linear_to_db(lin_min);
        row.sim_mean_db = linear_to_db(lin_sum / static_cast<double>(count));
        study.rows.push_back(row);
    }

    // least-squares slope of margin_db against 10 log10 n
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    const double m = static_cast<double>(study.rows.size());
    for (const ScalingRow& r : study.rows) {
        const double x = linear_to_db(static_cast<double>(r.n_antennas));
        sx += x;
        sy += r.margin_db;
        sxx += x * x;
        sxy += x * r.margin_db;
    }
    study.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    return study;
}

std::vector<SinrCaseResult> sinr_prediction_table(int n_antennas, int w, double guard_bins,
                                                  int k_users, std::uint64_t seed,
                                                  std::int64_t mc_samples, int n_layouts,
                                                  int threads)
{
    if (k_users < 3)
        throw std::invalid_argument("sinr_prediction_table: need at least three users");
    if (n_layouts < 1)
        throw std::invalid_argument("sinr_prediction_table: need at least one layout");

    const int n_interferers = k_users - 1;
    const int n_strong = n_interferers / 2;
    const int n_weak = n_interferers - n_strong;
    const double p_tot_equal = static_cast<double>(n_interferers);
    const double p_tot_mixed = 10.0 * n_strong + static_cast<double>(n_weak);

    struct CaseSpec {
        const char* label;
        double p1;
        double p_tot;
        double noise_var_norm;
        int sim;        // which simulation the case reads
        int user_class; // -1 all users, 0 weak, 1 strong
    };
    // noise_var_norm = 2 sigma^2 / n = (unit power) / (beamformed SNR)
    const CaseSpec cases[] = {
        {"equal-10dB", 1.0, p_tot_equal, 1e-1, 0, -1},
        {"mixed-weak", 1.0, p_tot_mixed, 1e-1, 1, 0},
        {"mixed-strong", 10.0, p_tot_mixed, 1e-1, 1, 1},
        {"equal-30dB", 1.0, p_tot_equal, 1e-3, 2, -1},
        {"equal-60dB", 1.0, p_tot_equal, 1e-6, 3, -1},
    };

    std::vector<SinrCaseResult> out;
    for (int zp : {1, 2}) {
        const ArrayConfig cfg(n_antennas, zp);
        const double omega1 = kTwoPi * 0.25 / n_antennas; // quarter-bin anchor
        const MeanInterferenceModel model =
            estimate_mean_interference(omega1, cfg, w, guard_bins, seed, mc_samples, threads);
        const CVecd u1 = normalized_signature(omega1, cfg, model.window);
        const CMatd shape = transform_gram(cfg, model.window);

        // four simulations: equal power at three noise levels plus the mixed
        // population at 10 dB
        struct Stats {
            double lin_min = std::numeric_limits<double>::infinity();
            double lin_sum = 0.0;
            std::int64_t count = 0;
        };
        Stats stats[4][2]; // [sim][class], class 1 unused for equal sims

        GuardPolicy policy;
        policy.guard_bins = guard_bins;
        Rng layout_rng = derive_stream(sub_seed(seed, 0x7ab1e + zp), 0);
        std::vector<double> p_equal(static_cast<std::size_t>(k_users), 1.0);
        std::vector<double> p_mixed(static_cast<std::size_t>(k_users));
        for (int i = 0; i < k_users; ++i)
            p_mixed[static_cast<std::size_t>(i)] = (i % 2 == 0) ? 1.0 : 10.0;

        for (int l = 0; l < n_layouts; ++l) {
            const auto omegas = sample_user_frequencies(layout_rng, k_users, cfg, policy);
            const double noise[3] = {1e-1, 1e-3, 1e-6};
            for (int s = 0; s < 3; ++s) {
                const int sim = (s == 0) ? 0 : (s == 1 ? 2 : 3);
                for (double v : simulate_user_sinrs(omegas, p_equal, cfg, w, noise[s])) {
                    Stats& st = stats[sim][0];
                    st.lin_min = std::min(st.lin_min, v);
                    st.lin_sum += v;
                    ++st.count;
                }
            }
            const auto mixed = simulate_user_sinrs(omegas, p_mixed, cfg, w, 1e-1);
            for (int i = 0; i < k_users; ++i) {
                Stats& st = stats[1][p_mixed[static_cast<std::size_t>(i)] > 1.0 ? 1 : 0];
                st.lin_min = std::min(st.lin_min, mixed[static_cast<std::size_t>(i)]);
                st.lin_sum += mixed[static_cast<std::size_t>(i)];
                ++st.count;
            }
        }

        for (const CaseSpec& c : cases) {
            SinrCaseResult r;
            r.label = c.label;
            r.zp_factor = zp;
            r.prediction_db = linear_to_db(
                expected_sinr_lower_bound(u1, c.p1, model, c.p_tot, c.noise_var_norm, shape));
            const Stats& st = stats[c.sim][c.user_class == 1 ? 1 : 0];
            r.sim_min_db = linear_to_db(st.lin_min);
            r.sim_mean_db = linear_to_db(st.lin_sum / static_cast<double>(st.count));
            out.push_back(r);
        }
    }
    return out;
}

} // namespace beamspace
