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

#include "beamspace/parallel.hpp"
#include "beamspace/receiver.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace beamspace {

namespace {

constexpr std::int64_t kSubcarrierChunk = 4;

void check_bench_inputs(const std::vector<UserChannel>& users,
                        const std::vector<double>& snr_grid_db)
{
    if (users.empty())
        throw std::invalid_argument("spectral efficiency: need at least one user");
    if (snr_grid_db.empty())
        throw std::invalid_argument("spectral efficiency: empty SNR grid");
}

// channels rescaled so every dominant path sits at 0 dB beamformed SNR
std::vector<UserChannel> normalized_copy(const std::vector<UserChannel>& users,
                                         const ArrayConfig& cfg, const WidebandConfig& wcfg)
{
    std::vector<UserChannel> out = users;
    normalize_dominant_snr(out, 0.0, cfg, wcfg.noise_var);
    return out;
}

CMatd channel_matrix(const std::vector<UserChannel>& users, double f_hz,
                     const ArrayConfig& cfg, const WidebandConfig& wcfg)
{
    CMatd h(cfg.n_antennas, static_cast<long>(users.size()));
    for (std::size_t k = 0; k < users.size(); ++k)
        h.col(static_cast<long>(k)) = channel_at(users[k], f_hz, cfg, wcfg);
    return h;
}

std::vector<double> grid_amplitudes(const std::vector<double>& snr_grid_db)
{
    std::vector<double> amp(snr_grid_db.size());
    for (std::size_t i = 0; i < snr_grid_db.size(); ++i)
        amp[i] = std::sqrt(db_to_linear(snr_grid_db[i]));
    return amp;
}

// sum over chunks of per-subcarrier per-grid-point rate contributions;
// fixed chunk grid keeps the fold order independent of the thread count
std::vector<double>
accumulate_rates(int n_subcarriers, int threads, std::size_t n_grid,
                 const std::function<void(int, std::vector<double>&)>& add_subcarrier)
{
    return chunked_reduce<std::vector<double>>(
        n_subcarriers, kSubcarrierChunk, threads, std::vector<double>(n_grid, 0.0),
        [&](std::int64_t, std::int64_t begin, std::int64_t end) {
            std::vector<double> part(n_grid, 0.0);
            for (std::int64_t m = begin; m < end; ++m)
                add_subcarrier(static_cast<int>(m), part);
            return part;
        },
        [](std::vector<double> a, const std::vector<double>& b) {
            for (std::size_t i = 0; i < a.size(); ++i)
                a[i] += b[i];
            return a;
        });
}

} // namespace

SubcarrierScene build_subcarrier_scene(const std::vector<UserChannel>& users, int m,
                                       const ArrayConfig& cfg, const WidebandConfig& wcfg,
                                       int w, bool reanchor)
{
    if (m < 0 || m >= wcfg.n_subcarriers)
        throw std::invalid_argument("build_subcarrier_scene: subcarrier index out of range");
    SubcarrierScene scene;
    scene.f_hz = wcfg.subcarrier_hz(m);
    scene.channel = channel_matrix(users, scene.f_hz, cfg, wcfg);
    scene.noise_var = wcfg.noise_var;
    scene.windows.reserve(users.size());
    for (const UserChannel& u : users) {
        const double omega_ref = u.dominant().omega_ref();
        const double anchor = reanchor
                                  ? spatial_frequency_at(omega_ref, scene.f_hz, wcfg.carrier_hz)
                                  : omega_ref;
        scene.windows.push_back(place_window(anchor, cfg, w));
    }
    return scene;
}

std::vector<UserChannel> strip_to_dominant(const std::vector<UserChannel>& users)
{
    std::vector<UserChannel> out;
    out.reserve(users.size());
    for (const UserChannel& u : users) {
        UserChannel s;
        s.user_id = u.user_id;
        s.paths.push_back(u.dominant());
        out.push_back(std::move(s));
    }
    return out;
}

std::vector<double> unconstrained_se(const std::vector<UserChannel>& users,
                                     const ArrayConfig& cfg, const WidebandConfig& wcfg,
                                     const std::vector<double>& snr_grid_db, int threads)
{
    check_bench_inputs(users, snr_grid_db);
    const auto base = normalized_copy(users, cfg, wcfg);
    const auto amps = grid_amplitudes(snr_grid_db);
    const long k_users = static_cast<long>(users.size());
    const double log2e = 1.0 / std::log(2.0);

    auto rates = accumulate_rates(
        wcfg.n_subcarriers, threads, snr_grid_db.size(),
        [&](int m, std::vector<double>& part) {
            const CMatd h = channel_matrix(base, wcfg.subcarrier_hz(m), cfg, wcfg);
            // log det(I_N + H H^H / nv) = log det(I_K + H^H H / nv)
            const CMatd gram = h.adjoint() * h;
            for (std::size_t s = 0; s < amps.size(); ++s) {
                const double scale = amps[s] * amps[s] / wcfg.noise_var;
                const CMatd a = CMatd::Identity(k_users, k_users) + scale * gram;
                const Eigen::LLT<CMatd> llt(a);
                if (llt.info() != Eigen::Success)
                    throw numerical_error("unconstrained_se: log-det factorization failed");
                double logdet = 0.0;
                for (long i = 0; i < k_users; ++i)
                    logdet += 2.0 * std::log(llt.matrixLLT()(i, i).real());
                part[s] += logdet * log2e;
            }
        });
    for (double& r : rates)
        r /= static_cast<double>(k_users) * wcfg.n_subcarriers;
    return rates;
}

std::vector<double> full_array_lmmse_se(const std::vector<UserChannel>& users,
                                        const ArrayConfig& cfg, const WidebandConfig& wcfg,
                                        const std::vector<double>& snr_grid_db, int threads)
{
    check_bench_inputs(users, snr_grid_db);
    const auto base = normalized_copy(users, cfg, wcfg);
    const auto amps = grid_amplitudes(snr_grid_db);
    const long k_users = static_cast<long>(users.size());

    auto rates = accumulate_rates(
        wcfg.n_subcarriers, threads, snr_grid_db.size(),
        [&](int m, std::vector<double>& part) {
            const CMatd h = channel_matrix(base, wcfg.subcarrier_hz(m), cfg, wcfg);
            for (std::size_t s = 0; s < amps.size(); ++s) {
                // total covariance once per grid point; the per-user
                // leave-one-out SINR is q / (1 - q) with q = h^H R^{-1} h
                CMatd r = wcfg.noise_var * CMatd::Identity(cfg.n_antennas, cfg.n_antennas);
                r.selfadjointView<Eigen::Lower>().rankUpdate(h, amps[s] * amps[s]);
                const HpdSolver solver(CMatd(r.selfadjointView<Eigen::Lower>()),
                                       "full_array_lmmse_se");
                for (long k = 0; k < k_users; ++k) {
                    const CVecd hk = amps[s] * h.col(k);
                    const double q = hk.dot(solver.solve(hk)).real();
                    const double sinr = q / std::max(1.0 - q, 1e-15);
                    part[s] += std::log2(1.0 + sinr);
                }
            }
        });
    for (double& r : rates)
        r /= static_cast<double>(k_users) * wcfg.n_subcarriers;
    return rates;
}

namespace {

// eigen-based SIR of the desired signature against an interference-only
// covariance that may be singular
double noise_free_sir(const CVecd& desired, const CMatd& r_int)
{
    const double energy = desired.squaredNorm();
    if (energy == 0.0)
        return 0.0;
    Eigen::SelfAdjointEigenSolver<CMatd> es(r_int);
    if (es.info() != Eigen::Success)
        throw numerical_error("sir_trace: eigendecomposition failed");
    const double lam_max = std::max(es.eigenvalues().maxCoeff(), 0.0);
    const double rank_tol = 1e-12 * std::max(lam_max, 1e-300);
    double null_energy = 0.0;
    double finite_sir = 0.0;
    for (long i = 0; i < es.eigenvalues().size(); ++i) {
        const double proj = std::norm(es.eigenvectors().col(i).dot(desired));
        if (es.eigenvalues()(i) <= rank_tol)
            null_energy += proj;
        else
            finite_sir += proj / es.eigenvalues()(i);
    }
    if (null_energy > 1e-9 * energy)
        return std::numeric_limits<double>::infinity();
    return finite_sir;
}

} // namespace

BeamspaceSeReport beamspace_lmmse_se(const std::vector<UserChannel>& users,
                                     const ArrayConfig& cfg, const WidebandConfig& wcfg, int w,
                                     const std::vector<double>& snr_grid_db, bool reanchor,
                                     int threads)
{
    check_bench_inputs(users, snr_grid_db);
    const auto base = normalized_copy(users, cfg, wcfg);
    const auto amps = grid_amplitudes(snr_grid_db);
    const std::size_t k_users = users.size();
    const std::size_t n_grid = snr_grid_db.size();

    // flattened accumulator: n_grid rate sums, then k_users * M SIR slots
    const std::size_t n_slots = n_grid + k_users * static_cast<std::size_t>(wcfg.n_subcarriers);
    auto slots = accumulate_rates(
        wcfg.n_subcarriers, threads, n_slots,
        [&](int m, std::vector<double>& part) {
            const SubcarrierScene scene = build_subcarrier_scene(base, m, cfg, wcfg, w, reanchor);
            for (std::size_t k = 0; k < k_users; ++k) {
                const BeamspaceWindow& win = scene.windows[k];
                const CMatd t = beamspace_matrix(cfg, win);
                const CMatd th = t * scene.channel; // w x K windowed signatures
                ReceiverScene rx;
                rx.desired = th.col(static_cast<long>(k));
                rx.desired_power = 1.0;
                rx.noise_cov = noise_covariance(cfg, win, wcfg.noise_var);
                rx.interferers.reserve(k_users - 1);
                rx.powers.reserve(k_users - 1);
                CMatd r_int = CMatd::Zero(w, w);
                for (std::size_t j = 0; j < k_users; ++j) {
                    if (j == k)
                        continue;
                    rx.interferers.push_back(th.col(static_cast<long>(j)));
                    rx.powers.push_back(1.0);
                    r_int.selfadjointView<Eigen::Lower>().rankUpdate(
                        th.col(static_cast<long>(j)), 1.0);
                }
                for (std::size_t s = 0; s < n_grid; ++s) {
                    ReceiverScene scaled = rx;
                    scaled.desired_power = amps[s] * amps[s];
                    for (double& p : scaled.powers)
                        p = amps[s] * amps[s];
                    part[s] += std::log2(1.0 + lmmse_sinr(scaled)) /
                               static_cast<double>(k_users);
                }
                part[n_grid + k * static_cast<std::size_t>(wcfg.n_subcarriers) +
                     static_cast<std::size_t>(m)] =
                    noise_free_sir(rx.desired, CMatd(r_int.selfadjointView<Eigen::Lower>()));
            }
        });

    BeamspaceSeReport rep;
    rep.se.assign(slots.begin(), slots.begin() + static_cast<long>(n_grid));
    for (double& r : rep.se)
        r /= wcfg.n_subcarriers;
    rep.sir_traces.resize(k_users);
    for (std::size_t k = 0; k < k_users; ++k) {
        const std::size_t off = n_grid + k * static_cast<std::size_t>(wcfg.n_subcarriers);
        rep.sir_traces[k].assign(slots.begin() + static_cast<long>(off),
                                 slots.begin() +
                                     static_cast<long>(off +
                                                       static_cast<std::size_t>(
                                                           wcfg.n_subcarriers)));
    }
    return rep;
}

std::vector<double> sir_trace(int user_idx, const std::vector<UserChannel>& users,
                              const ArrayConfig& cfg, const WidebandConfig& wcfg, int w,
                              bool reanchor, int threads)
{
    if (user_idx < 0 || user_idx >= static_cast<int>(users.size()))
        throw std::invalid_argument("sir_trace: user index out of range");
    const auto base = normalized_copy(users, cfg, wcfg);

    return chunked_reduce<std::vector<double>>(
        wcfg.n_subcarriers, kSubcarrierChunk, threads, std::vector<double>(),
        [&](std::int64_t, std::int64_t begin, std::int64_t end) {
            std::vector<double> part;
            part.reserve(static_cast<std::size_t>(end - begin));
            for (std::int64_t m = begin; m < end; ++m) {
                const SubcarrierScene scene =
                    build_subcarrier_scene(base, static_cast<int>(m), cfg, wcfg, w, reanchor);
                const BeamspaceWindow& win = scene.windows[static_cast<std::size_t>(user_idx)];
                const CMatd t = beamspace_matrix(cfg, win);
                CMatd r_int = CMatd::Zero(w, w);
                for (long j = 0; j < scene.channel.cols(); ++j) {
                    if (j == user_idx)
                        continue;
                    const CVecd u = t * scene.channel.col(j);
                    r_int.selfadjointView<Eigen::Lower>().rankUpdate(u, 1.0);
                }
                part.push_back(noise_free_sir(t * scene.channel.col(user_idx),
                                              CMatd(r_int.selfadjointView<Eigen::Lower>())));
            }
            return part;
        },
        [](std::vector<double> a, const std::vector<double>& b) {
            a.insert(a.end(), b.begin(), b.end());
            return a;
        });
}

} // namespace beamspace
