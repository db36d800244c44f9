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
// Steering vectors on a half-wavelength uniform linear array, the Dirichlet
// kernel of the spatial DFT, window placement on the (optionally zero-padded)
// DFT grid, and closed-form energy-capture expressions.

#ifndef BEAMSPACE_ARRAY_CORE_HPP
#define BEAMSPACE_ARRAY_CORE_HPP

#include "beamspace/types.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

namespace beamspace {

// sin(pi x)/(pi x), with sinc(0) = 1.
template <typename Real>
inline Real sinc(Real x)
{
    const Real px = std::numbers::pi_v<Real> * x;
    if (std::abs(px) < Real(1e-8))
        return Real(1) - px * px / Real(6);
    return std::sin(px) / px;
}

// Normalized Dirichlet kernel (1/n) * sum_{k=0}^{n-1} exp(j omega k).
// Equals exp(j (n-1) omega / 2) * sin(n omega / 2) / (n sin(omega / 2)),
// with the removable singularity at omega = 0 mod 2 pi filled by its limit.
template <typename Real>
inline std::complex<Real> dirichlet(Real omega, int n)
{
    if (n < 1)
        throw std::invalid_argument("dirichlet: n must be positive");
    const Real w = wrap_to_pi(omega);
    const std::complex<Real> phase = std::polar(Real(1), Real(n - 1) * w / Real(2));
    if (w == Real(0))
        return phase;
    const Real mag = std::sin(Real(n) * w / Real(2)) / (Real(n) * std::sin(w / Real(2)));
    return phase * mag;
}

// Unit-amplitude array response [1, e^{j omega}, ..., e^{j omega (n-1)}].
template <typename Real = double>
inline CVec<Real> steering_vector(Real omega, int n)
{
    if (n < 1)
        throw std::invalid_argument("steering_vector: n must be positive");
    CVec<Real> a(n);
    for (int k = 0; k < n; ++k)
        a(k) = std::polar(Real(1), omega * Real(k));
    return a;
}

// Spatial frequency of a plane wave from broadside angle theta (radians) on a
// half-wavelength-spaced array.
template <typename Real>
inline Real spatial_frequency_from_aoa(Real theta)
{
    return std::numbers::pi_v<Real> * std::sin(theta);
}

namespace detail {

// Nearest-bin decomposition of a continuous grid coordinate nu:
// nu = n0 + sign * delta with delta in [0, 0.5]. Ties (delta == 0.5) resolve
// to the left bin with sign = +1 so downstream window placement is
// deterministic. No wrapping is applied.
inline GridPosition locate_continuous(double nu)
{
    const double fl = std::floor(nu);
    const double frac = nu - fl;
    GridPosition pos;
    if (frac <= 0.5) {
        pos.n0 = static_cast<int>(fl);
        pos.delta = frac;
        pos.sign = +1;
    } else {
        pos.n0 = static_cast<int>(fl) + 1;
        pos.delta = 1.0 - frac;
        pos.sign = -1;
    }
    return pos;
}

// First (unwrapped) index of a width-w run around bin n0. Odd widths are
// centered; even widths take the extra bin on the side the frequency leans
// toward (sign = +1 leans right).
inline long window_start(long n0, int sign, int w)
{
    if (w % 2 == 1)
        return n0 - (w - 1) / 2;
    const int k = w / 2;
    return sign >= 0 ? n0 - k + 1 : n0 - k;
}

} // namespace detail

// Nearest-bin position of omega on a grid_size-point DFT grid, with n0
// wrapped into {-grid_size/2, ..., grid_size/2 - 1}.
inline GridPosition locate_on_grid_points(double omega, int grid_size)
{
    if (grid_size < 2 || grid_size % 2 != 0)
        throw std::invalid_argument("locate_on_grid_points: grid size must be even and >= 2");
    const double nu = wrap_to_pi(omega) * grid_size / kTwoPi;
    GridPosition pos = detail::locate_continuous(nu);
    if (pos.n0 >= grid_size / 2)
        pos.n0 -= grid_size;
    return pos;
}

// Position on the base N-point grid (zero-padding does not change it).
inline GridPosition locate_on_grid(double omega, const ArrayConfig& cfg)
{
    return locate_on_grid_points(omega, cfg.n_antennas);
}

// Contiguous width-w window on the n_fft-point grid anchored at pos.
inline BeamspaceWindow window_from_position(const GridPosition& pos, int w, int n_fft)
{
    if (w < 1 || w > n_fft)
        throw std::invalid_argument("window width must lie in [1, n_fft]");
    BeamspaceWindow win;
    win.n_fft = n_fft;
    win.width = w;
    win.start = detail::window_start(pos.n0, pos.sign, w);
    return win;
}

// Width-w window on the (possibly zero-padded) grid, anchored at the bin
// nearest to omega on that grid.
inline BeamspaceWindow place_window(double omega, const ArrayConfig& cfg, int w)
{
    const GridPosition pos = locate_on_grid_points(omega, cfg.n_fft());
    return window_from_position(pos, w, cfg.n_fft());
}

// Rows of the n_fft-point unitary DFT selected by the window, restricted to
// the n_antennas occupied inputs: T(i, n) = exp(-j 2 pi b_i n / n_fft) / sqrt(n_fft).
template <typename Real = double>
inline CMat<Real> beamspace_matrix(const ArrayConfig& cfg, const BeamspaceWindow& win)
{
    const int n = cfg.n_antennas;
    const int g = cfg.n_fft();
    if (win.n_fft != g)
        throw std::invalid_argument("beamspace_matrix: window grid does not match array config");
    const Real scale = Real(1) / std::sqrt(Real(g));
    CMat<Real> t(win.width, n);
    for (int i = 0; i < win.width; ++i) {
        const Real step = -Real(2) * std::numbers::pi_v<Real> * Real(win.bin(i)) / Real(g);
        for (int k = 0; k < n; ++k)
            t(i, k) = scale * std::polar(Real(1), step * Real(k));
    }
    return t;
}

// Windowed DFT coefficients of x (length n_antennas): y = T x.
template <typename Real>
inline CVec<Real> beamspace_transform(const CVec<Real>& x, const ArrayConfig& cfg,
                                      const BeamspaceWindow& win)
{
    const int n = cfg.n_antennas;
    const int g = cfg.n_fft();
    if (x.size() != n)
        throw std::invalid_argument("beamspace_transform: input length does not match array");
    if (win.n_fft != g)
        throw std::invalid_argument("beamspace_transform: window grid does not match array config");
    const Real scale = Real(1) / std::sqrt(Real(g));
    CVec<Real> y(win.width);
    for (int i = 0; i < win.width; ++i) {
        const Real step = -Real(2) * std::numbers::pi_v<Real> * Real(win.bin(i)) / Real(g);
        std::complex<Real> acc(0, 0);
        for (int k = 0; k < n; ++k)
            acc += x(k) * std::polar(Real(1), step * Real(k));
        y(i) = scale * acc;
    }
    return y;
}

// Closed form for T a(omega): entry i equals
// (n / sqrt(n_fft)) * D_n(omega - 2 pi b_i / n_fft).
template <typename Real = double>
inline CVec<Real> windowed_signature(Real omega, const ArrayConfig& cfg,
                                     const BeamspaceWindow& win)
{
    const int n = cfg.n_antennas;
    const int g = cfg.n_fft();
    if (win.n_fft != g)
        throw std::invalid_argument("windowed_signature: window grid does not match array config");
    const Real scale = Real(n) / std::sqrt(Real(g));
    CVec<Real> u(win.width);
    for (int i = 0; i < win.width; ++i) {
        const Real bin_freq =
            Real(2) * std::numbers::pi_v<Real> * Real(win.unwrapped(i)) / Real(g);
        u(i) = scale * dirichlet(omega - bin_freq, n);
    }
    return u;
}

// T a(omega) / sqrt(n): the scale in which a desired user at delta = 0 with
// zp_factor = 1 has unit energy. Entry i is sqrt(n / n_fft) * D_n(.).
template <typename Real = double>
inline CVec<Real> normalized_signature(Real omega, const ArrayConfig& cfg,
                                       const BeamspaceWindow& win)
{
    CVec<Real> u = windowed_signature<Real>(omega, cfg, win);
    u /= std::sqrt(Real(cfg.n_antennas));
    return u;
}

// Gram matrix T T^H. Identity for zp_factor = 1; for zp_factor = 2 it is the
// Toeplitz matrix (n / n_fft) * D_n(2 pi (j - i) / n_fft).
template <typename Real = double>
inline CMat<Real> transform_gram(const ArrayConfig& cfg, const BeamspaceWindow& win)
{
    const int g = cfg.n_fft();
    if (win.n_fft != g)
        throw std::invalid_argument("transform_gram: window grid does not match array config");
    const Real scale = Real(cfg.n_antennas) / Real(g);
    CMat<Real> m(win.width, win.width);
    for (int i = 0; i < win.width; ++i) {
        m(i, i) = scale;
        for (int j = i + 1; j < win.width; ++j) {
            const Real om = Real(2) * std::numbers::pi_v<Real> * Real(j - i) / Real(g);
            const std::complex<Real> v = scale * dirichlet(om, cfg.n_antennas);
            m(i, j) = v;
            m(j, i) = std::conj(v);
        }
    }
    return m;
}

// Fraction of steering-vector energy captured by the width-w window anchored
// nearest to omega. Equals |T a(omega)|^2 / n, clamped to [0, 1].
inline double energy_capture(double omega, const ArrayConfig& cfg, int w)
{
    const BeamspaceWindow win = place_window(omega, cfg, w);
    const double s = normalized_signature<double>(omega, cfg, win).squaredNorm();
    return std::clamp(s, 0.0, 1.0);
}

// Deterministic lower bound on energy_capture for a frequency at base-grid
// position pos (delta in [0, 0.5]). For zp_factor = 1 this is
// sum sinc^2(m - nu) over the window bins m; for zp_factor = 2 the window
// lives on the doubled grid and each term is sinc^2(m/2 - nu) / 2.
inline double capture_lower_bound(int w, const GridPosition& pos, int zp_factor)
{
    if (w < 1)
        throw std::invalid_argument("capture_lower_bound: window width must be positive");
    if (pos.delta < 0.0 || pos.delta > 0.5)
        throw std::invalid_argument("capture_lower_bound: delta must lie in [0, 0.5]");
    const double nu = pos.nu();
    double s = 0.0;
    if (zp_factor == 1) {
        const long start = detail::window_start(pos.n0, pos.sign, w);
        for (int i = 0; i < w; ++i) {
            const double d = sinc(static_cast<double>(start + i) - nu);
            s += d * d;
        }
    } else if (zp_factor == 2) {
        const GridPosition fine = detail::locate_continuous(2.0 * nu);
        const long start = detail::window_start(fine.n0, fine.sign, w);
        for (int i = 0; i < w; ++i) {
            const double d = sinc(0.5 * static_cast<double>(start + i) - nu);
            s += 0.5 * d * d;
        }
    } else {
        throw std::invalid_argument("capture_lower_bound: unsupported zero-pad factor");
    }
    return s;
}

} // namespace beamspace

#endif
