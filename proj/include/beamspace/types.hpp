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

#ifndef BEAMSPACE_TYPES_HPP
#define BEAMSPACE_TYPES_HPP

#include <Eigen/Dense>

#include <complex>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace beamspace {

template <typename Real>
using CVec = Eigen::Vector<std::complex<Real>, Eigen::Dynamic>;
template <typename Real>
using CMat = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Real>
using RVec = Eigen::Vector<Real, Eigen::Dynamic>;

using CVecd = CVec<double>;
using CMatd = CMat<double>;
using RVecd = RVec<double>;

inline constexpr double kPi = std::numbers::pi_v<double>;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi_v<double>;

// Thrown when a requested schedule cannot be realized (maps to exit code 3).
class infeasible_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Thrown on numerical failure, e.g. a singular covariance (exit code 4).
class numerical_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Thrown when an experiment configuration does not validate (exit code 2).
class config_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Wrap an angle into [-pi, pi), half-open.
template <typename Real>
inline Real wrap_to_pi(Real x)
{
    Real y = std::fmod(x + std::numbers::pi_v<Real>, Real(2) * std::numbers::pi_v<Real>);
    if (y < Real(0))
        y += Real(2) * std::numbers::pi_v<Real>;
    y -= std::numbers::pi_v<Real>;
    if (y >= std::numbers::pi_v<Real>) // guard against rounding at the seam
        y = -std::numbers::pi_v<Real>;
    return y;
}

// Circular distance on the spatial-frequency circle, in [0, pi].
template <typename Real>
inline Real circular_distance(Real a, Real b)
{
    return std::abs(wrap_to_pi(a - b));
}

template <typename Real>
inline Real db_to_linear(Real db)
{
    return std::pow(Real(10), db / Real(10));
}

template <typename Real>
inline Real linear_to_db(Real x)
{
    return Real(10) * std::log10(x);
}

// Uniform linear array with an N-point or 2N-point spatial DFT.
struct ArrayConfig {
    int n_antennas = 0;
    int zp_factor = 1;

    ArrayConfig(int n, int zp = 1) : n_antennas(n), zp_factor(zp)
    {
        if (n < 2)
            throw std::invalid_argument("ArrayConfig: need at least 2 antennas");
        if (n % 2 != 0)
            throw std::invalid_argument("ArrayConfig: antenna count must be even "
                                        "(grid bins run from -N/2 to N/2-1)");
        if (zp != 1 && zp != 2)
            throw std::invalid_argument("ArrayConfig: unsupported zero-pad factor (must be 1 or 2)");
    }

    int n_fft() const { return n_antennas * zp_factor; }
};

// Position of a spatial frequency relative to a DFT grid:
// omega = 2*pi*(n0 + sign*delta)/grid_size with delta in [0, 0.5].
struct GridPosition {
    int n0 = 0;
    double delta = 0.0;
    int sign = +1;

    double nu() const { return static_cast<double>(n0) + sign * delta; }
};

// A contiguous run of W bins on the N_FFT-point grid, stored unwrapped and
// reported modulo N_FFT.
struct BeamspaceWindow {
    int n_fft = 0;
    long start = 0; // unwrapped index of the first bin in the run
    int width = 0;

    long unwrapped(int i) const { return start + i; }

    int bin(int i) const
    {
        long b = (start + i) % n_fft;
        if (b < 0)
            b += n_fft;
        return static_cast<int>(b);
    }

    std::vector<int> indices() const
    {
        std::vector<int> out(static_cast<std::size_t>(width));
        for (int i = 0; i < width; ++i)
            out[static_cast<std::size_t>(i)] = bin(i);
        return out;
    }

    bool contains(int wrapped_bin) const
    {
        for (int i = 0; i < width; ++i)
            if (bin(i) == wrapped_bin)
                return true;
        return false;
    }
};

} // namespace beamspace

#endif
