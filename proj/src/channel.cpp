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

#include "beamspace/channel.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>

namespace beamspace {

int UserChannel::dominant_index() const
{
    if (paths.empty())
        throw std::invalid_argument("UserChannel: no paths");
    int best = 0;
    double best_mag = std::abs(paths[0].gain);
    for (int i = 1; i < static_cast<int>(paths.size()); ++i) {
        const double m = std::abs(paths[static_cast<std::size_t>(i)].gain);
        if (m > best_mag) {
            best_mag = m;
            best = i;
        }
    }
    return best;
}

WidebandConfig::WidebandConfig(double carrier, double bandwidth, int subcarriers, double noise)
    : carrier_hz(carrier), bandwidth_hz(bandwidth), n_subcarriers(subcarriers), noise_var(noise)
{
    if (carrier <= 0.0)
        throw std::invalid_argument("WidebandConfig: carrier frequency must be positive");
    if (bandwidth < 0.0 || bandwidth >= 2.0 * carrier)
        throw std::invalid_argument("WidebandConfig: bandwidth must lie in [0, 2 * carrier)");
    if (subcarriers < 1)
        throw std::invalid_argument("WidebandConfig: need at least one subcarrier");
    if (noise < 0.0)
        throw std::invalid_argument("WidebandConfig: noise variance must be nonnegative");
}

CVecd channel_at(const UserChannel& user, double f_hz, const ArrayConfig& cfg,
                 const WidebandConfig& wcfg)
{
    CVecd h = CVecd::Zero(cfg.n_antennas);
    for (const PathRecord& p : user.paths) {
        if (p.gain == std::complex<double>(0.0, 0.0))
            continue;
        const double omega = spatial_frequency_at(p.omega_ref(), f_hz, wcfg.carrier_hz);
        const std::complex<double> rot =
            std::polar(1.0, -kTwoPi * (wcfg.carrier_hz + f_hz) * p.delay_s);
        const std::complex<double> c = p.gain * rot;
        for (int k = 0; k < cfg.n_antennas; ++k)
            h(k) += c * std::polar(1.0, omega * k);
    }
    return h;
}

namespace {

constexpr const char* kPathHeader = "user_id,path_id,gain_db,phase_rad,delay_ns,aoa_deg";

std::string trim(std::string_view s)
{
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b])))
        ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1])))
        --e;
    return std::string(s.substr(b, e - b));
}

std::vector<std::string> split_csv(const std::string& line)
{
    std::vector<std::string> out;
    std::size_t pos = 0;
    for (;;) {
        const std::size_t comma = line.find(',', pos);
        if (comma == std::string::npos) {
            out.push_back(trim(std::string_view(line).substr(pos)));
            return out;
        }
        out.push_back(trim(std::string_view(line).substr(pos, comma - pos)));
        pos = comma + 1;
    }
}

[[noreturn]] void fail_at(const std::filesystem::path& file, int line, const std::string& what)
{
    throw std::invalid_argument(file.string() + ":" + std::to_string(line) + ": " + what);
}

double parse_double(const std::string& s, const std::filesystem::path& file, int line,
                    const char* field)
{
    double v = 0.0;
    const char* b = s.data();
    const char* e = s.data() + s.size();
    const auto res = std::from_chars(b, e, v);
    if (res.ec != std::errc{} || res.ptr != e)
        fail_at(file, line, std::string("cannot parse ") + field + " from '" + s + "'");
    return v;
}

long parse_int(const std::string& s, const std::filesystem::path& file, int line,
               const char* field)
{
    long v = 0;
    const char* b = s.data();
    const char* e = s.data() + s.size();
    const auto res = std::from_chars(b, e, v);
    if (res.ec != std::errc{} || res.ptr != e)
        fail_at(file, line, std::string("cannot parse ") + field + " from '" + s + "'");
    return v;
}

} // namespace

std::vector<UserChannel> load_paths(const std::filesystem::path& file)
{
    std::ifstream in(file);
    if (!in)
        throw std::invalid_argument("load_paths: cannot open " + file.string());

    struct Row {
        long user_id;
        long path_id;
        PathRecord rec;
    };
    std::vector<Row> rows;

    std::string line;
    int line_no = 0;
    bool saw_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped.front() == '#')
            continue;
        if (!saw_header) {
            std::string compact;
            for (char c : stripped)
                if (!std::isspace(static_cast<unsigned char>(c)))
                    compact.push_back(c);
            if (compact != kPathHeader)
                fail_at(file, line_no,
                        std::string("expected header '") + kPathHeader + "', got '" + stripped +
                            "'");
            saw_header = true;
            continue;
        }
        const std::vector<std::string> f = split_csv(stripped);
        if (f.size() != 6)
            fail_at(file, line_no,
                    "expected 6 fields, got " + std::to_string(f.size()));
        Row r;
        r.user_id = parse_int(f[0], file, line_no, "user_id");
        r.path_id = parse_int(f[1], file, line_no, "path_id");
        const double gain_db = parse_double(f[2], file, line_no, "gain_db");
        const double phase = parse_double(f[3], file, line_no, "phase_rad");
        const double delay_ns = parse_double(f[4], file, line_no, "delay_ns");
        const double aoa_deg = parse_double(f[5], file, line_no, "aoa_deg");
        if (delay_ns < 0.0)
            fail_at(file, line_no, "delay_ns must be nonnegative");
        if (std::abs(aoa_deg) > 90.0)
            fail_at(file, line_no, "aoa_deg must lie in [-90, 90]");
        r.rec.gain = std::polar(std::pow(10.0, gain_db / 20.0), phase);
        r.rec.delay_s = delay_ns * 1e-9;
        r.rec.aoa_rad = aoa_deg * kPi / 180.0;
        rows.push_back(r);
    }
    if (!saw_header)
        fail_at(file, line_no == 0 ? 1 : line_no, "missing header line");
    if (rows.empty())
        fail_at(file, line_no, "file contains no path records");

    std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
        if (a.user_id != b.user_id)
            return a.user_id < b.user_id;
        return a.path_id < b.path_id;
    });

    std::vector<UserChannel> users;
    for (const Row& r : rows) {
        if (users.empty() || users.back().user_id != static_cast<int>(r.user_id)) {
            UserChannel u;
            u.user_id = static_cast<int>(r.user_id);
            users.push_back(u);
        }
        users.back().paths.push_back(r.rec);
    }
    return users;
}

void save_paths(const std::filesystem::path& file, const std::vector<UserChannel>& users)
{
    std::ofstream out(file);
    if (!out)
        throw std::invalid_argument("save_paths: cannot open " + file.string() + " for writing");
    out << kPathHeader << "\n";
    char buf[256];
    for (const UserChannel& u : users) {
        for (std::size_t p = 0; p < u.paths.size(); ++p) {
            const PathRecord& r = u.paths[p];
            const double mag = std::abs(r.gain);
            const double gain_db = mag > 0.0 ? 20.0 * std::log10(mag)
                                             : -std::numeric_limits<double>::infinity();
            std::snprintf(buf, sizeof(buf), "%d,%zu,%.17g,%.17g,%.17g,%.17g", u.user_id, p,
                          gain_db, std::arg(r.gain), r.delay_s * 1e9,
                          r.aoa_rad * 180.0 / kPi);
            out << buf << "\n";
        }
    }
    if (!out)
        throw std::runtime_error("save_paths: write to " + file.string() + " failed");
}

namespace {

PathRecord draw_secondary(Rng& rng, double dominant_mag, const SynthOptions& opt)
{
    PathRecord p;
    const double att_lo = opt.dominant_margin_db;
    const double att_hi = std::max(40.0, opt.dominant_margin_db);
    const double att_db = rng.uniform(att_lo, att_hi);
    const double phase = rng.uniform(0.0, kTwoPi);
    const double aoa = rng.uniform(-opt.fov_rad, opt.fov_rad);
    const double delay = rng.uniform(0.0, opt.delay_spread_s);
    if (std::isfinite(opt.dominant_margin_db))
        p.gain = std::polar(dominant_mag * std::pow(10.0, -att_db / 20.0), phase);
    else
        p.gain = {0.0, 0.0};
    p.delay_s = delay;
    p.aoa_rad = aoa;
    return p;
}

UserChannel synth_user(Rng& rng, int user_id, double dominant_aoa, const SynthOptions& opt)
{
    if (opt.paths_min < 1 || opt.paths_max < opt.paths_min)
        throw std::invalid_argument("synth_multipath: invalid path count range");
    if (opt.fov_rad <= 0.0 || opt.fov_rad > 0.5 * kPi)
        throw std::invalid_argument("synth_multipath: field of view must lie in (0, pi/2]");
    UserChannel u;
    u.user_id = user_id;
    const int n_paths =
        opt.paths_min + static_cast<int>(rng.uniform_below(
                            static_cast<std::uint64_t>(opt.paths_max - opt.paths_min + 1)));
    u.paths.reserve(static_cast<std::size_t>(n_paths));

    PathRecord dom;
    dom.gain = std::polar(1.0, rng.uniform(0.0, kTwoPi));
    dom.delay_s = 0.0; // first arrival carries the dominant energy
    dom.aoa_rad = dominant_aoa;
    u.paths.push_back(dom);

    for (int p = 1; p < n_paths; ++p)
        u.paths.push_back(draw_secondary(rng, 1.0, opt));
    return u;
}

} // namespace

std::vector<UserChannel> synth_multipath(Rng& rng, int n_users, const SynthOptions& opt)
{
    if (n_users < 1)
        throw std::invalid_argument("synth_multipath: need at least one user");
    std::vector<UserChannel> users;
    users.reserve(static_cast<std::size_t>(n_users));
    for (int k = 0; k < n_users; ++k)
        users.push_back(synth_user(rng, k, rng.uniform(-opt.fov_rad, opt.fov_rad), opt));
    return users;
}

std::vector<UserChannel> synth_multipath_at(Rng& rng, const std::vector<double>& dominant_omegas,
                                            const SynthOptions& opt)
{
    std::vector<UserChannel> users;
    users.reserve(dominant_omegas.size());
    for (std::size_t k = 0; k < dominant_omegas.size(); ++k) {
        const double s = std::clamp(dominant_omegas[k] / kPi, -1.0, 1.0);
        users.push_back(synth_user(rng, static_cast<int>(k), std::asin(s), opt));
    }
    return users;
}

void normalize_dominant_snr(std::vector<UserChannel>& users, double target_snr_db,
                            const ArrayConfig& cfg, double noise_var)
{
    if (noise_var <= 0.0)
        throw std::invalid_argument("normalize_dominant_snr: noise variance must be positive");
    const double target = db_to_linear(target_snr_db);
    for (UserChannel& u : users) {
        const double dom = std::abs(u.dominant().gain);
        if (dom == 0.0)
            throw std::invalid_argument("normalize_dominant_snr: dominant path has zero gain");
        const double scale = std::sqrt(target * noise_var / (cfg.n_antennas * dom * dom));
        for (PathRecord& p : u.paths)
            p.gain *= scale;
    }
}

} // namespace beamspace
