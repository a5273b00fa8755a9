// SPDX-License-Identifier: Apache-2.0
//
// Copyright (C) 2026 The semopt authors
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

#ifndef SEMOPT_SCENARIO_HPP
#define SEMOPT_SCENARIO_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "errors.hpp"

namespace semopt {

using ChannelMatrix = Eigen::MatrixXcd;

inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double watts_to_dbm(double watts) { return 10.0 * std::log10(watts) + 30.0; }

/// Fixed data of one downlink instance. Row k of `channels` is h_k^H, so the
/// effective gain of beam w at user k is channels.row(k) * w.
struct Scenario {
    int num_users = 0;
    int num_antennas = 0;
    double bandwidth_hz = 0.0;
    double noise_power_w = 0.0;
    double max_power_w = 0.0;
    double comp_power_coeff = 0.0;             // W per unit computation load
    std::vector<double> min_semantic_rate_bps; // c_k^min
    std::vector<double> min_ratio;             // rho_k^min
    ChannelMatrix channels;

    std::complex<double> gain(int user, const Eigen::VectorXcd& beam) const
    {
        return channels.row(user).transpose().cwiseProduct(beam).sum();
    }
};

/// I.i.d. CN(0,1) entries. Identical (k, m, seed) give bit-identical output.
inline ChannelMatrix generate_channels(int k, int m, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
    ChannelMatrix h(k, m);
    for (int row = 0; row < k; ++row)
        for (int col = 0; col < m; ++col) {
            const double re = normal(rng);
            const double im = normal(rng);
            h(row, col) = {re, im};
        }
    return h;
}

/// Scales row k by 10^(-path_loss_db[k]/20). Empty vector is a no-op.
inline void apply_path_loss(ChannelMatrix& h, const std::vector<double>& path_loss_db)
{
    for (std::size_t k = 0; k < path_loss_db.size() && static_cast<Eigen::Index>(k) < h.rows(); ++k)
        h.row(static_cast<Eigen::Index>(k)) *= std::pow(10.0, -path_loss_db[k] / 20.0);
}

/// Returns `s` unchanged when every invariant holds, otherwise throws a
/// ValidationError naming each violated field.
inline Scenario validate_scenario(Scenario s)
{
    std::vector<std::string> v;
    const bool dims_ok = s.num_users >= 1 && s.num_antennas >= 1;
    if (s.num_users < 1)
        v.push_back("num_users: must be >= 1");
    if (s.num_antennas < 1)
        v.push_back("num_antennas: must be >= 1");
    if (!(s.bandwidth_hz > 0.0) || !std::isfinite(s.bandwidth_hz))
        v.push_back("bandwidth_hz: must be positive");
    if (!(s.noise_power_w > 0.0) || !std::isfinite(s.noise_power_w))
        v.push_back("noise_power_w: must be positive");
    if (!(s.max_power_w > 0.0) || !std::isfinite(s.max_power_w))
        v.push_back("max_power_w: must be positive");
    if (!(s.comp_power_coeff >= 0.0) || !std::isfinite(s.comp_power_coeff))
        v.push_back("comp_power_coeff: must be nonnegative");

    const auto k = static_cast<std::size_t>(std::max(s.num_users, 0));
    if (s.min_semantic_rate_bps.size() != k)
        v.push_back("min_semantic_rate_bps: length must equal num_users");
    for (double c : s.min_semantic_rate_bps)
        if (!(c >= 0.0) || !std::isfinite(c)) {
            v.push_back("min_semantic_rate_bps: entries must be finite and nonnegative");
            break;
        }
    if (s.min_ratio.size() != k)
        v.push_back("min_ratio: length must equal num_users");
    for (double r : s.min_ratio)
        if (!(r > 0.0 && r <= 1.0)) {
            v.push_back("min_ratio: entries must lie in (0, 1]");
            break;
        }

    if (dims_ok) {
        if (s.channels.rows() != s.num_users || s.channels.cols() != s.num_antennas)
            v.push_back("channels: shape must be num_users x num_antennas");
        else
            for (int row = 0; row < s.num_users; ++row)
                if (!(s.channels.row(row).norm() > 0.0) || !s.channels.row(row).allFinite()) {
                    v.push_back("channels: row " + std::to_string(row) + " has zero or non-finite norm");
                    break;
                }
    }

    if (!v.empty())
        throw ValidationError(std::move(v));
    return s;
}

} // namespace semopt

#endif // SEMOPT_SCENARIO_HPP
