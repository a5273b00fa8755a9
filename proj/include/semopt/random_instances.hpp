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

#ifndef SEMOPT_RANDOM_INSTANCES_HPP
#define SEMOPT_RANDOM_INSTANCES_HPP

#include <algorithm>
#include <random>
#include <vector>

#include "comp_load.hpp"
#include "scenario.hpp"

namespace semopt {

/// Draws a valid load function with 1..max_segments segments. Intercepts are
/// solved from the continuity conditions, so the result always validates.
template <typename Rng>
CompLoadSpec random_comp_load(Rng& rng, int max_segments = 4)
{
    std::uniform_int_distribution<int> seg(1, max_segments);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const int d = seg(rng);

    std::vector<double> c;
    while (static_cast<int>(c.size()) < d) {
        c.clear();
        for (int i = 0; i < d; ++i)
            c.push_back(0.05 + 0.9 * u(rng));
        std::sort(c.begin(), c.end(), std::greater<>());
        for (std::size_t i = 1; i < c.size(); ++i)
            if (c[i - 1] - c[i] < 1e-3) {
                c.clear();
                break;
            }
    }

    CompLoadSpec spec;
    spec.boundaries = c;
    double magnitude = 0.2 + 1.8 * u(rng);
    for (int i = 0; i < d; ++i) {
        spec.slopes.push_back(-magnitude);
        magnitude *= 1.2 + 1.8 * u(rng);
    }
    spec.intercepts.push_back(-spec.slopes[0] + 0.01 + u(rng));
    for (int i = 1; i < d; ++i) {
        const double ci = c[static_cast<std::size_t>(i - 1)];
        const double at_boundary = spec.slopes[static_cast<std::size_t>(i - 1)] * ci + spec.intercepts.back();
        spec.intercepts.push_back(at_boundary - spec.slopes[static_cast<std::size_t>(i)] * ci);
    }
    return spec;
}

/// Fixed-rate input of the ratio block.
struct RatioInstance {
    Scenario scenario;
    CompLoadSpec spec;
    std::vector<double> rates; // R_k, bit/s
    double transmit_power = 0.5;
};

/// K in 1..3, D in 1..max_segments, R_k uniform in [1, 10] Mbit/s, p0 = 1,
/// rho_min = C_D, c_min = 0, transmit 0.5 W, and a computation budget uniform
/// between K f(mid_1) and K f(mid_D), so some midpoint assignment is
/// affordable. Only the fields the ratio block reads are set.
template <typename Rng>
RatioInstance random_ratio_instance(Rng& rng, int max_segments = 3)
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    RatioInstance r;
    const int k = 1 + static_cast<int>(rng() % 3);
    r.spec = random_comp_load(rng, max_segments);
    Scenario& s = r.scenario;
    s.num_users = k;
    s.num_antennas = 1;
    s.bandwidth_hz = 1.0;
    s.noise_power_w = 1.0;
    s.comp_power_coeff = 1.0;
    s.min_semantic_rate_bps.assign(static_cast<std::size_t>(k), 0.0);
    s.min_ratio.assign(static_cast<std::size_t>(k), r.spec.domain_floor());
    s.channels = ChannelMatrix::Ones(k, 1);
    for (int i = 0; i < k; ++i)
        r.rates.push_back(1e6 * (1.0 + 9.0 * u(rng)));
    const auto mid = midpoints(r.spec);
    const double lo = load_of(r.spec, mid.front()), hi = load_of(r.spec, mid.back());
    s.max_power_w = r.transmit_power + k * (lo + u(rng) * (hi - lo));
    return r;
}

} // namespace semopt

#endif // SEMOPT_RANDOM_INSTANCES_HPP
