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

#ifndef SEMOPT_COMP_LOAD_HPP
#define SEMOPT_COMP_LOAD_HPP

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "errors.hpp"

namespace semopt {

/// Piecewise-linear computation load f(rho) with D segments. Segments are
/// numbered 1..D; segment d covers (C_d, C_{d-1}] with C_0 = 1, and the last
/// segment also includes its floor C_D. On segment d, f(rho) = A_d rho + B_d.
struct CompLoadSpec {
    std::vector<double> slopes;     // A_1..A_D
    std::vector<double> intercepts; // B_1..B_D
    std::vector<double> boundaries; // C_1..C_D

    int segments() const { return static_cast<int>(boundaries.size()); }
    double slope(int d) const { return slopes.at(static_cast<std::size_t>(d - 1)); }
    double intercept(int d) const { return intercepts.at(static_cast<std::size_t>(d - 1)); }
    double floor(int d) const { return boundaries.at(static_cast<std::size_t>(d - 1)); }
    double ceiling(int d) const { return d == 1 ? 1.0 : boundaries.at(static_cast<std::size_t>(d - 2)); }
    double domain_floor() const { return boundaries.back(); }

    /// Load evaluated with segment d's linear piece (no domain check).
    double segment_load(int d, double rho) const { return slope(d) * rho + intercept(d); }
};

/// The three-segment reference function: C = (0.7, 0.45, 0.25),
/// A = (-1, -3, -8), B = (1.2, 2.6, 4.85).
inline CompLoadSpec default_comp_load()
{
    return {{-1.0, -3.0, -8.0}, {1.2, 2.6, 4.85}, {0.7, 0.45, 0.25}};
}

inline CompLoadSpec validate_spec(CompLoadSpec spec)
{
    std::vector<std::string> v;
    const std::size_t d = spec.boundaries.size();
    if (d == 0)
        v.push_back("boundaries: at least one segment required");
    if (spec.slopes.size() != d)
        v.push_back("slopes: length must equal number of boundaries");
    if (spec.intercepts.size() != d)
        v.push_back("intercepts: length must equal number of boundaries");
    if (!v.empty())
        throw ValidationError(std::move(v));

    for (double a : spec.slopes)
        if (!(a < 0.0) || !std::isfinite(a)) {
            v.push_back("slopes: all slopes must be strictly negative");
            break;
        }
    for (double b : spec.intercepts)
        if (!(b > 0.0) || !std::isfinite(b)) {
            v.push_back("intercepts: all intercepts must be strictly positive");
            break;
        }
    double prev = 1.0;
    for (double c : spec.boundaries) {
        if (!(c < prev) || !(c > 0.0)) {
            v.push_back("boundaries: must satisfy 1 > C_1 > ... > C_D > 0");
            break;
        }
        prev = c;
    }
    for (std::size_t i = 1; i < d; ++i)
        if (!(std::abs(spec.slopes[i]) > std::abs(spec.slopes[i - 1]))) {
            v.push_back("slopes: magnitudes must strictly increase with segment index");
            break;
        }
    if (v.empty()) {
        for (std::size_t i = 0; i + 1 < d; ++i) {
            const double c = spec.boundaries[i];
            const double left = spec.slopes[i] * c + spec.intercepts[i];
            const double right = spec.slopes[i + 1] * c + spec.intercepts[i + 1];
            const double scale = std::max({1.0, std::abs(left), std::abs(right)});
            if (std::abs(left - right) > 1e-12 * scale) {
                v.push_back("intercepts: discontinuity at boundary C_" + std::to_string(i + 1));
                break;
            }
        }
        // Decreasing, so nonnegativity on [C_D, 1] reduces to f(1) >= 0.
        if (spec.slopes[0] + spec.intercepts[0] < 0.0)
            v.push_back("intercepts: load must be nonnegative on [C_D, 1]");
    }
    if (!v.empty())
        throw ValidationError(std::move(v));
    return spec;
}

/// Segment hosting rho, using the upper-closed convention.
inline int segment_of(const CompLoadSpec& spec, double rho)
{
    if (!(rho >= spec.domain_floor() && rho <= 1.0))
        throw std::domain_error("compression ratio " + std::to_string(rho) + " outside [C_D, 1]");
    const int d_max = spec.segments();
    for (int d = 1; d < d_max; ++d)
        if (rho > spec.floor(d))
            return d;
    return d_max;
}

inline double load_of(const CompLoadSpec& spec, double rho)
{
    return spec.segment_load(segment_of(spec, rho), rho);
}

inline double power_of(const CompLoadSpec& spec, double rho, double p0)
{
    return p0 * load_of(spec, rho);
}

inline std::vector<double> midpoints(const CompLoadSpec& spec)
{
    std::vector<double> mid;
    mid.reserve(spec.boundaries.size());
    for (int d = 1; d <= spec.segments(); ++d)
        mid.push_back(0.5 * (spec.ceiling(d) + spec.floor(d)));
    return mid;
}

} // namespace semopt

#endif // SEMOPT_COMP_LOAD_HPP
