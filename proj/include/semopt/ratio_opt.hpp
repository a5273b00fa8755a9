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

#ifndef SEMOPT_RATIO_OPT_HPP
#define SEMOPT_RATIO_OPT_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "semopt/comp_load.hpp"
#include "semopt/errors.hpp"
#include "semopt/scenario.hpp"

namespace semopt {

/// Segment index (1..D) chosen for each user.
using SegmentAssignment = std::vector<int>;

namespace detail {

inline double rate_cap(const Scenario& s, double rate, int k)
{
    const double cmin = s.min_semantic_rate_bps[static_cast<std::size_t>(k)];
    return cmin > 0.0 ? rate / cmin : std::numeric_limits<double>::infinity();
}

inline double ratio_floor(const Scenario& s, const CompLoadSpec& spec, int d, int k)
{
    return std::max(spec.floor(d), s.min_ratio[static_cast<std::size_t>(k)]);
}

inline void check_rates(const Scenario& s, const std::vector<double>& rates)
{
    if (static_cast<int>(rates.size()) != s.num_users)
        throw std::invalid_argument("rate count differs from user count");
}

// Advances an odometer over {1..D}^K with the last user varying fastest.
inline bool next_assignment(SegmentAssignment& a, int segments)
{
    for (auto i = a.size(); i-- > 0;) {
        if (a[i] < segments) {
            ++a[i];
            return true;
        }
        a[i] = 1;
    }
    return false;
}

} // namespace detail

/// Exhaustive search over all D^K assignments, scoring each with every user at
/// its segment midpoint: maximize sum R_k / mid_{D_k} subject to power at the
/// midpoints, mid_{D_k} <= R_k / c_k^min, and the segment meeting [rho_k^min, 1].
/// Ties keep the lexicographically smallest assignment.
inline SegmentAssignment select_segments(const Scenario& s, const CompLoadSpec& spec, const std::vector<double>& rates,
                                         double transmit_power)
{
    detail::check_rates(s, rates);
    if (!(transmit_power < s.max_power_w))
        throw InfeasibleError("segment", {"total_power"}, "transmit power leaves no computation budget");
    const int k_users = s.num_users;
    const int segments = spec.segments();
    const std::vector<double> mid = midpoints(spec);

    SegmentAssignment a(static_cast<std::size_t>(k_users), 1), best;
    double best_value = -std::numeric_limits<double>::infinity();
    bool rejected_ratio = false, rejected_rate = false, rejected_power = false;
    do {
        bool ok = true;
        double load = 0.0, value = 0.0;
        for (int k = 0; k < k_users && ok; ++k) {
            const int d = a[static_cast<std::size_t>(k)];
            const double m = mid[static_cast<std::size_t>(d - 1)];
            if (spec.ceiling(d) < s.min_ratio[static_cast<std::size_t>(k)]) {
                ok = false;
                rejected_ratio = true;
            } else if (m > detail::rate_cap(s, rates[static_cast<std::size_t>(k)], k)) {
                ok = false;
                rejected_rate = true;
            }
            load += spec.segment_load(d, m);
            value += rates[static_cast<std::size_t>(k)] / m;
        }
        if (!ok)
            continue;
        if (transmit_power + s.comp_power_coeff * load > s.max_power_w) {
            rejected_power = true;
            continue;
        }
        if (value > best_value) {
            best_value = value;
            best = a;
        }
    } while (detail::next_assignment(a, segments));

    if (best.empty()) {
        std::vector<std::string> binding;
        if (rejected_ratio)
            binding.emplace_back("ratio_lower");
        if (rejected_rate)
            binding.emplace_back("min_semantic_rate");
        if (rejected_power)
            binding.emplace_back("total_power");
        throw InfeasibleError("segment", binding, "no segment assignment satisfies the midpoint constraints");
    }
    return best;
}

/// Largest admissible ratio in each user's segment: min(R_k / c_k^min, C_{D_k - 1})
/// clamped into [max(C_{D_k}, rho_k^min), C_{D_k - 1}].
inline std::vector<double> init_ratios(const Scenario& s, const CompLoadSpec& spec, const SegmentAssignment& assign,
                                       const std::vector<double>& rates)
{
    detail::check_rates(s, rates);
    if (static_cast<int>(assign.size()) != s.num_users)
        throw std::invalid_argument("init_ratios: assignment size differs from user count");
    std::vector<double> rho(assign.size());
    std::vector<std::string> bad;
    for (int k = 0; k < s.num_users; ++k) {
        const auto i = static_cast<std::size_t>(k);
        const int d = assign[i];
        if (d < 1 || d > spec.segments())
            throw std::invalid_argument("init_ratios: segment index out of range");
        const double lo = detail::ratio_floor(s, spec, d, k);
        const double hi = spec.ceiling(d);
        const double cap = std::min(detail::rate_cap(s, rates[i], k), hi);
        if (cap < lo || hi < lo)
            bad.push_back((hi < lo ? "ratio_lower[" : "min_semantic_rate[") + std::to_string(k) + "]");
        rho[i] = std::clamp(cap, std::min(lo, hi), hi);
    }
    if (!bad.empty())
        throw InfeasibleError("greedy", bad, "empty ratio interval at initialization");
    return rho;
}

/// Power left for user k's computation with every other user's load charged:
/// P^max - transmit - p0 sum_{i != k} (A_{D_i} rho_i + B_{D_i}). May be negative.
inline double remaining_power(const Scenario& s, const CompLoadSpec& spec, const SegmentAssignment& assign,
                              const std::vector<double>& rho, double transmit_power, int k)
{
    double load = 0.0;
    for (std::size_t i = 0; i < rho.size() && i < assign.size(); ++i)
        if (i != static_cast<std::size_t>(k))
            load += spec.segment_load(assign[i], rho[i]);
    return s.max_power_w - transmit_power - s.comp_power_coeff * load;
}

inline double ratio_objective(const std::vector<double>& rates, const std::vector<double>& rho)
{
    double v = 0.0;
    for (std::size_t k = 0; k < rates.size(); ++k)
        v += rates[k] / rho[k];
    return v;
}

struct GreedyStep {
    int user = 0;
    std::vector<double> ratios_before; // every ratio when the user's turn came
    double remaining_power = 0.0;
    double chosen = 0.0;
};

struct GreedyResult {
    SegmentAssignment assignment;
    std::vector<double> initial;
    std::vector<double> ratios;
    std::vector<int> order;
    std::vector<GreedyStep> steps;
    double objective = 0.0; // sum R_k / rho_k
};

/// Visits users by descending R_k (ties by index) and gives each the smallest
/// ratio in its segment that the remaining power affords, never exceeding the
/// initialization value.
inline GreedyResult greedy_ratios(const Scenario& s, const CompLoadSpec& spec, const SegmentAssignment& assign,
                                  const std::vector<double>& rates, double transmit_power)
{
    GreedyResult g;
    g.assignment = assign;
    g.initial = init_ratios(s, spec, assign, rates);
    std::vector<double> rho = g.initial;
    double load = 0.0;
    for (int k = 0; k < s.num_users; ++k)
        load += spec.segment_load(assign[static_cast<std::size_t>(k)], rho[static_cast<std::size_t>(k)]);
    if (transmit_power + s.comp_power_coeff * load > s.max_power_w * (1.0 + 1e-12))
        throw InfeasibleError("greedy", {"total_power"}, "initial ratios exceed the power budget");

    g.order.resize(static_cast<std::size_t>(s.num_users));
    std::iota(g.order.begin(), g.order.end(), 0);
    std::stable_sort(g.order.begin(), g.order.end(), [&](int a, int b) {
        return rates[static_cast<std::size_t>(a)] > rates[static_cast<std::size_t>(b)];
    });
    for (int k : g.order) {
        const auto i = static_cast<std::size_t>(k);
        const int d = assign[i];
        GreedyStep step;
        step.user = k;
        step.ratios_before = rho;
        step.remaining_power = remaining_power(s, spec, assign, rho, transmit_power, k);
        const double lo = detail::ratio_floor(s, spec, d, k);
        const double p0 = s.comp_power_coeff;
        double r;
        if (p0 * spec.segment_load(d, lo) <= step.remaining_power)
            r = lo;
        else
            r = (step.remaining_power / p0 - spec.intercept(d)) / spec.slope(d);
        rho[i] = std::clamp(r, lo, g.initial[i]);
        step.chosen = rho[i];
        g.steps.push_back(std::move(step));
    }
    g.ratios = rho;
    g.objective = ratio_objective(rates, rho);
    return g;
}

struct OracleResult {
    bool feasible = false;
    SegmentAssignment assignment;
    std::vector<double> ratios;
    double objective = -std::numeric_limits<double>::infinity();
    long long evaluations = 0;
};

/// Exhaustive reference for the ratio block with the exact power constraint.
/// Enumerates every assignment (or only `restrict_to`), grids users 0..K-2 over
/// their admissible intervals at `grid_step` (endpoints included), and places
/// the last user at the smallest affordable ratio of its interval: with the
/// others fixed both the objective and the load decrease in that ratio, so this
/// is its exact optimum.
inline OracleResult brute_force_oracle(const Scenario& s, const CompLoadSpec& spec, const std::vector<double>& rates,
                                       double transmit_power, double grid_step,
                                       const SegmentAssignment* restrict_to = nullptr)
{
    detail::check_rates(s, rates);
    if (!(grid_step > 0.0))
        throw std::invalid_argument("brute_force_oracle: grid_step must be positive");
    const int k_users = s.num_users;
    const int last = k_users - 1;
    OracleResult best;
    SegmentAssignment a = restrict_to ? *restrict_to : SegmentAssignment(static_cast<std::size_t>(k_users), 1);
    do {
        std::vector<double> lo(static_cast<std::size_t>(k_users)), hi(lo.size());
        bool ok = true;
        for (int k = 0; k < k_users; ++k) {
            const auto i = static_cast<std::size_t>(k);
            lo[i] = detail::ratio_floor(s, spec, a[i], k);
            hi[i] = std::min(spec.ceiling(a[i]), detail::rate_cap(s, rates[i], k));
            ok = ok && lo[i] <= hi[i];
        }
        if (!ok)
            continue;
        std::vector<int> steps(lo.size());
        for (std::size_t i = 0; i < lo.size(); ++i)
            steps[i] = static_cast<int>(std::ceil((hi[i] - lo[i]) / grid_step - 1e-9));
        std::vector<int> idx(lo.size(), 0);
        std::vector<double> rho(lo.size());
        const int dl = a[static_cast<std::size_t>(last)];
        while (true) {
            double load = 0.0, value = 0.0;
            for (int k = 0; k < last; ++k) {
                const auto i = static_cast<std::size_t>(k);
                rho[i] = idx[i] >= steps[i] ? hi[i] : lo[i] + idx[i] * grid_step;
                load += spec.segment_load(a[i], rho[i]);
                value += rates[i] / rho[i];
            }
            const auto li = static_cast<std::size_t>(last);
            const double budget = s.max_power_w - transmit_power - s.comp_power_coeff * load;
            double r = lo[li];
            if (s.comp_power_coeff * spec.segment_load(dl, r) > budget)
                r = (budget / s.comp_power_coeff - spec.intercept(dl)) / spec.slope(dl);
            ++best.evaluations;
            if (r <= hi[li] && r >= lo[li]) {
                rho[li] = r;
                value += rates[li] / r;
                if (value > best.objective) {
                    best.feasible = true;
                    best.objective = value;
                    best.assignment = a;
                    best.ratios = rho;
                }
            }
            int k = last - 1;
            for (; k >= 0; --k) {
                const auto i = static_cast<std::size_t>(k);
                if (idx[i] < steps[i]) {
                    ++idx[i];
                    break;
                }
                idx[i] = 0;
            }
            if (k < 0)
                break;
        }
    } while (!restrict_to && detail::next_assignment(a, spec.segments()));
    return best;
}

} // namespace semopt

#endif // SEMOPT_RATIO_OPT_HPP
