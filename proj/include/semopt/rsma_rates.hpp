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

#ifndef SEMOPT_RSMA_RATES_HPP
#define SEMOPT_RSMA_RATES_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "comp_load.hpp"
#include "scenario.hpp"

namespace semopt {

/// Candidate solution. Users are indexed 0..K-1 throughout the library.
struct Allocation {
    Eigen::VectorXcd common_beam;     // w_0, length M
    Eigen::MatrixXcd private_beams;   // M x K, column k is w_k
    std::vector<double> rate_split;   // a_k in bit/s
    std::vector<double> ratios;       // rho_k

    double transmit_power() const { return common_beam.squaredNorm() + private_beams.squaredNorm(); }
};

struct PowerUsage {
    double transmit_w = 0.0;
    double computation_w = 0.0;
    double total_w = 0.0;
};

struct RateReport {
    std::vector<double> common_rates;
    double min_common_rate = 0.0;
    std::vector<double> private_rates;
    std::vector<double> semantic_rates;
    double transmit_power_w = 0.0;
    double computation_power_w = 0.0;
    double total_power_w = 0.0;

    double sum_semantic_rate() const
    {
        double s = 0.0;
        for (double c : semantic_rates)
            s += c;
        return s;
    }
};

/// Whether the computation power p0 * sum f(rho_k) is charged against the
/// budget. The non-semantic baseline waives it.
enum class PowerAccounting { with_computation, transmit_only };

inline void check_dimensions(const Scenario& s, const Allocation& a)
{
    const auto k = static_cast<std::size_t>(s.num_users);
    if (a.common_beam.size() != s.num_antennas || a.private_beams.rows() != s.num_antennas
        || a.private_beams.cols() != s.num_users || a.rate_split.size() != k || a.ratios.size() != k)
        throw std::invalid_argument("allocation dimensions do not match scenario");
}

namespace detail {

inline double received_power(const Scenario& s, int user, const Eigen::VectorXcd& beam)
{
    return std::norm(s.gain(user, beam));
}

inline double private_power_sum(const Scenario& s, const Allocation& a, int user)
{
    double total = 0.0;
    for (int i = 0; i < s.num_users; ++i)
        total += received_power(s, user, a.private_beams.col(i));
    return total;
}

} // namespace detail

/// Rate at which `user` decodes the common stream, treating all private
/// streams as interference.
inline double common_rate(const Scenario& s, const Allocation& a, int user)
{
    check_dimensions(s, a);
    const double signal = detail::received_power(s, user, a.common_beam);
    const double interference = detail::private_power_sum(s, a, user) + s.noise_power_w;
    return s.bandwidth_hz * std::log2(1.0 + signal / interference);
}

/// Rate of the user's own private stream after the common stream is removed.
inline double private_rate(const Scenario& s, const Allocation& a, int user)
{
    check_dimensions(s, a);
    const double signal = detail::received_power(s, user, a.private_beams.col(user));
    double interference = s.noise_power_w;
    for (int i = 0; i < s.num_users; ++i)
        if (i != user)
            interference += detail::received_power(s, user, a.private_beams.col(i));
    return s.bandwidth_hz * std::log2(1.0 + signal / interference);
}

inline double min_common_rate(const Scenario& s, const Allocation& a)
{
    double r = std::numeric_limits<double>::infinity();
    for (int k = 0; k < s.num_users; ++k)
        r = std::min(r, common_rate(s, a, k));
    return r;
}

inline std::vector<double> semantic_rates(const Scenario& s, const Allocation& a)
{
    check_dimensions(s, a);
    std::vector<double> c(static_cast<std::size_t>(s.num_users));
    for (int k = 0; k < s.num_users; ++k) {
        const double rho = a.ratios[static_cast<std::size_t>(k)];
        if (!(rho > 0.0))
            throw std::domain_error("semantic rate needs a positive compression ratio");
        c[static_cast<std::size_t>(k)] = (a.rate_split[static_cast<std::size_t>(k)] + private_rate(s, a, k)) / rho;
    }
    return c;
}

inline PowerUsage power_usage(const Scenario& s, const CompLoadSpec& spec, const Allocation& a,
                              PowerAccounting accounting = PowerAccounting::with_computation)
{
    check_dimensions(s, a);
    PowerUsage p;
    p.transmit_w = a.transmit_power();
    if (accounting == PowerAccounting::with_computation) {
        double load = 0.0;
        for (double rho : a.ratios)
            load += load_of(spec, rho);
        p.computation_w = s.comp_power_coeff * load;
    }
    p.total_w = p.transmit_w + p.computation_w;
    return p;
}

inline RateReport evaluate_rates(const Scenario& s, const CompLoadSpec& spec, const Allocation& a,
                                 PowerAccounting accounting = PowerAccounting::with_computation)
{
    RateReport r;
    for (int k = 0; k < s.num_users; ++k) {
        r.common_rates.push_back(common_rate(s, a, k));
        r.private_rates.push_back(private_rate(s, a, k));
    }
    r.min_common_rate = *std::min_element(r.common_rates.begin(), r.common_rates.end());
    r.semantic_rates = semantic_rates(s, a);
    const PowerUsage p = power_usage(s, spec, a, accounting);
    r.transmit_power_w = p.transmit_w;
    r.computation_power_w = p.computation_w;
    r.total_power_w = p.total_w;
    return r;
}

struct ConstraintSlack {
    std::string label;
    double slack = 0.0; // >= 0 means satisfied
    double scale = 1.0;
};

struct FeasibilityReport {
    bool feasible = true;
    std::vector<ConstraintSlack> slacks;

    std::vector<std::string> violated(double tol) const
    {
        std::vector<std::string> out;
        for (const auto& c : slacks)
            if (!(c.slack >= -tol * c.scale))
                out.push_back(c.label);
        return out;
    }
    bool violates(const std::string& label_prefix, double tol) const
    {
        for (const auto& l : violated(tol))
            if (l.rfind(label_prefix, 0) == 0)
                return true;
        return false;
    }
};

struct FeasibilityOptions {
    double tol = 1e-8; // relative: power slacks scaled by P^max, rate slacks by B
    PowerAccounting accounting = PowerAccounting::with_computation;
};

/// Evaluates every constraint of the joint problem. Infeasibility is reported
/// through the verdict, never thrown.
inline FeasibilityReport check_feasibility(const Scenario& s, const CompLoadSpec& spec, const Allocation& a,
                                           const FeasibilityOptions& opts = {})
{
    check_dimensions(s, a);
    FeasibilityReport rep;
    const double bw = s.bandwidth_hz;
    const auto user_label = [](const char* name, int k) { return std::string(name) + "[" + std::to_string(k) + "]"; };

    bool ratios_in_domain = true;
    for (double rho : a.ratios)
        ratios_in_domain = ratios_in_domain && rho >= spec.domain_floor() && rho <= 1.0;

    double power_slack = -std::numeric_limits<double>::infinity();
    if (ratios_in_domain || opts.accounting == PowerAccounting::transmit_only)
        power_slack = s.max_power_w - power_usage(s, spec, a, opts.accounting).total_w;
    rep.slacks.push_back({"total_power", power_slack, s.max_power_w});

    double split_sum = 0.0;
    for (double x : a.rate_split)
        split_sum += x;
    rep.slacks.push_back({"common_rate", min_common_rate(s, a) - split_sum, bw});

    for (int k = 0; k < s.num_users; ++k)
        rep.slacks.push_back({user_label("rate_split_nonneg", k), a.rate_split[static_cast<std::size_t>(k)], bw});
    for (int k = 0; k < s.num_users; ++k) {
        const double rho = a.ratios[static_cast<std::size_t>(k)];
        rep.slacks.push_back({user_label("ratio_lower", k), rho - s.min_ratio[static_cast<std::size_t>(k)], 1.0});
        rep.slacks.push_back({user_label("ratio_upper", k), 1.0 - rho, 1.0});
    }
    bool ratios_positive = true;
    for (double rho : a.ratios)
        ratios_positive = ratios_positive && rho > 0.0;
    if (ratios_positive) {
        const auto c = semantic_rates(s, a);
        for (int k = 0; k < s.num_users; ++k)
            rep.slacks.push_back({user_label("min_semantic_rate", k),
                                  c[static_cast<std::size_t>(k)] - s.min_semantic_rate_bps[static_cast<std::size_t>(k)],
                                  bw});
    } else {
        for (int k = 0; k < s.num_users; ++k)
            rep.slacks.push_back({user_label("min_semantic_rate", k), -std::numeric_limits<double>::infinity(), bw});
    }

    rep.feasible = rep.violated(opts.tol).empty();
    return rep;
}

} // namespace semopt

#endif // SEMOPT_RSMA_RATES_HPP
