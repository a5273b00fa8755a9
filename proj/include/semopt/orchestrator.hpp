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

#ifndef SEMOPT_ORCHESTRATOR_HPP
#define SEMOPT_ORCHESTRATOR_HPP

#include <chrono>
#include <cmath>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "semopt/comp_load.hpp"
#include "semopt/errors.hpp"
#include "semopt/ratio_opt.hpp"
#include "semopt/rsma_rates.hpp"
#include "semopt/sca_beamforming.hpp"
#include "semopt/scenario.hpp"

namespace semopt {

enum class Scheme { psc_rsma, psc_sdma, non_semantic };

inline const char* to_string(Scheme s)
{
    switch (s) {
    case Scheme::psc_rsma: return "psc_rsma";
    case Scheme::psc_sdma: return "psc_sdma";
    case Scheme::non_semantic: return "non_semantic";
    }
    return "unknown";
}

inline Scheme scheme_from_string(const std::string& name)
{
    if (name == "psc_rsma")
        return Scheme::psc_rsma;
    if (name == "psc_sdma")
        return Scheme::psc_sdma;
    if (name == "non_semantic")
        return Scheme::non_semantic;
    throw std::invalid_argument("unknown scheme '" + name + "'");
}

/// How the alternating loop picks its first ratios.
///  unit:       rho = 1 for every user.
///  rate_proxy: the common ratio (raised to each user's rho_min) maximizing
///              sum_k R_k(P_avail(rho)) / rho_k, with R_k the interference-free
///              rate B log2(1 + |h_k|^2 P_avail / (K sigma^2)).
/// The transmit block always exhausts the budget the ratios leave it, so the
/// ratio block never finds spare power and the loop stays near its start; the
/// start therefore decides how much compression is used.
enum class InitialRatios { unit, rate_proxy };

struct OrchestratorOptions {
    double tol_outer = 1e-4;
    int max_outer = 20;
    InitialRatios initial_ratios = InitialRatios::rate_proxy;
    ScaOptions sca;
};

struct OuterIteration {
    int outer = 0;
    double objective_bps = 0.0;     // after the ratio block
    double sca_objective_bps = 0.0; // after the transmit block
    int sca_iterations = 0;
    bool ratios_updated = false;
    std::string note;
    double sca_time_ms = 0.0;
    double ratio_time_ms = 0.0;
};

struct PipelineResult {
    Scheme scheme = Scheme::psc_rsma;
    Allocation allocation;
    RateReport report;
    std::vector<OuterIteration> trace;
    std::vector<std::vector<ScaIteration>> sca_traces; // one per transmit block
    bool converged = false;

    double objective() const { return report.sum_semantic_rate(); }
};

/// Interference-free proxy used to choose the starting ratios.
inline std::vector<double> proxy_initial_ratios(const Scenario& s, const CompLoadSpec& spec)
{
    const double lowest = spec.domain_floor();
    std::vector<double> candidates;
    for (double r = 1.0; r > lowest; r -= 0.005)
        candidates.push_back(r);
    for (double c : spec.boundaries)
        candidates.push_back(c);
    for (double r : s.min_ratio)
        if (r >= lowest)
            candidates.push_back(r);

    const int k = s.num_users;
    const auto at = [&](double common) {
        std::vector<double> rho(static_cast<std::size_t>(k));
        for (std::size_t u = 0; u < rho.size(); ++u)
            rho[u] = std::max(common, s.min_ratio[u]);
        return rho;
    };
    double best_value = -1.0, best = 1.0;
    for (double common : candidates) {
        const std::vector<double> rho = at(common);
        double load = 0.0;
        for (double r : rho)
            load += load_of(spec, r);
        const double budget = s.max_power_w - s.comp_power_coeff * load;
        if (!(budget > 0.0))
            continue;
        double value = 0.0;
        bool ok = true;
        for (int u = 0; u < k; ++u) {
            const auto i = static_cast<std::size_t>(u);
            const double rate = s.bandwidth_hz
                * std::log2(1.0 + s.channels.row(u).squaredNorm() * budget / (k * s.noise_power_w));
            ok = ok && rate / rho[i] >= s.min_semantic_rate_bps[i];
            value += rate / rho[i];
        }
        // Strict improvement keeps the largest ratio among ties (cheapest start).
        if (ok && value > best_value) {
            best_value = value;
            best = common;
        }
    }
    return at(best);
}

/// Alternating optimization: transmit block (SCA at fixed ratios) then ratio
/// block (segment selection + greedy at fixed rates and beams). New ratios are
/// adopted only when they do not lower the sum semantic rate, so the outer
/// trace is monotone. Returns the best allocation seen.
inline PipelineResult alternate(const Scenario& s, const CompLoadSpec& spec, const OrchestratorOptions& opts = {},
                                MultipleAccess access = MultipleAccess::rsma,
                                const std::optional<Allocation>& start = std::nullopt)
{
    using Clock = std::chrono::steady_clock;
    const auto ms_since = [](Clock::time_point t) {
        return std::chrono::duration<double, std::milli>(Clock::now() - t).count();
    };
    PipelineResult out;
    out.scheme = access == MultipleAccess::rsma ? Scheme::psc_rsma : Scheme::psc_sdma;
    ScaOptions sca = opts.sca;
    sca.access = access;
    sca.accounting = PowerAccounting::with_computation;

    std::vector<double> rho;
    if (start)
        rho = start->ratios;
    else if (opts.initial_ratios == InitialRatios::rate_proxy)
        rho = proxy_initial_ratios(s, spec);
    else
        rho.assign(static_cast<std::size_t>(s.num_users), 1.0);

    std::optional<Allocation> warm = start;
    double previous = std::numeric_limits<double>::quiet_NaN();
    for (int j = 0; j < opts.max_outer; ++j) {
        OuterIteration rec;
        rec.outer = j;
        auto t0 = Clock::now();
        ScaResult block;
        try {
            block = sca_iterate(s, spec, rho, sca, warm);
        } catch (const NumericalError& e) {
            throw NumericalError(e.what(), j);
        }
        rec.sca_time_ms = ms_since(t0);
        rec.sca_iterations = static_cast<int>(block.trace.size());
        rec.sca_objective_bps = block.report.sum_semantic_rate();
        out.sca_traces.push_back(block.trace);
        Allocation current = block.allocation;

        t0 = Clock::now();
        std::vector<double> rates(static_cast<std::size_t>(s.num_users));
        for (int k = 0; k < s.num_users; ++k)
            rates[static_cast<std::size_t>(k)] = current.rate_split[static_cast<std::size_t>(k)]
                + block.report.private_rates[static_cast<std::size_t>(k)];
        const double transmit = current.transmit_power();
        try {
            const SegmentAssignment assign = select_segments(s, spec, rates, transmit);
            const GreedyResult g = greedy_ratios(s, spec, assign, rates, transmit);
            if (g.objective >= ratio_objective(rates, rho)) {
                rec.ratios_updated = g.ratios != rho;
                rho = g.ratios;
                current.ratios = rho;
            } else {
                rec.note = "greedy ratios below incumbent; kept";
            }
        } catch (const InfeasibleError& e) {
            // The incumbent ratios remain feasible; the block just cannot move.
            rec.note = e.what();
        }
        rec.ratio_time_ms = ms_since(t0);
        const RateReport rep = evaluate_rates(s, spec, current);
        rec.objective_bps = rep.sum_semantic_rate();
        out.trace.push_back(rec);
        if (out.trace.size() == 1 || rec.objective_bps > out.report.sum_semantic_rate()) {
            out.allocation = current;
            out.report = rep;
        }
        warm = current;
        if (std::isfinite(previous)
            && std::abs(rec.objective_bps - previous) <= opts.tol_outer * std::max(1.0, std::abs(previous))) {
            out.converged = true;
            break;
        }
        previous = rec.objective_bps;
    }
    return out;
}

/// PSC-SDMA: the same pipeline with no common stream (w_0 = 0, a = 0).
inline PipelineResult run_sdma_baseline(const Scenario& s, const CompLoadSpec& spec,
                                        const OrchestratorOptions& opts = {})
{
    PipelineResult r = alternate(s, spec, opts, MultipleAccess::sdma);
    r.scheme = Scheme::psc_sdma;
    return r;
}

/// Non-semantic: rho = 1, no computation power charged, one RSMA transmit
/// block over the full budget.
inline PipelineResult run_nonsemantic_baseline(const Scenario& s, const CompLoadSpec& spec,
                                               const OrchestratorOptions& opts = {})
{
    using Clock = std::chrono::steady_clock;
    ScaOptions sca = opts.sca;
    sca.access = MultipleAccess::rsma;
    sca.accounting = PowerAccounting::transmit_only;
    const std::vector<double> rho(static_cast<std::size_t>(s.num_users), 1.0);
    const auto t0 = Clock::now();
    ScaResult block;
    try {
        block = sca_iterate(s, spec, rho, sca);
    } catch (const NumericalError& e) {
        throw NumericalError(e.what(), 0);
    }
    PipelineResult out;
    out.scheme = Scheme::non_semantic;
    out.allocation = block.allocation;
    out.report = block.report;
    out.sca_traces.push_back(block.trace);
    OuterIteration rec;
    rec.objective_bps = rec.sca_objective_bps = block.report.sum_semantic_rate();
    rec.sca_iterations = static_cast<int>(block.trace.size());
    rec.sca_time_ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
    out.trace.push_back(rec);
    out.converged = block.converged;
    return out;
}

/// PSC-RSMA: the alternating loop from its own start, and again warm-started
/// from the converged SDMA solution (feasible for RSMA with w_0 = 0); the
/// better of the two is returned, so PSC-RSMA never ends below PSC-SDMA.
inline PipelineResult run_psc_rsma(const Scenario& s, const CompLoadSpec& spec, const OrchestratorOptions& opts = {})
{
    PipelineResult cold = alternate(s, spec, opts, MultipleAccess::rsma);
    const PipelineResult sdma = run_sdma_baseline(s, spec, opts);
    PipelineResult warm = alternate(s, spec, opts, MultipleAccess::rsma, sdma.allocation);
    return warm.objective() > cold.objective() ? warm : cold;
}

inline PipelineResult run_scheme(Scheme scheme, const Scenario& s, const CompLoadSpec& spec,
                                 const OrchestratorOptions& opts = {})
{
    switch (scheme) {
    case Scheme::psc_rsma: return run_psc_rsma(s, spec, opts);
    case Scheme::psc_sdma: return run_sdma_baseline(s, spec, opts);
    case Scheme::non_semantic: return run_nonsemantic_baseline(s, spec, opts);
    }
    throw std::invalid_argument("unknown scheme");
}

/// CSV rows: outer_iter,objective_bps,sca_time_ms,ratio_time_ms
inline void write_outer_trace_csv(std::ostream& os, const std::vector<OuterIteration>& trace)
{
    os << "outer_iter,objective_bps,sca_time_ms,ratio_time_ms\n";
    char buf[160];
    for (const auto& t : trace) {
        std::snprintf(buf, sizeof buf, "%d,%.17g,%.3f,%.3f\n", t.outer, t.objective_bps, t.sca_time_ms,
                      t.ratio_time_ms);
        os << buf;
    }
}

} // namespace semopt

#endif // SEMOPT_ORCHESTRATOR_HPP
