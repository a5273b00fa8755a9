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

#ifndef SEMOPT_VALIDATION_HPP
#define SEMOPT_VALIDATION_HPP

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "semopt/bench.hpp"
#include "semopt/comp_load.hpp"
#include "semopt/config.hpp"
#include "semopt/convex_core.hpp"
#include "semopt/orchestrator.hpp"
#include "semopt/random_instances.hpp"
#include "semopt/ratio_opt.hpp"
#include "semopt/rsma_rates.hpp"
#include "semopt/sca_beamforming.hpp"
#include "semopt/scenario.hpp"

namespace semopt {

/// Outcome of one named property over many instances. `worst_margin` is the
/// smallest observed slack (tolerance minus error, or value minus bound);
/// negative means the property failed somewhere.
struct PropertyCheck {
    PropertyCheck() = default;
    PropertyCheck(std::string module_name, std::string property)
        : module(std::move(module_name)), name(std::move(property))
    {
    }

    std::string module;
    std::string name;
    long long instances = 0;
    long long failures = 0;
    double worst_margin = std::numeric_limits<double>::infinity();
    std::string note;

    void record(bool ok, double margin = 0.0)
    {
        ++instances;
        failures += ok ? 0 : 1;
        worst_margin = std::min(worst_margin, margin);
    }
    void expect_margin(double margin) { record(margin >= 0.0, margin); }
    bool passed() const { return instances > 0 && failures == 0; }
};

struct ValidationReport {
    std::vector<PropertyCheck> checks;
    double seconds = 0.0;

    bool passed() const
    {
        return std::all_of(checks.begin(), checks.end(), [](const PropertyCheck& c) { return c.passed(); });
    }
    void add(PropertyCheck c) { checks.push_back(std::move(c)); }
    void add(std::vector<PropertyCheck> cs)
    {
        for (auto& c : cs)
            checks.push_back(std::move(c));
    }

    void write_json(std::ostream& os) const
    {
        nlohmann::ordered_json j;
        j["passed"] = passed();
        j["seconds"] = seconds;
        j["properties"] = nlohmann::ordered_json::array();
        for (const auto& c : checks) {
            nlohmann::ordered_json e;
            e["module"] = c.module;
            e["name"] = c.name;
            e["passed"] = c.passed();
            e["instances"] = c.instances;
            e["failures"] = c.failures;
            e["worst_margin"] = std::isfinite(c.worst_margin) ? nlohmann::ordered_json(c.worst_margin) : nullptr;
            if (!c.note.empty())
                e["note"] = c.note;
            j["properties"].push_back(e);
        }
        os << j.dump(2) << '\n';
    }
};

inline double relative_error(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

// ---------------------------------------------------------------- scenario

inline std::vector<PropertyCheck> check_scenario(int seeds)
{
    PropertyCheck det{"scenario", "determinism"};
    for (int i = 0; i < seeds; ++i) {
        const auto seed = static_cast<std::uint64_t>(1000 + i);
        const ChannelMatrix a = generate_channels(4, 8, seed), b = generate_channels(4, 8, seed);
        det.record(a == b);
    }
    const Config c = parse_config("");
    det.record(make_scenario(c.scenario, c.comp_load, 7).channels == make_scenario(c.scenario, c.comp_load, 7).channels);

    PropertyCheck dbm{"scenario", "dbm_watt_conversion"};
    dbm.record(dbm_to_watts(30.0) == 1.0);
    for (double d = -90.0; d <= 60.0; d += 0.5) {
        const double err = std::abs(dbm_to_watts(d) - std::pow(10.0, (d - 30.0) / 10.0));
        const double back = std::abs(watts_to_dbm(dbm_to_watts(d)) - d);
        dbm.expect_margin(1e-12 - std::max(err / dbm_to_watts(d), back));
    }
    return {det, dbm};
}

// ---------------------------------------------------------------- comp_load

inline std::vector<PropertyCheck> check_comp_load(int specs, std::uint64_t seed = 1)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    PropertyCheck cont{"comp_load", "continuity"}, dec{"comp_load", "strictly_decreasing"},
        convex{"comp_load", "convexity"}, mid{"comp_load", "segment_of_midpoint"};
    for (int n = 0; n < specs; ++n) {
        const CompLoadSpec spec = validate_spec(random_comp_load(rng, 4));
        for (int d = 1; d < spec.segments(); ++d) {
            const double c = spec.floor(d);
            const double lhs = spec.segment_load(d, c), rhs = spec.segment_load(d + 1, c);
            cont.expect_margin(1e-12 - std::abs(lhs - rhs) / std::max(std::abs(lhs), 1e-300));
        }
        const double lo = spec.domain_floor();
        double a = lo + (1.0 - lo) * u(rng), b = lo + (1.0 - lo) * u(rng);
        if (a > b)
            std::swap(a, b);
        if (b > a)
            dec.record(load_of(spec, a) > load_of(spec, b), load_of(spec, a) - load_of(spec, b));
        const double m = 0.5 * (a + b);
        const double gap = 0.5 * (load_of(spec, a) + load_of(spec, b)) - load_of(spec, m);
        convex.expect_margin(gap + 1e-12 * std::max(1.0, load_of(spec, m)));
        const auto mids = midpoints(spec);
        for (int d = 1; d <= spec.segments(); ++d)
            mid.record(segment_of(spec, mids[static_cast<std::size_t>(d - 1)]) == d);
    }
    return {cont, dec, convex, mid};
}

// ---------------------------------------------------------------- rsma_rates

inline Allocation random_allocation(const Scenario& s, std::mt19937_64& rng)
{
    std::normal_distribution<double> n(0.0, 0.3);
    std::uniform_real_distribution<double> u(0.25, 1.0);
    Allocation a;
    a.common_beam.resize(s.num_antennas);
    a.private_beams.resize(s.num_antennas, s.num_users);
    for (int m = 0; m < s.num_antennas; ++m) {
        a.common_beam(m) = {n(rng), n(rng)};
        for (int k = 0; k < s.num_users; ++k)
            a.private_beams(m, k) = {n(rng), n(rng)};
    }
    a.rate_split.assign(static_cast<std::size_t>(s.num_users), 0.0);
    for (int k = 0; k < s.num_users; ++k)
        a.ratios.push_back(u(rng));
    const double r0 = min_common_rate(s, a);
    for (auto& x : a.rate_split)
        x = r0 * u(rng) / s.num_users;
    return a;
}

inline std::vector<PropertyCheck> check_rsma_rates(int instances, std::uint64_t seed = 2)
{
    std::mt19937_64 rng(seed);
    PropertyCheck scale{"rsma_rates", "sinr_scale_invariance"}, mono{"rsma_rates", "common_rate_monotone_in_w0"},
        unit{"rsma_rates", "unit_ratio_identity"}, feas{"rsma_rates", "feasibility_consistency"};
    const CompLoadSpec spec = default_comp_load();
    for (int n = 0; n < instances; ++n) {
        const int k = 1 + static_cast<int>(rng() % 4), m = 1 + static_cast<int>(rng() % 4);
        Scenario s;
        s.num_users = k;
        s.num_antennas = m;
        s.bandwidth_hz = 1e6;
        s.noise_power_w = 0.1;
        s.max_power_w = 10.0;
        s.comp_power_coeff = 1.0;
        s.min_semantic_rate_bps.assign(static_cast<std::size_t>(k), 0.0);
        s.min_ratio.assign(static_cast<std::size_t>(k), 0.25);
        s.channels = generate_channels(k, m, rng());
        const Allocation a = random_allocation(s, rng);

        const double c = 0.5 + 3.0 * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
        Scenario s2 = s;
        s2.noise_power_w *= c * c;
        Allocation a2 = a;
        a2.common_beam *= c;
        a2.private_beams *= c;
        for (int u = 0; u < k; ++u) {
            const double e = std::max(relative_error(common_rate(s2, a2, u), common_rate(s, a, u)),
                                      relative_error(private_rate(s2, a2, u), private_rate(s, a, u)));
            scale.expect_margin(1e-10 - e);
        }

        Allocation bigger = a;
        bigger.common_beam *= 1.5;
        for (int u = 0; u < k; ++u)
            mono.expect_margin(common_rate(s, bigger, u) - common_rate(s, a, u));

        Allocation ones = a;
        std::fill(ones.ratios.begin(), ones.ratios.end(), 1.0);
        const auto sem = semantic_rates(s, ones);
        for (int u = 0; u < k; ++u) {
            const auto i = static_cast<std::size_t>(u);
            unit.record(sem[i] == ones.rate_split[i] + private_rate(s, ones, u));
        }

        FeasibilityOptions tight;
        const auto rep = check_feasibility(s, spec, a, tight);
        if (rep.violated(tight.tol).empty()) {
            FeasibilityOptions loose;
            loose.tol = 10.0 * tight.tol;
            feas.record(check_feasibility(s, spec, a, loose).violated(loose.tol).empty());
        } else {
            feas.record(true);
        }
    }
    return {scale, mono, unit, feas};
}

// ---------------------------------------------------------------- convex_core

/// Central-difference check of every function in `p` at `points` perturbed
/// interior points around `center`.
inline void check_program_derivatives(const ConvexProgram& p, const Vector& center, int points, double spread,
                                      std::mt19937_64& rng, PropertyCheck& grad, PropertyCheck& hess)
{
    std::normal_distribution<double> n(0.0, 1.0);
    std::vector<const SmoothFunction*> fns{p.objective.get()};
    for (const auto& c : p.constraints)
        fns.push_back(c.fn.get());
    for (int t = 0; t < points; ++t) {
        Vector x = center;
        for (int i = 0; i < x.size(); ++i)
            x[i] += spread * (1.0 + std::abs(center[i])) * n(rng);
        const SmoothFunction& f = *fns[static_cast<std::size_t>(t) % fns.size()];
        if (!std::isfinite(f.value(x)))
            continue;
        const Vector g = f.gradient(x);
        const Matrix h = f.hessian(x);
        double ge = 0.0, he = 0.0;
        for (int i : f.support()) {
            const double eps = 1e-6 * (1.0 + std::abs(x[i]));
            Vector xp = x, xm = x;
            xp[i] += eps;
            xm[i] -= eps;
            const double fd = (f.value(xp) - f.value(xm)) / (2.0 * eps);
            ge = std::max(ge, std::abs(g[i] - fd) / std::max(1.0, std::abs(fd)));
            const Vector fdh = (f.gradient(xp) - f.gradient(xm)) / (2.0 * eps);
            for (int j : f.support())
                he = std::max(he, std::abs(h(j, i) - fdh[j]) / std::max(1.0, std::abs(fdh[j])));
        }
        grad.expect_margin(1e-5 - ge);
        hess.expect_margin(1e-5 - he);
    }
}

/// The three closed-form programs: projection onto x >= 2, a monotone
/// objective on a box, and the rate-split trade-off. Each pairs a program with
/// its known optimal value.
struct ClosedFormProgram {
    std::string name;
    ConvexProgram program;
    double optimum = 0.0;   // optimal objective value (minimization)
    std::vector<double> x;  // optimizer
};

inline ConvexProgram rate_split_program(double budget)
{
    ConvexProgram p;
    p.dimension = 2;
    auto f = std::make_shared<CompositeFunction>();
    f->linear(0, -1.0).log1p(1, -1.0 / std::log(2.0), 1.0);
    p.objective = f;
    auto sum = std::make_shared<CompositeFunction>();
    sum->linear(0, 1.0).linear(1, 1.0).constant(-budget);
    auto a = std::make_shared<CompositeFunction>();
    a->linear(0, -1.0);
    auto g = std::make_shared<CompositeFunction>();
    g->linear(1, -1.0);
    p.add("budget", sum);
    p.add("a_nonneg", a);
    p.add("gamma_nonneg", g);
    return p;
}

inline std::vector<ClosedFormProgram> closed_form_programs()
{
    std::vector<ClosedFormProgram> out;
    {
        ConvexProgram p;
        p.dimension = 1;
        auto f = std::make_shared<CompositeFunction>();
        f->square_of_linear({{0, 1.0}}, 1.0).linear(0, -2.0).constant(1.0);
        p.objective = f;
        auto g = std::make_shared<CompositeFunction>();
        g->linear(0, -1.0).constant(2.0);
        p.add("x_ge_2", g);
        out.push_back({"projection", p, 1.0, {2.0}});
    }
    {
        ConvexProgram p;
        p.dimension = 1;
        auto f = std::make_shared<CompositeFunction>();
        f->log1p(0, -1.0, 1.0);
        p.objective = f;
        auto lo = std::make_shared<CompositeFunction>();
        lo->linear(0, -1.0);
        auto hi = std::make_shared<CompositeFunction>();
        hi->linear(0, 1.0).constant(-3.0);
        p.add("x_nonneg", lo);
        p.add("x_le_3", hi);
        p.start = Vector::Constant(1, 1.0);
        out.push_back({"log_box", p, -std::log(4.0), {3.0}});
    }
    {
        const double gamma = 1.0 / std::log(2.0) - 1.0;
        out.push_back({"rate_split", rate_split_program(2.0), -(2.0 - gamma + std::log2(1.0 + gamma)),
                       {2.0 - gamma, gamma}});
    }
    return out;
}

inline std::vector<PropertyCheck> check_convex_core(int fd_points, std::uint64_t seed = 3)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> n(0.0, 1.0);
    std::uniform_real_distribution<double> u(0.1, 1.0);
    PropertyCheck grad{"convex_core", "gradient_finite_difference"}, hess{"convex_core", "hessian_finite_difference"};
    for (int t = 0; t < fd_points; ++t) {
        ConvexProgram p;
        p.dimension = 7;
        auto f = std::make_shared<CompositeFunction>();
        f->constant(n(rng)).linear(1, n(rng)).log1p(2, -u(rng), u(rng)).log1p(0, -u(rng), 2.0);
        f->square_of_linear({{3, n(rng)}, {5, n(rng)}}, u(rng));
        f->block_norm2(4, 3, u(rng));
        f->projection2(1, Vector{{n(rng), n(rng), n(rng)}}, u(rng));
        f->projection(3, Vector{{n(rng), n(rng)}}, n(rng));
        p.objective = f;
        Vector x(7);
        for (int i = 0; i < 7; ++i)
            x[i] = u(rng);
        check_program_derivatives(p, x, 1, 0.0, rng, grad, hess);
    }
    // The convexified beamforming subproblem, around its own linearization point.
    {
        const Config c = parse_config("");
        const Scenario s = make_scenario(c.scenario, c.comp_load, 7);
        const std::vector<double> rho(4, 1.0);
        const auto st = init_point(s, c.comp_load, rho);
        const auto sp = build_subproblem(s, c.comp_load, rho, st);
        check_program_derivatives(sp.program, *sp.program.start, fd_points, 1e-3, rng, grad, hess);
    }

    PropertyCheck mono{"convex_core", "barrier_monotonicity"}, cert{"convex_core", "solution_certificates"},
        grid{"convex_core", "grid_agreement"};
    const auto certify = [&](const ConvexProgram& p, const SolveResult& r) {
        if (r.status != SolveStatus::converged)
            return;
        double worst = r.kkt.primal;
        for (std::size_t i = 0; i < p.constraints.size(); ++i)
            worst = std::max(worst, std::abs(r.duals[static_cast<Eigen::Index>(i)]
                                             * p.constraints[i].fn->value(r.x)));
        cert.expect_margin(SolverOptions{}.kkt_tol - worst);
    };
    for (const auto& cf : closed_form_programs()) {
        const SolveResult r = solve_barrier(cf.program);
        cert.record(r.status == SolveStatus::converged);
        certify(cf.program, r);
        for (std::size_t i = 1; i < r.outer_objectives.size(); ++i)
            mono.expect_margin(r.outer_objectives[i - 1] + 1e-10 * (1.0 + std::abs(r.outer_objectives[i - 1]))
                               - r.outer_objectives[i]);
        grid.expect_margin(1e-4 - relative_error(r.objective, cf.optimum));
    }
    for (int t = 0; t < 20; ++t) {
        const double budget = 0.1 + 4.9 * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
        const ConvexProgram p = rate_split_program(budget);
        const SolveResult r = solve_barrier(p);
        certify(p, r);
        double best = -1e300;
        for (int i = 0; i <= 20000; ++i) {
            const double g = budget * i / 20000.0;
            best = std::max(best, budget - g + std::log2(1.0 + g));
        }
        grid.expect_margin(1e-4 - relative_error(-r.objective, best));
    }
    return {grad, hess, mono, cert, grid};
}

// ---------------------------------------------------------------- SCA + orchestration evidence

/// Every pipeline of one seeded scenario, kept for the property checks.
struct SeedRuns {
    std::uint64_t seed = 0;
    Scenario scenario;
    CompLoadSpec spec;
    ScaResult unit_rsma;        // one SCA run at rho = 1
    PipelineResult rsma;        // alternation from its own start
    PipelineResult sdma;        // PSC-SDMA
    PipelineResult rsma_warm;   // alternation warm-started from the SDMA solution
    PipelineResult nonsemantic; // Non-semantic baseline
    double seconds = 0.0;
};

inline SeedRuns run_seed(const Config& c, std::uint64_t seed)
{
    const auto t0 = std::chrono::steady_clock::now();
    SeedRuns r;
    r.seed = seed;
    r.spec = c.comp_load;
    r.scenario = make_scenario(c.scenario, c.comp_load, seed);
    const std::vector<double> ones(static_cast<std::size_t>(r.scenario.num_users), 1.0);
    r.unit_rsma = sca_iterate(r.scenario, r.spec, ones, c.options.sca);
    r.rsma = alternate(r.scenario, r.spec, c.options, MultipleAccess::rsma);
    r.sdma = run_sdma_baseline(r.scenario, r.spec, c.options);
    r.rsma_warm = alternate(r.scenario, r.spec, c.options, MultipleAccess::rsma, r.sdma.allocation);
    r.nonsemantic = run_nonsemantic_baseline(r.scenario, r.spec, c.options);
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

inline std::vector<std::vector<ScaIteration>> sca_traces(const SeedRuns& r)
{
    std::vector<std::vector<ScaIteration>> out{r.unit_rsma.trace};
    for (const PipelineResult* p : {&r.rsma, &r.sdma, &r.rsma_warm, &r.nonsemantic})
        for (const auto& t : p->sca_traces)
            out.push_back(t);
    return out;
}

inline PropertyCheck check_sca_monotone(const std::vector<SeedRuns>& runs)
{
    PropertyCheck c{"sca_beamforming", "monotone_objective"};
    for (const auto& r : runs)
        for (const auto& trace : sca_traces(r))
            for (std::size_t i = 1; i < trace.size(); ++i) {
                const double prev = trace[i - 1].objective_bps;
                c.expect_margin((trace[i].objective_bps - prev + 1e-8 * (1.0 + std::abs(prev)))
                                / (1.0 + std::abs(prev)));
            }
    return c;
}

inline PropertyCheck check_sca_kkt(const std::vector<SeedRuns>& runs)
{
    PropertyCheck c{"sca_beamforming", "subproblem_kkt_certificates"};
    long long other = 0;
    for (const auto& r : runs)
        for (const auto& trace : sca_traces(r))
            for (const auto& it : trace) {
                if (it.status == SolveStatus::converged)
                    c.expect_margin(1e-6 - it.kkt_residual);
                else
                    ++other;
            }
    if (other > 0)
        c.note = std::to_string(other) + " solves not converged (excluded)";
    return c;
}

inline PropertyCheck check_sca_inner_approximation(const std::vector<SeedRuns>& runs)
{
    PropertyCheck c{"sca_beamforming", "inner_approximation"};
    for (const auto& r : runs)
        for (const auto& trace : sca_traces(r))
            for (const auto& it : trace)
                c.expect_margin(std::min(it.common_rate_margin, it.private_rate_margin) + 1e-6);
    return c;
}

inline PropertyCheck check_phase_rotation(const std::vector<SeedRuns>& runs)
{
    PropertyCheck c{"sca_beamforming", "phase_rotation_neutrality"};
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0.0, 6.283185307179586);
    for (const auto& r : runs) {
        Allocation a = r.rsma.allocation;
        const RateReport before = evaluate_rates(r.scenario, r.spec, a);
        for (int k = 0; k < r.scenario.num_users; ++k)
            a.private_beams.col(k) *= std::polar(1.0, u(rng));
        const RateReport after = evaluate_rates(r.scenario, r.spec, a);
        for (std::size_t k = 0; k < before.private_rates.size(); ++k) {
            c.expect_margin(1e-10 - relative_error(after.private_rates[k], before.private_rates[k]));
            c.expect_margin(1e-10 - relative_error(after.common_rates[k], before.common_rates[k]));
        }
    }
    return c;
}

inline PropertyCheck check_solution_feasibility(const std::vector<SeedRuns>& runs)
{
    PropertyCheck c{"sca_beamforming", "solution_feasibility"};
    FeasibilityOptions o;
    o.tol = 1e-6;
    for (const auto& r : runs) {
        for (const PipelineResult* p : {&r.rsma, &r.sdma, &r.rsma_warm})
            c.record(check_feasibility(r.scenario, r.spec, p->allocation, o).violated(o.tol).empty());
        FeasibilityOptions t = o;
        t.accounting = PowerAccounting::transmit_only;
        c.record(check_feasibility(r.scenario, r.spec, r.nonsemantic.allocation, t).violated(o.tol).empty());
        c.record(check_feasibility(r.scenario, r.spec, r.unit_rsma.allocation, o).violated(o.tol).empty());
    }
    return c;
}

inline PropertyCheck check_alternating_monotone(const std::vector<SeedRuns>& runs)
{
    PropertyCheck c{"orchestrator", "alternating_monotonicity"};
    for (const auto& r : runs)
        for (const PipelineResult* p : {&r.rsma, &r.sdma, &r.rsma_warm})
            for (std::size_t i = 1; i < p->trace.size(); ++i) {
                const double prev = p->trace[i - 1].objective_bps;
                c.expect_margin((p->trace[i].objective_bps - prev) / std::abs(prev) + 1e-8);
            }
    return c;
}

inline PropertyCheck check_dominance(const std::vector<SeedRuns>& runs)
{
    PropertyCheck c{"orchestrator", "rsma_from_sdma_dominance"};
    for (const auto& r : runs) {
        const double sdma = r.sdma.objective();
        c.expect_margin((r.rsma_warm.objective() - sdma) / sdma + 1e-6);
    }
    return c;
}

inline PropertyCheck check_best_seen(const std::vector<SeedRuns>& runs)
{
    PropertyCheck c{"orchestrator", "best_seen_return"};
    for (const auto& r : runs)
        for (const PipelineResult* p : {&r.rsma, &r.sdma, &r.rsma_warm}) {
            double best = -std::numeric_limits<double>::infinity();
            for (const auto& t : p->trace)
                best = std::max(best, t.objective_bps);
            c.record(p->objective() == best);
        }
    return c;
}

inline PropertyCheck check_nonsemantic(const std::vector<SeedRuns>& runs)
{
    PropertyCheck c{"orchestrator", "nonsemantic_identity"};
    for (const auto& r : runs) {
        bool ok = r.nonsemantic.report.computation_power_w == 0.0;
        for (double rho : r.nonsemantic.allocation.ratios)
            ok = ok && rho == 1.0;
        c.record(ok);
    }
    return c;
}

// ---------------------------------------------------------------- ratio_opt

struct RatioEvidence {
    RatioInstance instance;
    SegmentAssignment assignment;
    GreedyResult greedy;
};

inline std::vector<PropertyCheck> check_ratio_opt(int instances, std::uint64_t seed = 5)
{
    std::mt19937_64 rng(seed);
    PropertyCheck feas{"ratio_opt", "greedy_feasible"}, init{"ratio_opt", "greedy_not_worse_than_init"},
        cond{"ratio_opt", "conditional_optimality"}, sign{"ratio_opt", "objective_derivative_sign"},
        exh{"ratio_opt", "select_segments_exhaustive"};
    for (int n = 0; n < instances; ++n) {
        const RatioInstance r = random_ratio_instance(rng);
        const Scenario& s = r.scenario;
        const auto assign = select_segments(s, r.spec, r.rates, r.transmit_power);
        const GreedyResult g = greedy_ratios(s, r.spec, assign, r.rates, r.transmit_power);

        double load = 0.0;
        bool in_range = true;
        for (int k = 0; k < s.num_users; ++k) {
            const auto i = static_cast<std::size_t>(k);
            in_range = in_range && g.ratios[i] >= std::max(r.spec.floor(assign[i]), s.min_ratio[i])
                && g.ratios[i] <= r.spec.ceiling(assign[i]);
            load += r.spec.segment_load(assign[i], g.ratios[i]);
        }
        const double slack = s.max_power_w + 1e-9 - r.transmit_power - s.comp_power_coeff * load;
        feas.record(in_range && slack >= 0.0, slack);
        init.expect_margin((g.objective - ratio_objective(r.rates, g.initial)) / g.objective);

        for (const auto& st : g.steps) {
            const auto i = static_cast<std::size_t>(st.user);
            const double budget = remaining_power(s, r.spec, assign, st.ratios_before, r.transmit_power, st.user);
            const double lo = std::max(r.spec.floor(assign[i]), s.min_ratio[i]);
            double best = 0.0;
            for (double rho = lo; rho <= g.initial[i]; rho += 1e-4)
                if (s.comp_power_coeff * r.spec.segment_load(assign[i], rho) <= budget)
                    best = std::max(best, r.rates[i] / rho);
            const double chosen = r.rates[i] / st.chosen;
            cond.expect_margin((chosen - best) / chosen + 1e-12);
        }

        for (std::size_t k = 0; k < g.ratios.size(); ++k) {
            auto rho = g.ratios;
            rho[k] -= 1e-6;
            sign.record(ratio_objective(r.rates, rho) > g.objective);
        }

        // Independent enumeration by mixed-radix counting.
        const int users = s.num_users, d = r.spec.segments();
        const auto mids = midpoints(r.spec);
        int total = 1;
        for (int k = 0; k < users; ++k)
            total *= d;
        SegmentAssignment best_a;
        double best_v = -1.0;
        for (int code = 0; code < total; ++code) {
            SegmentAssignment a(static_cast<std::size_t>(users));
            for (int k = users - 1, c = code; k >= 0; --k, c /= d)
                a[static_cast<std::size_t>(k)] = 1 + c % d;
            double l = 0.0, v = 0.0;
            for (int k = 0; k < users; ++k) {
                const double m = mids[static_cast<std::size_t>(a[static_cast<std::size_t>(k)] - 1)];
                l += load_of(r.spec, m);
                v += r.rates[static_cast<std::size_t>(k)] / m;
            }
            if (r.transmit_power + s.comp_power_coeff * l <= s.max_power_w && v > best_v) {
                best_v = v;
                best_a = a;
            }
        }
        exh.record(best_a == assign);
    }
    return {feas, init, cond, sign, exh};
}

struct OracleComparison {
    PropertyCheck against_oracle{"ratio_opt", "greedy_vs_oracle"};
    PropertyCheck against_fixed_assignment{"ratio_opt", "greedy_vs_oracle_same_assignment"};
};

/// Greedy (after midpoint segment selection) against the exhaustive oracle;
/// tolerance max(2%, one grid step's effect). The second check restricts the
/// oracle to the assignment greedy used.
inline OracleComparison compare_with_oracle(int instances, double grid_step, std::uint64_t seed = 6)
{
    std::mt19937_64 rng(seed);
    OracleComparison out;
    for (int n = 0; n < instances; ++n) {
        const RatioInstance r = random_ratio_instance(rng);
        const auto assign = select_segments(r.scenario, r.spec, r.rates, r.transmit_power);
        const GreedyResult g = greedy_ratios(r.scenario, r.spec, assign, r.rates, r.transmit_power);
        for (int pass = 0; pass < 2; ++pass) {
            const OracleResult o = brute_force_oracle(r.scenario, r.spec, r.rates, r.transmit_power, grid_step,
                                                      pass == 0 ? nullptr : &assign);
            PropertyCheck& c = pass == 0 ? out.against_oracle : out.against_fixed_assignment;
            if (!o.feasible) {
                c.record(false, -1.0);
                continue;
            }
            double step_effect = 0.0;
            for (std::size_t k = 0; k < r.rates.size(); ++k)
                step_effect += r.rates[k] / o.ratios[k] - r.rates[k] / (o.ratios[k] + grid_step);
            const double tol = std::max(0.02, step_effect / o.objective);
            c.expect_margin(tol - (o.objective - g.objective) / o.objective);
        }
    }
    return out;
}

// ---------------------------------------------------------------- bench

inline std::vector<PropertyCheck> check_bench(std::uint64_t seed = 8)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1e9, 1e9);
    PropertyCheck trip{"bench_cli", "csv_round_trip"}, agg{"bench_cli", "aggregation_correctness"};
    std::vector<ResultRow> rows;
    for (Scheme s : {Scheme::psc_rsma, Scheme::psc_sdma, Scheme::non_semantic})
        for (double v : {0.5, 1.0, 2.0})
            for (std::uint64_t sd = 0; sd < 5; ++sd) {
                ResultRow r;
                r.scheme = s;
                r.parameter = "comp_power_coeff";
                r.value = v;
                r.seed = sd * 0x9e3779b97f4a7c15ULL;
                r.status = sd == 3 ? "infeasible" : "ok";
                r.semantic_rates_bps = {u(rng), u(rng), std::nextafter(1.0, 2.0)};
                r.sum_semantic_rate_bps = r.semantic_rates_bps[0] + r.semantic_rates_bps[1] + r.semantic_rates_bps[2];
                r.transmit_power_w = u(rng) * 1e-12;
                r.computation_power_w = 1.0 / 3.0;
                r.outer_iterations = static_cast<int>(sd);
                rows.push_back(r);
            }
    std::ostringstream os;
    write_results_csv(os, rows);
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    trip.record(line == results_header());
    for (const auto& r : rows) {
        std::getline(is, line);
        const ResultRow b = parse_result_row(line);
        trip.record(b.scheme == r.scheme && b.parameter == r.parameter && b.value == r.value && b.seed == r.seed
                    && b.status == r.status && b.sum_semantic_rate_bps == r.sum_semantic_rate_bps
                    && b.semantic_rates_bps == r.semantic_rates_bps && b.transmit_power_w == r.transmit_power_w
                    && b.computation_power_w == r.computation_power_w && b.outer_iterations == r.outer_iterations);
    }
    for (const auto& m : compute_means(rows)) {
        double sum = 0.0;
        int count = 0;
        for (const auto& r : rows)
            if (r.scheme == m.scheme && r.value == m.value && r.status == "ok") {
                sum += r.sum_semantic_rate_bps;
                ++count;
            }
        agg.expect_margin(1e-12 - relative_error(m.mean_sum_semantic_rate_bps, sum / count));
    }
    return {trip, agg};
}

// ---------------------------------------------------------------- mutation self-test

/// Runs SCA with the sign of the alpha term in the private-SINR tangent
/// flipped. The property suite must notice: the check passes when
/// monotonicity or inner-approximation validity breaks (or SCA fails).
inline PropertyCheck check_mutation_detected(const Config& c, std::uint64_t seed = 7)
{
    PropertyCheck out{"sca_beamforming", "mutation_self_test"};
    const Scenario s = make_scenario(c.scenario, c.comp_load, seed);
    ScaOptions o = c.options.sca;
    o.flip_private_tangent = true;
    const std::vector<double> ones(static_cast<std::size_t>(s.num_users), 1.0);
    try {
        SeedRuns fake;
        fake.unit_rsma = sca_iterate(s, c.comp_load, ones, o);
        const PropertyCheck mono = check_sca_monotone({fake});
        const PropertyCheck inner = check_sca_inner_approximation({fake});
        out.record(!mono.passed() || !inner.passed(), std::min(-mono.worst_margin, -inner.worst_margin));
        out.note = "monotone " + std::string(mono.passed() ? "held" : "broke") + ", inner approximation "
            + (inner.passed() ? "held" : "broke");
    } catch (const std::exception& e) {
        out.record(true);
        out.note = std::string("mutated SCA failed: ") + e.what();
    }
    return out;
}

// ---------------------------------------------------------------- suite

enum class ValidationLevel { quick, full };

/// Runs every module's property checks on the given configuration.
inline ValidationReport run_validation(ValidationLevel level, const Config& c = parse_config(""))
{
    const bool full = level == ValidationLevel::full;
    const auto t0 = std::chrono::steady_clock::now();
    ValidationReport rep;
    rep.add(check_scenario(full ? 100 : 10));
    rep.add(check_comp_load(full ? 10000 : 1000));
    rep.add(check_rsma_rates(full ? 1000 : 200));
    rep.add(check_convex_core(100));
    std::vector<SeedRuns> runs;
    for (int i = 0; i < (full ? 20 : 2); ++i)
        runs.push_back(run_seed(c, static_cast<std::uint64_t>(i + 1)));
    rep.add(check_sca_inner_approximation(runs));
    rep.add(check_sca_monotone(runs));
    rep.add(check_sca_kkt(runs));
    rep.add(check_phase_rotation(runs));
    rep.add(check_solution_feasibility(runs));
    rep.add(check_mutation_detected(c));
    rep.add(check_ratio_opt(full ? 200 : 40));
    const OracleComparison oc = compare_with_oracle(full ? 50 : 10, full ? 1e-3 : 1e-2);
    rep.add(oc.against_oracle);
    rep.add(oc.against_fixed_assignment);
    rep.add(check_alternating_monotone(runs));
    rep.add(check_dominance(runs));
    rep.add(check_best_seen(runs));
    rep.add(check_nonsemantic(runs));
    rep.add(check_bench());
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

} // namespace semopt

#endif // SEMOPT_VALIDATION_HPP
