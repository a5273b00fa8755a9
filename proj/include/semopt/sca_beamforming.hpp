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

#ifndef SEMOPT_SCA_BEAMFORMING_HPP
#define SEMOPT_SCA_BEAMFORMING_HPP

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "semopt/comp_load.hpp"
#include "semopt/convex_core.hpp"
#include "semopt/errors.hpp"
#include "semopt/rsma_rates.hpp"
#include "semopt/scenario.hpp"

namespace semopt {

/// rsma: common + private streams. sdma: private streams only (w_0 = 0, a = 0).
enum class MultipleAccess { rsma, sdma };

inline const char* to_string(MultipleAccess m) { return m == MultipleAccess::rsma ? "rsma" : "sdma"; }

struct ScaOptions {
    double tol_sca = 1e-5;
    int max_sca_iters = 50;
    MultipleAccess access = MultipleAccess::rsma;
    PowerAccounting accounting = PowerAccounting::with_computation;
    SolverOptions solver = [] {
        SolverOptions o;
        o.gap_tol = 1e-10;
        return o;
    }();
    double interior_margin = 1e-3; // shrink factor used to build a strictly feasible start
    /// Mutation hook for the validation self-test: flips the sign of the
    /// alpha term in the private-SINR tangent bound, which breaks the inner
    /// approximation. Never set outside of tests.
    bool flip_private_tangent = false;
};

/// Linearization point. Slacks are kept tight: alpha = interference + noise,
/// gamma = private SINR, beta = private sum + noise, delta = common SINR.
struct SubproblemState {
    Allocation allocation;
    std::vector<double> alpha, beta, gamma, delta;
    int iteration = 0;
    double objective = 0.0; // sum of semantic rates at `allocation`, bit/s
};

/// Index map of the real decision vector.
struct SubproblemLayout {
    int users = 0;
    int antennas = 0;
    bool common = true;
    int split = -1;  // a_k / B
    int beams = 0;   // real-stacked beams, [Re w; Im w] per beam, common first
    int alpha = 0, beta = -1, gamma = 0, delta = -1;
    int dimension = 0;

    static SubproblemLayout make(int k, int m, MultipleAccess access)
    {
        SubproblemLayout l;
        l.users = k;
        l.antennas = m;
        l.common = access == MultipleAccess::rsma;
        int at = 0;
        if (l.common) {
            l.split = at;
            at += k;
        }
        l.beams = at;
        at += 2 * m * (k + (l.common ? 1 : 0));
        l.alpha = at;
        at += k;
        if (l.common) {
            l.beta = at;
            at += k;
        }
        l.gamma = at;
        at += k;
        if (l.common) {
            l.delta = at;
            at += k;
        }
        l.dimension = at;
        return l;
    }
    int common_beam() const { return beams; }
    int private_beam(int k) const { return beams + 2 * antennas * (k + (common ? 1 : 0)); }
};

/// One convexified subproblem together with the scalings needed to map its
/// solution back to physical units.
struct ScaSubproblem {
    ConvexProgram program;
    SubproblemLayout layout;
    double beam_power = 0.0; // w = sqrt(beam_power) * x_beam
    std::vector<double> alpha_scale, beta_scale, gamma_scale, delta_scale;
};

struct ScaIteration {
    int iteration = 0;
    double objective_bps = 0.0;            // true sum semantic rate of the iterate
    double subproblem_objective_bps = 0.0; // value of the convexified objective
    double kkt_residual = 0.0;
    SolveStatus status = SolveStatus::converged;
    int newton_steps = 0;
    // Actual minus implied rate, relative to max(1, implied); >= 0 when the
    // convexification is an inner approximation.
    double common_rate_margin = 0.0;
    double private_rate_margin = 0.0;
    double step_time_ms = 0.0;
};

struct ScaResult {
    Allocation allocation;
    RateReport report;
    std::vector<ScaIteration> trace;
    bool converged = false;
};

namespace detail {

constexpr double kSinrFloor = 1e-9;
constexpr double kSlackScaleFloor = 1e-3;

inline double available_beam_power(const Scenario& s, const CompLoadSpec& spec, const std::vector<double>& rho,
                                   PowerAccounting accounting)
{
    double comp = 0.0;
    if (accounting == PowerAccounting::with_computation)
        for (double r : rho)
            comp += s.comp_power_coeff * load_of(spec, r);
    return s.max_power_w - comp;
}

// Real-stacked projections: Re(r w) = p.x, Im(r w) = q.x for x = [Re w; Im w].
inline Vector real_part_row(const Eigen::RowVectorXcd& r)
{
    Vector p(2 * r.size());
    p << r.real().transpose(), -r.imag().transpose();
    return p;
}
inline Vector imag_part_row(const Eigen::RowVectorXcd& r)
{
    Vector q(2 * r.size());
    q << r.imag().transpose(), r.real().transpose();
    return q;
}

inline Vector stack(const Eigen::VectorXcd& w)
{
    Vector x(2 * w.size());
    x << w.real(), w.imag();
    return x;
}
inline Eigen::VectorXcd unstack(const VectorCRef& x)
{
    const Eigen::Index m = x.size() / 2;
    Eigen::VectorXcd w(m);
    for (Eigen::Index i = 0; i < m; ++i)
        w[i] = {x[i], x[m + i]};
    return w;
}

inline Eigen::VectorXcd matched_direction(const Scenario& s, int k)
{
    Eigen::VectorXcd u = s.channels.row(k).adjoint();
    return u / u.norm();
}

} // namespace detail

/// Rotates every private beam so that h_k^H w_k is real and nonnegative.
/// No rate changes: |h_i^H w_k| is invariant under a unit-modulus factor.
inline void rotate_private_phases(const Scenario& s, Allocation& a)
{
    for (int k = 0; k < s.num_users; ++k) {
        const std::complex<double> g = s.gain(k, a.private_beams.col(k));
        if (std::abs(g) > 0.0)
            a.private_beams.col(k) *= std::conj(g) / std::abs(g);
    }
}

/// Tight slacks for the current beams.
inline SubproblemState tight_state(const Scenario& s, const CompLoadSpec& spec, const Allocation& a,
                                   PowerAccounting accounting = PowerAccounting::with_computation)
{
    SubproblemState st;
    st.allocation = a;
    const auto n = static_cast<std::size_t>(s.num_users);
    st.alpha.resize(n);
    st.beta.resize(n);
    st.gamma.resize(n);
    st.delta.resize(n);
    for (int k = 0; k < s.num_users; ++k) {
        const auto i = static_cast<std::size_t>(k);
        double interference = s.noise_power_w;
        for (int j = 0; j < s.num_users; ++j)
            if (j != k)
                interference += std::norm(s.gain(k, a.private_beams.col(j)));
        const double own = std::norm(s.gain(k, a.private_beams.col(k)));
        st.alpha[i] = interference;
        st.gamma[i] = own / interference;
        st.beta[i] = interference + own;
        st.delta[i] = std::norm(s.gain(k, a.common_beam)) / st.beta[i];
    }
    st.objective = evaluate_rates(s, spec, a, accounting).sum_semantic_rate();
    return st;
}

namespace detail {

// Gives every stream a tiny positive SINR so the tangent bounds are defined;
// the added power is ~1e-9 of the noise floor.
inline void revive_streams(const Scenario& s, Allocation& a, double budget, MultipleAccess access)
{
    bool changed = false;
    for (int k = 0; k < s.num_users; ++k) {
        double interference = s.noise_power_w;
        for (int j = 0; j < s.num_users; ++j)
            if (j != k)
                interference += std::norm(s.gain(k, a.private_beams.col(j)));
        const std::complex<double> g = s.gain(k, a.private_beams.col(k));
        const double target = std::sqrt(kSinrFloor * interference);
        if (std::abs(g) < target) {
            const Eigen::VectorXcd u = matched_direction(s, k);
            const std::complex<double> phase = std::abs(g) > 0.0 ? g / std::abs(g) : 1.0;
            a.private_beams.col(k) += phase * ((target - std::abs(g)) / s.channels.row(k).norm()) * u;
            changed = true;
        }
    }
    if (access == MultipleAccess::rsma) {
        for (int k = 0; k < s.num_users; ++k) {
            double total = s.noise_power_w;
            for (int j = 0; j < s.num_users; ++j)
                total += std::norm(s.gain(k, a.private_beams.col(j)));
            const std::complex<double> g = s.gain(k, a.common_beam);
            const double target = std::sqrt(kSinrFloor * total);
            if (std::abs(g) < target) {
                const Eigen::VectorXcd u = matched_direction(s, k);
                const std::complex<double> phase = std::abs(g) > 0.0 ? g / std::abs(g) : 1.0;
                a.common_beam += phase * ((target - std::abs(g)) / s.channels.row(k).norm()) * u;
                changed = true;
            }
        }
    }
    const double p = a.transmit_power();
    if (changed && p > budget) {
        const double c = std::sqrt(budget / p);
        a.common_beam *= c;
        a.private_beams *= c;
    }
}

} // namespace detail

/// Matched-filter starting point with an equal split of 90% of the transmit
/// budget over the beams and tight slacks.
inline SubproblemState init_point(const Scenario& s, const CompLoadSpec& spec, const std::vector<double>& rho,
                                  MultipleAccess access = MultipleAccess::rsma,
                                  PowerAccounting accounting = PowerAccounting::with_computation)
{
    if (static_cast<int>(rho.size()) != s.num_users)
        throw std::invalid_argument("init_point: ratio count differs from user count");
    const double budget = detail::available_beam_power(s, spec, rho, accounting);
    if (!(budget > 0.0))
        throw InfeasibleError("sca", {"total_power"}, "computation power exhausts the power budget");
    const int k = s.num_users;
    const int beams = k + (access == MultipleAccess::rsma ? 1 : 0);
    const double per_beam = std::sqrt(0.9 * budget / beams);

    Allocation a;
    a.ratios = rho;
    a.private_beams.resize(s.num_antennas, k);
    Eigen::VectorXcd sum = Eigen::VectorXcd::Zero(s.num_antennas);
    for (int i = 0; i < k; ++i) {
        const Eigen::VectorXcd u = detail::matched_direction(s, i);
        a.private_beams.col(i) = per_beam * u;
        sum += u;
    }
    a.common_beam = Eigen::VectorXcd::Zero(s.num_antennas);
    if (access == MultipleAccess::rsma) {
        if (sum.norm() < 1e-12)
            sum = detail::matched_direction(s, 0);
        a.common_beam = per_beam * sum / sum.norm();
    }
    rotate_private_phases(s, a);
    a.rate_split.assign(static_cast<std::size_t>(k), 0.0);
    if (access == MultipleAccess::rsma) {
        const double r0 = min_common_rate(s, a);
        a.rate_split.assign(static_cast<std::size_t>(k), r0 / k);
    }
    return tight_state(s, spec, a, accounting);
}

/// Convexified subproblem at the linearization point `st`. Variables are
/// normalized by the point's own magnitudes so every block is O(1):
/// a/B, w/sqrt(P_avail), alpha/alpha0, beta/beta0, gamma/s_gamma, delta/s_delta.
inline ScaSubproblem build_subproblem(const Scenario& s, const CompLoadSpec& spec, const std::vector<double>& rho,
                                      const SubproblemState& st, const ScaOptions& opts = {})
{
    const int k = s.num_users;
    const int m = s.num_antennas;
    const auto n = static_cast<std::size_t>(k);
    if (st.alpha.size() != n || st.gamma.size() != n)
        throw std::invalid_argument("build_subproblem: state size mismatch");
    const bool rsma = opts.access == MultipleAccess::rsma;
    if (rsma && (st.beta.size() != n || st.delta.size() != n))
        throw std::invalid_argument("build_subproblem: state size mismatch");
    for (std::size_t i = 0; i < n; ++i) {
        const bool ok = st.alpha[i] > 0.0 && st.gamma[i] > 0.0 && (!rsma || (st.beta[i] > 0.0 && st.delta[i] > 0.0));
        if (!ok || !std::isfinite(st.alpha[i]) || !std::isfinite(st.gamma[i]))
            throw std::invalid_argument("build_subproblem: slacks must be positive and finite (user "
                                        + std::to_string(i) + ")");
    }
    const double budget = detail::available_beam_power(s, spec, rho, opts.accounting);
    if (!(budget > 0.0))
        throw InfeasibleError("sca", {"total_power"}, "computation power exhausts the power budget");

    ScaSubproblem sp;
    sp.layout = SubproblemLayout::make(k, m, opts.access);
    const auto& L = sp.layout;
    sp.beam_power = budget;
    const double root_p = std::sqrt(budget);
    const double inv_ln2 = 1.0 / std::log(2.0);
    const double bw = s.bandwidth_hz;
    const int block = 2 * m;

    ConvexProgram& p = sp.program;
    p.dimension = L.dimension;

    for (std::size_t i = 0; i < n; ++i) {
        sp.alpha_scale.push_back(st.alpha[i]);
        sp.gamma_scale.push_back(std::max(st.gamma[i], detail::kSlackScaleFloor));
        if (rsma) {
            sp.beta_scale.push_back(st.beta[i]);
            sp.delta_scale.push_back(std::max(st.delta[i], detail::kSlackScaleFloor));
        }
    }

    std::vector<Vector> re_row(n), im_row(n);
    for (int u = 0; u < k; ++u) {
        re_row[static_cast<std::size_t>(u)] = detail::real_part_row(s.channels.row(u));
        im_row[static_cast<std::size_t>(u)] = detail::imag_part_row(s.channels.row(u));
    }

    auto obj = std::make_shared<CompositeFunction>();
    for (int u = 0; u < k; ++u) {
        const auto i = static_cast<std::size_t>(u);
        const double w = 1.0 / rho[i];
        if (rsma)
            obj->linear(L.split + u, -w);
        obj->log1p(L.gamma + u, -w * inv_ln2, sp.gamma_scale[i]);
    }
    p.objective = obj;

    {
        auto g = std::make_shared<CompositeFunction>();
        g->block_norm2(L.beams, L.dimension - L.beams - (rsma ? 4 : 2) * k, 1.0).constant(-1.0);
        p.add("total_power", g);
    }
    if (rsma) {
        for (int u = 0; u < k; ++u) {
            auto g = std::make_shared<CompositeFunction>();
            for (int j = 0; j < k; ++j)
                g->linear(L.split + j, 1.0);
            g->log1p(L.delta + u, -inv_ln2, sp.delta_scale[static_cast<std::size_t>(u)]);
            p.add("common_rate[" + std::to_string(u) + "]", g);
        }
    }
    for (int u = 0; u < k; ++u) {
        const auto i = static_cast<std::size_t>(u);
        const double floor = rho[i] * s.min_semantic_rate_bps[i] / bw;
        auto g = std::make_shared<CompositeFunction>();
        g->constant(floor);
        if (rsma)
            g->linear(L.split + u, -1.0);
        g->log1p(L.gamma + u, -inv_ln2, sp.gamma_scale[i]);
        p.add("min_semantic_rate[" + std::to_string(u) + "]", g, std::max(1.0, floor));
    }
    // Interference bound: sum_{j != k} |h_k^H w_j|^2 + noise <= alpha_k.
    for (int u = 0; u < k; ++u) {
        const auto i = static_cast<std::size_t>(u);
        auto g = std::make_shared<CompositeFunction>();
        const double c = budget / sp.alpha_scale[i];
        for (int j = 0; j < k; ++j) {
            if (j == u)
                continue;
            g->projection2(L.private_beam(j), re_row[i], c).projection2(L.private_beam(j), im_row[i], c);
        }
        g->constant(s.noise_power_w / sp.alpha_scale[i]).linear(L.alpha + u, -1.0);
        p.add("interference[" + std::to_string(u) + "]", g);
    }
    // Tangent upper bound of sqrt(alpha gamma) below Re(h_k^H w_k).
    for (int u = 0; u < k; ++u) {
        const auto i = static_cast<std::size_t>(u);
        const double a0 = st.alpha[i], g0 = st.gamma[i], sg = sp.gamma_scale[i];
        const double root = std::sqrt(a0 * g0);
        auto g = std::make_shared<CompositeFunction>();
        if (opts.flip_private_tangent)
            g->linear(L.alpha + u, -0.5).constant(1.0);
        else
            g->linear(L.alpha + u, 0.5);
        g->linear(L.gamma + u, 0.5 * sg / g0);
        g->projection(L.private_beam(u), re_row[i], -root_p / root);
        p.add("private_sinr[" + std::to_string(u) + "]", g);
    }
    if (rsma) {
        // Received private power: sum_j |h_k^H w_j|^2 + noise <= beta_k.
        for (int u = 0; u < k; ++u) {
            const auto i = static_cast<std::size_t>(u);
            auto g = std::make_shared<CompositeFunction>();
            const double c = budget / sp.beta_scale[i];
            for (int j = 0; j < k; ++j)
                g->projection2(L.private_beam(j), re_row[i], c).projection2(L.private_beam(j), im_row[i], c);
            g->constant(s.noise_power_w / sp.beta_scale[i]).linear(L.beta + u, -1.0);
            p.add("received_power[" + std::to_string(u) + "]", g);
        }
        // delta beta <= |h_k^H w_0|^2 with both sides linearized conservatively:
        // the product by its tangent upper bound in balanced coordinates
        // (u = delta/s_delta, v = beta/beta0), the modulus by its tangent lower bound.
        for (int u = 0; u < k; ++u) {
            const auto i = static_cast<std::size_t>(u);
            const std::complex<double> z0 = s.gain(u, st.allocation.common_beam);
            const double scale = sp.delta_scale[i] * sp.beta_scale[i];
            const double d0 = st.delta[i] / sp.delta_scale[i] - 1.0; // u0 - v0
            Vector c = root_p * (z0.real() * re_row[i] + z0.imag() * im_row[i]);
            auto g = std::make_shared<CompositeFunction>();
            g->square_of_linear({{L.delta + u, 1.0}, {L.beta + u, 1.0}}, 0.25);
            g->linear(L.delta + u, -0.5 * d0).linear(L.beta + u, 0.5 * d0).constant(0.25 * d0 * d0);
            g->projection(L.common_beam(), std::move(c), -2.0 / scale);
            g->constant(std::norm(z0) / scale);
            p.add("common_sinr[" + std::to_string(u) + "]", g);
        }
    }
    const auto nonneg = [&](const char* name, int offset) {
        for (int u = 0; u < k; ++u) {
            auto g = std::make_shared<CompositeFunction>();
            g->linear(offset + u, -1.0);
            p.add(std::string(name) + "[" + std::to_string(u) + "]", g);
        }
    };
    if (rsma)
        nonneg("rate_split_nonneg", L.split);
    nonneg("alpha_nonneg", L.alpha);
    if (rsma)
        nonneg("beta_nonneg", L.beta);
    nonneg("gamma_nonneg", L.gamma);
    if (rsma)
        nonneg("delta_nonneg", L.delta);

    // Strictly feasible start: the linearization point with beams shrunk by
    // (1 - eps) and slacks moved inside. Dropped if it is not strictly feasible
    // (the solver then runs phase I from it).
    const double eps = opts.interior_margin;
    Vector x = Vector::Zero(L.dimension);
    const Allocation& a = st.allocation;
    if (rsma)
        x.segment(L.common_beam(), block) = (1.0 - eps) / root_p * detail::stack(a.common_beam);
    for (int u = 0; u < k; ++u)
        x.segment(L.private_beam(u), block) = (1.0 - eps) / root_p * detail::stack(a.private_beams.col(u));
    double capacity = std::numeric_limits<double>::infinity();
    const double shrink2 = (1.0 - eps) * (1.0 - eps);
    for (int u = 0; u < k; ++u) {
        const auto i = static_cast<std::size_t>(u);
        const double interference = st.alpha[i] - s.noise_power_w;
        const double ah = (shrink2 * interference + s.noise_power_w) / st.alpha[i] + eps;
        x[L.alpha + u] = ah;
        const double sg = sp.gamma_scale[i];
        const double z = std::abs(s.gain(u, a.private_beams.col(u)));
        // 0.5 ah + 0.5 (sg/g0) gh < (1-eps) z / sqrt(a0 g0)
        const double lim = (1.0 - eps) * z / std::sqrt(st.alpha[i] * st.gamma[i]);
        x[L.gamma + u] = std::max((2.0 * lim - ah - eps) * st.gamma[i] / sg, 0.0);
        if (!rsma)
            continue;
        const double received = st.beta[i] - s.noise_power_w;
        const double v = (shrink2 * received + s.noise_power_w) / st.beta[i] + eps;
        x[L.beta + u] = v;
        const double z0 = std::norm(s.gain(u, a.common_beam));
        const double target = (1.0 - 2.0 * eps) * z0 / (sp.delta_scale[i] * sp.beta_scale[i]);
        const double d0 = st.delta[i] / sp.delta_scale[i] - 1.0;
        // 1/4 uh^2 + b uh + c0 < target
        const double b = 0.5 * v - 0.5 * d0;
        const double c0 = 0.25 * v * v + 0.5 * d0 * v + 0.25 * d0 * d0;
        const double disc = b * b - (c0 - target);
        double uh = 0.0;
        if (disc > 0.0) {
            const double lo = std::max(-2.0 * b - 2.0 * std::sqrt(disc), 0.0);
            const double hi = -2.0 * b + 2.0 * std::sqrt(disc);
            if (hi > lo)
                uh = lo + 0.5 * (hi - lo);
        }
        x[L.delta + u] = uh;
        capacity = std::min(capacity, std::log2(1.0 + sp.delta_scale[i] * uh));
    }
    if (rsma) {
        const double cap = (1.0 - eps) * capacity;
        double total = 0.0;
        for (double v : a.rate_split)
            total += std::max(v, 0.0) / bw;
        for (int u = 0; u < k; ++u) {
            const double share = total > 0.0
                ? (std::max(a.rate_split[static_cast<std::size_t>(u)], 0.0) / bw + eps * total / k) / (total * (1.0 + eps))
                : 1.0 / (2.0 * k);
            x[L.split + u] = cap > 0.0 ? cap * share : 0.0;
        }
    }
    p.start = x;
    return sp;
}

/// Physical allocation encoded by a subproblem solution.
inline Allocation decode_solution(const Scenario& s, const ScaSubproblem& sp, const VectorCRef& x,
                                  const std::vector<double>& rho)
{
    const auto& L = sp.layout;
    const double root_p = std::sqrt(sp.beam_power);
    const int block = 2 * L.antennas;
    Allocation a;
    a.ratios = rho;
    a.common_beam = Eigen::VectorXcd::Zero(L.antennas);
    if (L.common)
        a.common_beam = root_p * detail::unstack(x.segment(L.common_beam(), block));
    a.private_beams.resize(L.antennas, L.users);
    for (int u = 0; u < L.users; ++u)
        a.private_beams.col(u) = root_p * detail::unstack(x.segment(L.private_beam(u), block));
    a.rate_split.assign(static_cast<std::size_t>(L.users), 0.0);
    if (L.common)
        for (int u = 0; u < L.users; ++u)
            a.rate_split[static_cast<std::size_t>(u)] = std::max(x[L.split + u], 0.0) * s.bandwidth_hz;
    return a;
}

namespace detail {

inline double relative_margin(double actual, double implied)
{
    return (actual - implied) / std::max(1.0, std::abs(implied));
}

// Prepares a caller-supplied allocation as a linearization point.
inline Allocation prepare_start(const Scenario& s, const CompLoadSpec& spec, Allocation a,
                                const std::vector<double>& rho, const ScaOptions& opts)
{
    check_dimensions(s, a);
    a.ratios = rho;
    const double budget = available_beam_power(s, spec, rho, opts.accounting);
    if (!(budget > 0.0))
        throw InfeasibleError("sca", {"total_power"}, "computation power exhausts the power budget");
    if (opts.access == MultipleAccess::sdma) {
        a.common_beam.setZero();
        std::fill(a.rate_split.begin(), a.rate_split.end(), 0.0);
    } else if (a.common_beam.squaredNorm() == 0.0) {
        // An all-private start has no common stream to linearize around: seed
        // a tiny one, taking 1e-8 of the beam power from the private beams.
        const double eta = 1e-8;
        Eigen::VectorXcd sum = Eigen::VectorXcd::Zero(s.num_antennas);
        for (int k = 0; k < s.num_users; ++k)
            sum += matched_direction(s, k);
        if (sum.norm() < 1e-12)
            sum = matched_direction(s, 0);
        const double p = std::max(a.transmit_power(), 1e-30);
        a.private_beams *= std::sqrt(1.0 - eta);
        a.common_beam = std::sqrt(eta * p) * sum / sum.norm();
    }
    const double p = a.transmit_power();
    if (p > budget) {
        const double c = std::sqrt(budget / p);
        a.common_beam *= c;
        a.private_beams *= c;
    }
    if (opts.access == MultipleAccess::rsma) {
        // Keep the split within the common rate of the (possibly rescaled) beams.
        double total = 0.0;
        for (double v : a.rate_split)
            total += std::max(v, 0.0);
        const double r0 = min_common_rate(s, a);
        for (double& v : a.rate_split)
            v = std::max(v, 0.0) * (total > r0 && total > 0.0 ? r0 / total : 1.0);
    }
    rotate_private_phases(s, a);
    return a;
}

} // namespace detail

/// Successive convex approximation for fixed ratios: solves the convexified
/// subproblem, moves the linearization point to its solution, and repeats until
/// the relative change of the sum semantic rate drops below tol_sca.
inline ScaResult sca_iterate(const Scenario& s, const CompLoadSpec& spec, const std::vector<double>& rho,
                             const ScaOptions& opts = {}, const std::optional<Allocation>& start = std::nullopt)
{
    using Clock = std::chrono::steady_clock;
    Allocation current = start ? detail::prepare_start(s, spec, *start, rho, opts)
                               : init_point(s, spec, rho, opts.access, opts.accounting).allocation;
    const double budget = detail::available_beam_power(s, spec, rho, opts.accounting);

    ScaResult out;
    double previous = std::numeric_limits<double>::quiet_NaN();
    for (int it = 0; it < opts.max_sca_iters; ++it) {
        const auto t0 = Clock::now();
        detail::revive_streams(s, current, budget, opts.access);
        rotate_private_phases(s, current);
        SubproblemState st = tight_state(s, spec, current, opts.accounting);
        st.iteration = it;
        const ScaSubproblem sp = build_subproblem(s, spec, rho, st, opts);
        const SolveResult r = solve_barrier(sp.program, opts.solver);
        if (r.status == SolveStatus::infeasible) {
            if (!out.trace.empty())
                break; // cannot happen in exact arithmetic: the previous iterate stays feasible
            throw InfeasibleError("sca", r.violated.empty() ? std::vector<std::string>{"unknown"} : r.violated,
                                  r.message);
        }
        if (!r.x.allFinite() || (r.status != SolveStatus::converged && r.status != SolveStatus::numerical_failure)) {
            if (!out.trace.empty())
                break;
            throw NumericalError("sca subproblem failed: " + std::string(to_string(r.status)) + " " + r.message);
        }
        Allocation next = decode_solution(s, sp, r.x, rho);
        const RateReport rep = evaluate_rates(s, spec, next, opts.accounting);

        ScaIteration rec;
        rec.iteration = it;
        rec.objective_bps = rep.sum_semantic_rate();
        rec.subproblem_objective_bps = -r.objective * s.bandwidth_hz;
        rec.kkt_residual = std::max({r.kkt.stationarity, r.kkt.primal, r.kkt.complementarity, -r.kkt.min_dual});
        rec.status = r.status;
        rec.newton_steps = r.newton_iterations + r.phase1_newton_iterations;
        rec.common_rate_margin = std::numeric_limits<double>::infinity();
        rec.private_rate_margin = std::numeric_limits<double>::infinity();
        const auto& L = sp.layout;
        for (int u = 0; u < s.num_users; ++u) {
            const auto i = static_cast<std::size_t>(u);
            const double implied_p = s.bandwidth_hz * std::log2(1.0 + sp.gamma_scale[i] * r.x[L.gamma + u]);
            rec.private_rate_margin = std::min(rec.private_rate_margin,
                                               detail::relative_margin(rep.private_rates[i], implied_p));
            if (L.common) {
                const double implied_c = s.bandwidth_hz * std::log2(1.0 + sp.delta_scale[i] * r.x[L.delta + u]);
                rec.common_rate_margin = std::min(rec.common_rate_margin,
                                                  detail::relative_margin(rep.common_rates[i], implied_c));
            }
        }
        if (!L.common)
            rec.common_rate_margin = 0.0;
        rec.step_time_ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
        out.trace.push_back(rec);

        current = std::move(next);
        out.allocation = current;
        out.report = rep;
        const double obj = rec.objective_bps;
        if (std::isfinite(previous) && std::abs(obj - previous) <= opts.tol_sca * std::max(1.0, std::abs(previous))) {
            out.converged = true;
            break;
        }
        previous = obj;
    }
    rotate_private_phases(s, out.allocation);
    return out;
}

/// CSV rows: iter,objective_bps,kkt_residual,step_time_ms
inline void write_trace_csv(std::ostream& os, const std::vector<ScaIteration>& trace)
{
    os << "iter,objective_bps,kkt_residual,step_time_ms\n";
    char buf[128];
    for (const auto& t : trace) {
        std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.3f\n", t.iteration, t.objective_bps, t.kkt_residual,
                      t.step_time_ms);
        os << buf;
    }
}

} // namespace semopt

#endif // SEMOPT_SCA_BEAMFORMING_HPP
