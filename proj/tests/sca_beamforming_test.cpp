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

#include <cmath>
#include <complex>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "semopt/sca_beamforming.hpp"
#include "test_support.hpp"

namespace semopt {
namespace {

using testing::scalar_scenario;
using testing::reference_comp_load;
using testing::reference_scenario;

std::vector<double> ones(int k) { return std::vector<double>(static_cast<std::size_t>(k), 1.0); }

TEST(InitPoint, UsesNinetyPercentOfAvailablePower)
{
    const Scenario s = reference_scenario(7);
    const CompLoadSpec spec = reference_comp_load();
    const auto st = init_point(s, spec, ones(4));
    // P_avail = 1 - 4 * f(1) = 1 - 4 * 0.02
    EXPECT_NEAR(st.allocation.transmit_power(), 0.9 * 0.92, 1e-10);
}

TEST(InitPoint, SingleAntennaBeamIsMatchedFilter)
{
    Scenario s = scalar_scenario(1, 1);
    s.channels(0, 0) = {0.6, -0.8}; // row stores h^H, so h = 0.6 + 0.8i
    const auto st = init_point(s, default_comp_load(), ones(1));
    const std::complex<double> w = st.allocation.private_beams(0, 0);
    const std::complex<double> h(0.6, 0.8);
    EXPECT_NEAR(std::abs(w / std::abs(w) - h / std::abs(h)), 0.0, 1e-15);
}

TEST(InitPoint, SlacksAreTight)
{
    const Scenario s = reference_scenario(3);
    const auto st = init_point(s, reference_comp_load(), ones(4));
    const Allocation& a = st.allocation;
    for (int k = 0; k < 4; ++k) {
        const auto i = static_cast<std::size_t>(k);
        double interference = s.noise_power_w;
        for (int j = 0; j < 4; ++j)
            if (j != k)
                interference += std::norm(s.gain(k, a.private_beams.col(j)));
        const double own = std::norm(s.gain(k, a.private_beams.col(k)));
        EXPECT_DOUBLE_EQ(st.alpha[i], interference);
        EXPECT_DOUBLE_EQ(st.gamma[i], own / interference);
        EXPECT_DOUBLE_EQ(st.beta[i], interference + own);
        EXPECT_DOUBLE_EQ(st.delta[i], std::norm(s.gain(k, a.common_beam)) / (interference + own));
    }
}

TEST(InitPoint, StarvedBudgetIsInfeasible)
{
    Scenario s = reference_scenario(7);
    s.max_power_w = 0.05; // below 4 * f(1) = 0.08
    try {
        init_point(s, reference_comp_load(), ones(4));
        FAIL() << "expected InfeasibleError";
    } catch (const InfeasibleError& e) {
        EXPECT_EQ(e.stage(), "sca");
    }
}

TEST(BuildSubproblem, RsmaCounts)
{
    const Scenario s = reference_scenario(7);
    const auto st = init_point(s, reference_comp_load(), ones(4));
    const auto sp = build_subproblem(s, reference_comp_load(), ones(4), st);
    EXPECT_EQ(sp.program.constraints.size(), 45u); // 11K + 1
    EXPECT_EQ(sp.program.dimension, 5 * 4 + 2 * 8 * 5);
}

TEST(BuildSubproblem, SdmaDropsCommonBlock)
{
    const Scenario s = reference_scenario(7);
    ScaOptions o;
    o.access = MultipleAccess::sdma;
    const auto st = init_point(s, reference_comp_load(), ones(4), MultipleAccess::sdma);
    const auto sp = build_subproblem(s, reference_comp_load(), ones(4), st, o);
    EXPECT_EQ(sp.program.dimension, 2 * 4 + 2 * 8 * 4);
    for (const auto& c : sp.program.constraints) {
        EXPECT_EQ(c.label.find("common"), std::string::npos) << c.label;
        EXPECT_EQ(c.label.find("delta"), std::string::npos) << c.label;
    }
}

TEST(BuildSubproblem, LabelsAreUnique)
{
    const Scenario s = reference_scenario(7);
    const auto st = init_point(s, reference_comp_load(), ones(4));
    const auto sp = build_subproblem(s, reference_comp_load(), ones(4), st);
    std::set<std::string> seen;
    for (const auto& c : sp.program.constraints)
        EXPECT_TRUE(seen.insert(c.label).second) << c.label;
    EXPECT_TRUE(seen.count("total_power"));
    EXPECT_TRUE(seen.count("private_sinr[3]"));
    EXPECT_TRUE(seen.count("common_sinr[0]"));
}

TEST(BuildSubproblem, LinearizationPointIsFeasible)
{
    const Scenario s = reference_scenario(11);
    const auto st = init_point(s, reference_comp_load(), ones(4));
    const auto sp = build_subproblem(s, reference_comp_load(), ones(4), st);
    ASSERT_TRUE(sp.program.start.has_value());
    for (const auto& c : sp.program.constraints)
        EXPECT_LT(c.fn->value(*sp.program.start), 0.0) << c.label;
}

class ScaReference : public ::testing::TestWithParam<int> {};

TEST_P(ScaReference, MonotoneConservativeAndFeasible)
{
    const Scenario s = reference_scenario(static_cast<std::uint64_t>(GetParam()));
    const CompLoadSpec spec = reference_comp_load();
    const ScaResult r = sca_iterate(s, spec, ones(4));
    ASSERT_FALSE(r.trace.empty());
    for (std::size_t i = 1; i < r.trace.size(); ++i) {
        const double prev = r.trace[i - 1].objective_bps;
        EXPECT_GE(r.trace[i].objective_bps, prev - 1e-8 * (1.0 + std::abs(prev))) << "step " << i;
    }
    for (const auto& t : r.trace) {
        EXPECT_GE(t.private_rate_margin, -1e-6);
        EXPECT_GE(t.common_rate_margin, -1e-6);
        if (t.status == SolveStatus::converged) {
            EXPECT_LE(t.kkt_residual, 1e-6);
        }
    }
    const auto f = check_feasibility(s, spec, r.allocation);
    EXPECT_TRUE(f.violated(1e-6).empty()) << join(f.violated(1e-6));
    EXPECT_DOUBLE_EQ(r.report.sum_semantic_rate(), r.trace.back().objective_bps);
}

INSTANTIATE_TEST_SUITE_P(Seeds, ScaReference, ::testing::Values(1, 7, 19));

TEST(ScaIterate, SingleUserReachesFullPowerRate)
{
    Scenario s = scalar_scenario(1, 1);
    s.channels(0, 0) = {0.6, -0.8};
    s.max_power_w = 100.0;
    const CompLoadSpec spec = default_comp_load(); // f(1) = 0.2
    for (auto access : {MultipleAccess::rsma, MultipleAccess::sdma}) {
        ScaOptions o;
        o.access = access;
        const ScaResult r = sca_iterate(s, spec, ones(1), o);
        EXPECT_NEAR(r.report.sum_semantic_rate(), std::log2(1.0 + 99.8), 1e-4 * std::log2(100.8)) << to_string(access);
    }
}

TEST(ScaIterate, SdmaHasNoCommonStream)
{
    const Scenario s = reference_scenario(5);
    ScaOptions o;
    o.access = MultipleAccess::sdma;
    const ScaResult r = sca_iterate(s, reference_comp_load(), ones(4), o);
    EXPECT_EQ(r.allocation.common_beam.squaredNorm(), 0.0);
    for (double a : r.allocation.rate_split)
        EXPECT_EQ(a, 0.0);
}

TEST(ScaIterate, PhaseRotationChangesNoRate)
{
    const Scenario s = reference_scenario(7);
    const CompLoadSpec spec = reference_comp_load();
    const ScaResult r = sca_iterate(s, spec, ones(4));
    Allocation rotated = r.allocation;
    for (int k = 0; k < 4; ++k)
        rotated.private_beams.col(k) *= std::polar(1.0, 0.7 * (k + 1));
    const RateReport a = evaluate_rates(s, spec, r.allocation);
    const RateReport b = evaluate_rates(s, spec, rotated);
    for (std::size_t k = 0; k < 4; ++k) {
        EXPECT_NEAR(a.common_rates[k], b.common_rates[k], 1e-10 * a.common_rates[k]);
        EXPECT_NEAR(a.private_rates[k], b.private_rates[k], 1e-10 * a.private_rates[k]);
    }
}

TEST(ScaIterate, WarmStartDoesNotLoseObjective)
{
    const Scenario s = reference_scenario(7);
    const CompLoadSpec spec = reference_comp_load();
    const ScaResult first = sca_iterate(s, spec, ones(4));
    const ScaResult again = sca_iterate(s, spec, ones(4), {}, first.allocation);
    const double f = first.report.sum_semantic_rate();
    EXPECT_GE(again.report.sum_semantic_rate(), f - 1e-6 * f);
}

TEST(ScaIterate, RatioCountMismatchThrows)
{
    const Scenario s = reference_scenario(7);
    EXPECT_THROW(sca_iterate(s, reference_comp_load(), ones(3)), std::invalid_argument);
}

TEST(ScaIterate, TraceCsvHeader)
{
    std::vector<ScaIteration> trace(2);
    trace[1].iteration = 1;
    trace[1].objective_bps = 2.5;
    std::ostringstream os;
    write_trace_csv(os, trace);
    const std::string out = os.str();
    EXPECT_EQ(out.substr(0, out.find('\n')), "iter,objective_bps,kkt_residual,step_time_ms");
    EXPECT_NE(out.find("\n1,2.5,0,0.000\n"), std::string::npos);
}

} // namespace
} // namespace semopt
