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
#include <random>

#include <gtest/gtest.h>

#include "semopt/random_instances.hpp"
#include "semopt/ratio_opt.hpp"
#include "test_support.hpp"

namespace semopt {
namespace {

Scenario ratio_scenario(int k, double max_power = 1.0, double cmin = 0.0, double rho_min = 0.25)
{
    Scenario s = testing::scalar_scenario(k, 1);
    s.max_power_w = max_power;
    s.min_semantic_rate_bps.assign(static_cast<std::size_t>(k), cmin);
    s.min_ratio.assign(static_cast<std::size_t>(k), rho_min);
    return s;
}

struct RandomRatioInstance {
    Scenario s;
    CompLoadSpec spec;
    std::vector<double> rates;
    double transmit = 0.5;
};

RandomRatioInstance random_instance(std::mt19937_64& rng)
{
    RatioInstance r = random_ratio_instance(rng);
    return {r.scenario, r.spec, r.rates, r.transmit_power};
}

TEST(SelectSegments, UnconstrainedSingleUserTakesLastSegment)
{
    const Scenario s = ratio_scenario(1, 100.0);
    EXPECT_EQ(select_segments(s, default_comp_load(), {1e6}, 0.0), SegmentAssignment{3});
}

TEST(SelectSegments, BudgetCoveringOnlyFirstMidpoint)
{
    // f(0.85) = 0.35, f(0.575) = 0.875
    const Scenario s = ratio_scenario(1, 0.6);
    EXPECT_EQ(select_segments(s, default_comp_load(), {1e6}, 0.1), SegmentAssignment{1});
}

TEST(SelectSegments, EnumeratesEveryAssignment)
{
    SegmentAssignment a(4, 1);
    int count = 1;
    while (detail::next_assignment(a, 3))
        ++count;
    EXPECT_EQ(count, 81);
}

TEST(SelectSegments, NoBudgetIsInfeasible)
{
    const Scenario s = ratio_scenario(2, 1.0);
    try {
        select_segments(s, default_comp_load(), {1e6, 1e6}, 0.9);
        FAIL() << "expected InfeasibleError";
    } catch (const InfeasibleError& e) {
        EXPECT_EQ(e.stage(), "segment");
        ASSERT_EQ(e.binding().size(), 1u);
        EXPECT_EQ(e.binding()[0], "total_power");
    }
    EXPECT_THROW(select_segments(s, default_comp_load(), {1e6, 1e6}, 1.0), InfeasibleError);
}

TEST(SelectSegments, RateFloorAndBudgetConflict)
{
    // R / c_min = 0.6 excludes segment 1 (midpoint 0.85); a 0.6 W budget
    // cannot pay f(0.575) = 0.875 for segment 2.
    const Scenario s = ratio_scenario(1, 0.7, 1e6 / 0.6);
    try {
        select_segments(s, default_comp_load(), {1e6}, 0.1);
        FAIL() << "expected InfeasibleError";
    } catch (const InfeasibleError& e) {
        EXPECT_EQ(e.binding(), (std::vector<std::string>{"min_semantic_rate", "total_power"}));
    }
    const Scenario rich = ratio_scenario(1, 100.0, 1e6 / 0.6);
    EXPECT_EQ(select_segments(rich, default_comp_load(), {1e6}, 0.1), SegmentAssignment{3});
}

TEST(SelectSegments, MatchesIndependentEnumeration)
{
    std::mt19937_64 rng(99);
    for (int t = 0; t < 200; ++t) {
        const auto r = random_instance(rng);
        const int k = r.s.num_users, d = r.spec.segments();
        const auto mid = midpoints(r.spec);
        SegmentAssignment best;
        double best_value = -1.0;
        const int total = static_cast<int>(std::pow(d, k));
        for (int code = 0; code < total; ++code) {
            SegmentAssignment a;
            double load = 0.0, value = 0.0;
            for (int i = 0, c = code; i < k; ++i, c /= d)
                a.insert(a.begin(), 1 + c % d);
            for (int i = 0; i < k; ++i) {
                const double m = mid[static_cast<std::size_t>(a[static_cast<std::size_t>(i)] - 1)];
                load += load_of(r.spec, m);
                value += r.rates[static_cast<std::size_t>(i)] / m;
            }
            if (r.transmit + load <= r.s.max_power_w && value > best_value) {
                best_value = value;
                best = a;
            }
        }
        EXPECT_EQ(select_segments(r.s, r.spec, r.rates, r.transmit), best) << "instance " << t;
    }
}

TEST(InitRatios, CeilingWithoutRateFloor)
{
    const Scenario s = ratio_scenario(1);
    EXPECT_DOUBLE_EQ(init_ratios(s, default_comp_load(), {2}, {1e6})[0], 0.7);
}

TEST(InitRatios, CappedByRateFloor)
{
    const Scenario s = ratio_scenario(1, 1.0, 10e6);
    EXPECT_DOUBLE_EQ(init_ratios(s, default_comp_load(), {1}, {7e6})[0], 0.7);
}

TEST(InitRatios, CapBelowDomainIsInfeasible)
{
    const Scenario s = ratio_scenario(1, 1.0, 10e6);
    try {
        init_ratios(s, default_comp_load(), {3}, {2e6});
        FAIL() << "expected InfeasibleError";
    } catch (const InfeasibleError& e) {
        EXPECT_EQ(e.stage(), "greedy");
        EXPECT_EQ(e.binding()[0], "min_semantic_rate[0]");
    }
}

TEST(RemainingPower, SingleUserGetsEverythingLeft)
{
    const Scenario s = ratio_scenario(1, 1.0);
    EXPECT_DOUBLE_EQ(remaining_power(s, default_comp_load(), {1}, {1.0}, 0.4, 0), 0.6);
}

TEST(RemainingPower, OtherUserCharged)
{
    const Scenario s = ratio_scenario(2, 1.0);
    EXPECT_NEAR(remaining_power(s, default_comp_load(), {2, 1}, {0.6, 1.0}, 0.5, 0), 0.3, 1e-15);
}

TEST(Greedy, SecondCaseClosedForm)
{
    const Scenario s = ratio_scenario(1, 1.0);
    const CompLoadSpec spec{{-1.0}, {1.2}, {0.25}};
    const GreedyResult g = greedy_ratios(s, spec, {1}, {1e6}, 0.4);
    EXPECT_NEAR(g.ratios[0], 0.6, 1e-15);
    EXPECT_NEAR(g.objective, 1e6 / 0.6, 1e-6);
}

TEST(Greedy, FirstCaseReachesSegmentFloor)
{
    const Scenario s = ratio_scenario(1, 1.0);
    const GreedyResult g = greedy_ratios(s, default_comp_load(), {1}, {1e6}, 0.4);
    EXPECT_DOUBLE_EQ(g.ratios[0], 0.7);
}

TEST(Greedy, AbundantPowerGivesFloors)
{
    const Scenario s = ratio_scenario(3, 100.0, 0.0, 0.3);
    const GreedyResult g = greedy_ratios(s, default_comp_load(), {1, 2, 3}, {1e6, 2e6, 3e6}, 0.0);
    EXPECT_DOUBLE_EQ(g.ratios[0], 0.7);
    EXPECT_DOUBLE_EQ(g.ratios[1], 0.45);
    EXPECT_DOUBLE_EQ(g.ratios[2], 0.3); // rho_min above C_3
}

TEST(Greedy, VisitsStrongUsersFirstWithIndexTieBreak)
{
    const Scenario s = ratio_scenario(3, 10.0);
    const GreedyResult g = greedy_ratios(s, default_comp_load(), {2, 2, 2}, {1e6, 3e6, 3e6}, 0.0);
    EXPECT_EQ(g.order, (std::vector<int>{1, 2, 0}));
}

TEST(Greedy, StrongUserGetsThePower)
{
    // Budget for one user at the segment floor and the other at its ceiling.
    const Scenario s = ratio_scenario(2, 0.5 + 1.25 + 0.5);
    const GreedyResult g = greedy_ratios(s, default_comp_load(), {2, 2}, {1e6, 5e6}, 0.5);
    EXPECT_DOUBLE_EQ(g.ratios[1], 0.45);
    EXPECT_NEAR(g.ratios[0], 0.7, 1e-12);
}

TEST(Greedy, UnaffordableInitializationIsInfeasible)
{
    const Scenario s = ratio_scenario(2, 1.0);
    try {
        greedy_ratios(s, default_comp_load(), {3, 3}, {1e6, 1e6}, 0.5);
        FAIL() << "expected InfeasibleError";
    } catch (const InfeasibleError& e) {
        EXPECT_EQ(e.stage(), "greedy");
        EXPECT_EQ(e.binding()[0], "total_power");
    }
}

class GreedyRandom : public ::testing::Test {
protected:
    std::mt19937_64 rng{2026};
};

TEST_F(GreedyRandom, FeasibleAndNoWorseThanInitialization)
{
    for (int t = 0; t < 200; ++t) {
        const auto r = random_instance(rng);
        const auto assign = select_segments(r.s, r.spec, r.rates, r.transmit);
        const GreedyResult g = greedy_ratios(r.s, r.spec, assign, r.rates, r.transmit);
        double load = 0.0;
        for (int k = 0; k < r.s.num_users; ++k) {
            const auto i = static_cast<std::size_t>(k);
            EXPECT_GE(g.ratios[i], std::max(r.spec.floor(assign[i]), r.s.min_ratio[i]));
            EXPECT_LE(g.ratios[i], r.spec.ceiling(assign[i]));
            load += r.spec.segment_load(assign[i], g.ratios[i]);
        }
        EXPECT_LE(r.transmit + load, r.s.max_power_w + 1e-9);
        EXPECT_GE(g.objective, ratio_objective(r.rates, g.initial));
    }
}

TEST_F(GreedyRandom, ConditionallyOptimalPerUser)
{
    const double step = 1e-4;
    for (int t = 0; t < 100; ++t) {
        const auto r = random_instance(rng);
        const auto assign = select_segments(r.s, r.spec, r.rates, r.transmit);
        const GreedyResult g = greedy_ratios(r.s, r.spec, assign, r.rates, r.transmit);
        for (const auto& st : g.steps) {
            const auto i = static_cast<std::size_t>(st.user);
            const double budget = remaining_power(r.s, r.spec, assign, st.ratios_before, r.transmit, st.user);
            const double lo = std::max(r.spec.floor(assign[i]), r.s.min_ratio[i]);
            const double hi = g.initial[i];
            for (double rho = lo; rho <= hi; rho += step)
                if (r.spec.segment_load(assign[i], rho) <= budget) {
                    EXPECT_LE(r.rates[i] / rho, r.rates[i] / st.chosen * (1.0 + 1e-12))
                        << "instance " << t << " user " << st.user;
                }
        }
    }
}

TEST_F(GreedyRandom, OracleDominatesGreedy)
{
    const double step = 1e-3;
    for (int t = 0; t < 30; ++t) {
        const auto r = random_instance(rng);
        const auto assign = select_segments(r.s, r.spec, r.rates, r.transmit);
        const GreedyResult g = greedy_ratios(r.s, r.spec, assign, r.rates, r.transmit);
        const OracleResult o = brute_force_oracle(r.s, r.spec, r.rates, r.transmit, step);
        ASSERT_TRUE(o.feasible);
        // One grid step costs at most step / floor relative per user.
        const double slack = r.s.num_users * step / r.spec.domain_floor();
        EXPECT_GE(o.objective, g.objective * (1.0 - slack)) << "instance " << t;
    }
}

TEST_F(GreedyRandom, LowerRatioRaisesObjective)
{
    for (int t = 0; t < 50; ++t) {
        const auto r = random_instance(rng);
        const auto assign = select_segments(r.s, r.spec, r.rates, r.transmit);
        const GreedyResult g = greedy_ratios(r.s, r.spec, assign, r.rates, r.transmit);
        for (std::size_t k = 0; k < g.ratios.size(); ++k) {
            auto rho = g.ratios;
            rho[k] -= 1e-6;
            EXPECT_GT(ratio_objective(r.rates, rho), g.objective);
        }
    }
}

TEST(Oracle, SingleUserMatchesGreedyOnFixedSegment)
{
    const Scenario s = ratio_scenario(1, 1.0);
    const OracleResult o = brute_force_oracle(s, default_comp_load(), {1e6}, 0.4, 1e-3);
    ASSERT_TRUE(o.feasible);
    // Budget 0.6 W: segment 2 allows (0.6 - 2.6) / -3 = 2/3.
    EXPECT_NEAR(o.ratios[0], 2.0 / 3.0, 1e-12);
    EXPECT_EQ(o.assignment, SegmentAssignment{2});
}

TEST(Oracle, EvaluationCountForTwoUsers)
{
    const Scenario s = ratio_scenario(2, 10.0);
    const CompLoadSpec spec{{-1.0, -3.0}, {1.2, 2.6}, {0.7, 0.45}};
    const OracleResult o = brute_force_oracle(s, spec, {1e6, 2e6}, 0.0, 1e-3);
    EXPECT_TRUE(o.feasible);
    EXPECT_LE(o.evaluations, 4'000'000);
    EXPECT_DOUBLE_EQ(o.ratios[0], 0.45);
    EXPECT_DOUBLE_EQ(o.ratios[1], 0.45);
}

TEST(Oracle, ReportsInfeasible)
{
    const Scenario s = ratio_scenario(2, 0.5);
    EXPECT_FALSE(brute_force_oracle(s, default_comp_load(), {1e6, 1e6}, 0.45, 1e-2).feasible);
}

} // namespace
} // namespace semopt
