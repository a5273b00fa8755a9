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
#include <cstdint>

#include <gtest/gtest.h>

#include "semopt/scenario.hpp"

namespace semopt {
namespace {

Scenario reference(std::uint64_t seed = 7)
{
    Scenario s;
    s.num_users = 4;
    s.num_antennas = 8;
    s.bandwidth_hz = 10e6;
    s.noise_power_w = 1e-9;
    s.max_power_w = dbm_to_watts(30.0);
    s.comp_power_coeff = 1.0;
    s.min_semantic_rate_bps.assign(4, 0.0);
    s.min_ratio.assign(4, 0.25);
    s.channels = generate_channels(4, 8, seed);
    return s;
}

TEST(GenerateChannels, SameSeedIsBitIdentical)
{
    const auto a = generate_channels(1, 1, 42);
    const auto b = generate_channels(1, 1, 42);
    ASSERT_EQ(a.rows(), 1);
    EXPECT_EQ(a(0, 0).real(), b(0, 0).real());
    EXPECT_EQ(a(0, 0).imag(), b(0, 0).imag());
}

TEST(GenerateChannels, UnitAveragePower)
{
    const auto h = generate_channels(4, 8, 7);
    EXPECT_EQ(h.rows(), 4);
    EXPECT_EQ(h.cols(), 8);
    // 10^6 entries at a fixed seed.
    const auto big = generate_channels(1000, 1000, 7);
    const double mean = big.cwiseAbs2().mean();
    EXPECT_NEAR(mean, 1.0, 0.01);
    // Circular symmetry: real and imaginary parts each carry half the power.
    EXPECT_NEAR(big.real().array().square().mean(), 0.5, 0.005);
    EXPECT_NEAR(big.mean().real(), 0.0, 0.005);
}

TEST(GenerateChannels, DistinctSeedsDiffer)
{
    const auto a = generate_channels(2, 3, 1);
    const auto b = generate_channels(2, 3, 2);
    EXPECT_FALSE(a.isApprox(b));
}

TEST(Units, DbmConversion)
{
    EXPECT_EQ(dbm_to_watts(30.0), 1.0);
    EXPECT_NEAR(dbm_to_watts(-60.0), 1e-9, 1e-24);
    EXPECT_NEAR(watts_to_dbm(1e-3), 0.0, 1e-12);
    for (double dbm : {-90.0, -13.5, 0.0, 27.0, 46.0})
        EXPECT_NEAR(watts_to_dbm(dbm_to_watts(dbm)), dbm, 1e-12);
}

TEST(ValidateScenario, AcceptsReferenceDefaults)
{
    const Scenario s = reference();
    EXPECT_NO_THROW(validate_scenario(s));
    EXPECT_EQ(s.max_power_w, 1.0);
}

TEST(ValidateScenario, RejectsZeroMinRatio)
{
    Scenario s = reference();
    s.min_ratio[0] = 0.0;
    try {
        validate_scenario(s);
        FAIL() << "expected rejection";
    } catch (const ValidationError& e) {
        EXPECT_TRUE(e.names("min_ratio"));
        EXPECT_EQ(e.violations().size(), 1u);
    }
}

TEST(ValidateScenario, RejectsZeroChannelRow)
{
    Scenario s = reference();
    s.channels.row(2).setZero();
    try {
        validate_scenario(s);
        FAIL() << "expected rejection";
    } catch (const ValidationError& e) {
        EXPECT_TRUE(e.names("channels"));
    }
}

TEST(ValidateScenario, ListsEveryViolation)
{
    Scenario s = reference();
    s.bandwidth_hz = 0.0;
    s.noise_power_w = -1.0;
    s.comp_power_coeff = -2.0;
    s.min_semantic_rate_bps.pop_back();
    try {
        validate_scenario(s);
        FAIL() << "expected rejection";
    } catch (const ValidationError& e) {
        EXPECT_TRUE(e.names("bandwidth_hz"));
        EXPECT_TRUE(e.names("noise_power_w"));
        EXPECT_TRUE(e.names("comp_power_coeff"));
        EXPECT_TRUE(e.names("min_semantic_rate_bps"));
        EXPECT_EQ(e.violations().size(), 4u);
    }
}

TEST(ValidateScenario, ZeroComputationCoefficientAllowed)
{
    Scenario s = reference();
    s.comp_power_coeff = 0.0;
    EXPECT_NO_THROW(validate_scenario(s));
}

TEST(PathLoss, ScalesRowsByAmplitude)
{
    auto h = generate_channels(2, 4, 3);
    const auto orig = h;
    apply_path_loss(h, {20.0, 0.0});
    EXPECT_NEAR(h.row(0).squaredNorm(), orig.row(0).squaredNorm() * 0.01, 1e-12);
    EXPECT_EQ(h.row(1), orig.row(1));
}

} // namespace
} // namespace semopt
