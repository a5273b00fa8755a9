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

#include "semopt/comp_load.hpp"
#include "semopt/random_instances.hpp"

namespace semopt {
namespace {

TEST(ValidateSpec, DefaultSpecIsValid)
{
    const CompLoadSpec spec = default_comp_load();
    EXPECT_NO_THROW(validate_spec(spec));
    // Continuity of the reference pieces.
    EXPECT_NEAR(-1.0 * 0.7 + 1.2, 0.5, 1e-15);
    EXPECT_NEAR(-3.0 * 0.7 + 2.6, 0.5, 1e-15);
    EXPECT_NEAR(-3.0 * 0.45 + 2.6, 1.25, 1e-15);
    EXPECT_NEAR(-8.0 * 0.45 + 4.85, 1.25, 1e-15);
}

TEST(ValidateSpec, RejectsSlopeMagnitudeOrdering)
{
    CompLoadSpec spec{{-1.0, -0.5}, {1.2, 0.85}, {0.7, 0.3}};
    try {
        validate_spec(spec);
        FAIL();
    } catch (const ValidationError& e) {
        EXPECT_TRUE(e.names("slopes"));
    }
}

TEST(ValidateSpec, RejectsBoundaryTie)
{
    CompLoadSpec spec{{-1.0, -2.0}, {1.2, 1.7}, {0.5, 0.5}};
    try {
        validate_spec(spec);
        FAIL();
    } catch (const ValidationError& e) {
        EXPECT_TRUE(e.names("boundaries"));
    }
}

TEST(ValidateSpec, RejectsDiscontinuityAndPositiveSlope)
{
    CompLoadSpec jump{{-1.0, -3.0}, {1.2, 2.7}, {0.7, 0.45}};
    EXPECT_THROW(validate_spec(jump), ValidationError);
    CompLoadSpec rising{{1.0}, {0.5}, {0.5}};
    EXPECT_THROW(validate_spec(rising), ValidationError);
    CompLoadSpec negative{{-1.0}, {0.5}, {0.2}};
    EXPECT_THROW(validate_spec(negative), ValidationError);
}

TEST(LoadOf, ReferenceValues)
{
    const CompLoadSpec spec = default_comp_load();
    EXPECT_NEAR(load_of(spec, 1.0), 0.2, 1e-15);
    EXPECT_NEAR(load_of(spec, 0.7), 0.5, 1e-15);
    EXPECT_NEAR(spec.segment_load(2, 0.7), 0.5, 1e-15);
    EXPECT_NEAR(load_of(spec, 0.25), 2.85, 1e-15);
    EXPECT_THROW(load_of(spec, 0.2), std::domain_error);
    EXPECT_THROW(load_of(spec, 1.01), std::domain_error);
}

TEST(PowerOf, ScalesLoad)
{
    const CompLoadSpec spec = default_comp_load();
    EXPECT_NEAR(power_of(spec, 1.0, 1.0), 0.2, 1e-15);
    EXPECT_NEAR(power_of(spec, 0.45, 2.0), 2.5, 1e-14);
    EXPECT_EQ(power_of(spec, 0.3, 0.0), 0.0);
}

TEST(Midpoints, ReferenceAndSingleSegment)
{
    const auto mid = midpoints(default_comp_load());
    ASSERT_EQ(mid.size(), 3u);
    EXPECT_NEAR(mid[0], 0.85, 1e-15);
    EXPECT_NEAR(mid[1], 0.575, 1e-15);
    EXPECT_NEAR(mid[2], 0.35, 1e-15);
    const auto one = midpoints(CompLoadSpec{{-1.0}, {1.5}, {0.5}});
    ASSERT_EQ(one.size(), 1u);
    EXPECT_NEAR(one[0], 0.75, 1e-15);
}

TEST(SegmentOf, UpperClosedConvention)
{
    const CompLoadSpec spec = default_comp_load();
    EXPECT_EQ(segment_of(spec, 0.9), 1);
    EXPECT_EQ(segment_of(spec, 1.0), 1);
    EXPECT_EQ(segment_of(spec, 0.7), 2);
    EXPECT_EQ(segment_of(spec, 0.45), 3);
    EXPECT_EQ(segment_of(spec, 0.46), 2);
    EXPECT_EQ(segment_of(spec, 0.25), 3);
}

// Properties over random valid specs.
TEST(CompLoadProperties, RandomSpecs)
{
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 2000; ++trial) {
        const CompLoadSpec spec = random_comp_load(rng);
        ASSERT_NO_THROW(validate_spec(spec));
        const auto mid = midpoints(spec);
        for (int d = 1; d <= spec.segments(); ++d) {
            EXPECT_EQ(segment_of(spec, mid[static_cast<std::size_t>(d - 1)]), d);
            EXPECT_GT(mid[static_cast<std::size_t>(d - 1)], spec.floor(d));
            EXPECT_LT(mid[static_cast<std::size_t>(d - 1)], spec.ceiling(d));
        }
        for (int d = 1; d < spec.segments(); ++d) {
            const double c = spec.floor(d);
            const double l = spec.segment_load(d, c), r = spec.segment_load(d + 1, c);
            EXPECT_LE(std::abs(l - r), 1e-12 * std::max(1.0, std::abs(l)));
        }
        const double lo = spec.domain_floor();
        for (int k = 0; k < 20; ++k) {
            double a = lo + (1.0 - lo) * u(rng), b = lo + (1.0 - lo) * u(rng);
            if (a > b)
                std::swap(a, b);
            if (b - a > 1e-9) {
                EXPECT_GT(load_of(spec, a), load_of(spec, b));
            }
            const double m = 0.5 * (a + b);
            EXPECT_LE(load_of(spec, m), 0.5 * (load_of(spec, a) + load_of(spec, b)) + 1e-12);
        }
        EXPECT_GE(load_of(spec, 1.0), 0.0);
    }
}

} // namespace
} // namespace semopt
