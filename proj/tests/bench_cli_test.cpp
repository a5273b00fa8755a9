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

#include <sstream>

#include <gtest/gtest.h>

#include "semopt/bench.hpp"
#include "semopt/config.hpp"
#include "semopt/validation.hpp"

namespace semopt {
namespace {

const char* kReference = R"({
  "scenario": {"num_users": 4, "num_antennas": 8, "bandwidth_hz": 1e7, "noise_power_dbm": -60,
               "max_power_dbm": 30, "comp_power_coeff": 1.0},
  "comp_load": {"slopes": [-0.1, -0.3, -0.8], "intercepts": [0.12, 0.26, 0.485], "boundaries": [0.7, 0.45, 0.25]},
  "experiment": {"seeds": [7]}
})";

TEST(Config, DefaultsAreReferenceScenario)
{
    const Config c = parse_config("");
    const Scenario s = make_scenario(c.scenario, c.comp_load, 7);
    EXPECT_EQ(s.num_users, 4);
    EXPECT_EQ(s.num_antennas, 8);
    EXPECT_EQ(s.bandwidth_hz, 10e6);
    EXPECT_EQ(s.max_power_w, 1.0);
    EXPECT_DOUBLE_EQ(s.noise_power_w, 1e-9);
    EXPECT_EQ(s.comp_power_coeff, 1.0);
    EXPECT_EQ(s.min_semantic_rate_bps, std::vector<double>(4, 0.0));
    EXPECT_EQ(s.min_ratio, std::vector<double>(4, 0.25));
    EXPECT_EQ(s.channels, generate_channels(4, 8, 7));
    EXPECT_EQ(c.experiment.schemes.size(), 3u);
}

TEST(Config, ShippedFileLoads)
{
    const Config c = load_config(SEMOPT_SOURCE_DIR "/configs/reference.json");
    EXPECT_EQ(c.comp_load.slopes, (std::vector<double>{-0.1, -0.3, -0.8}));
    EXPECT_EQ(c.experiment.seeds, std::vector<std::uint64_t>{7});
    for (const char* name : {"sweep_comp_power", "sweep_max_power", "sweep_bandwidth", "sweep_noise"}) {
        const Config s = load_config(std::string(SEMOPT_SOURCE_DIR "/configs/") + name + ".json");
        EXPECT_EQ(s.experiment.seeds.size(), 10u) << name;
        EXPECT_GE(s.experiment.sweep_values.size(), 4u) << name;
    }
}

TEST(Config, OmittedMinimumRateIsZero)
{
    const Config c = parse_config(kReference);
    EXPECT_TRUE(c.scenario.min_semantic_rate_bps.empty());
    EXPECT_EQ(make_scenario(c.scenario, c.comp_load, 1).min_semantic_rate_bps, std::vector<double>(4, 0.0));
}

TEST(Config, UnknownKeyIsNamed)
{
    try {
        parse_config(R"({"scenario": {"bandwdith_hz": 1e7}})");
        FAIL() << "expected ConfigError";
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("scenario.bandwdith_hz"), std::string::npos) << e.what();
    }
}

TEST(Config, ParseErrorIsConfigError)
{
    EXPECT_THROW(parse_config("{\"scenario\": "), ConfigError);
    EXPECT_THROW(parse_config(R"({"scenario": {"num_users": "four"}})"), ConfigError);
}

TEST(Config, InvalidScenarioNamesField)
{
    try {
        parse_config(R"({"scenario": {"min_ratio": 0}})");
        FAIL() << "expected ValidationError";
    } catch (const ValidationError& e) {
        EXPECT_TRUE(e.names("min_ratio")) << e.what();
    }
}

TEST(Config, PerUserArraysAndBroadcast)
{
    const Config c = parse_config(R"({"scenario": {"num_users": 2, "min_ratio": [0.3, 0.5],
                                                   "min_semantic_rate_bps": 1e3}})");
    EXPECT_EQ(c.scenario.min_ratio, (std::vector<double>{0.3, 0.5}));
    EXPECT_EQ(c.scenario.min_semantic_rate_bps, (std::vector<double>{1e3, 1e3}));
}

TEST(Config, OverridesEditTheTree)
{
    const Config c = parse_config(kReference, {"scenario.max_power_dbm=20", "experiment.schemes=[\"psc_sdma\"]",
                                            "experiment.initial_ratios=unit"});
    EXPECT_EQ(c.scenario.max_power_dbm, 20.0);
    EXPECT_EQ(c.experiment.schemes, std::vector<Scheme>{Scheme::psc_sdma});
    EXPECT_EQ(c.options.initial_ratios, InitialRatios::unit);
    EXPECT_THROW(parse_config(kReference, {"scenario.typo=1"}), ConfigError);
    EXPECT_THROW(parse_config(kReference, {"novalue"}), ConfigError);
}

TEST(Config, SweepValidation)
{
    EXPECT_THROW(parse_config(R"({"experiment": {"sweep": {"parameter": "bandwidth_hz", "values": [2e6, 1e6]}}})"),
                 ValidationError);
    EXPECT_THROW(parse_config(R"({"experiment": {"sweep": {"parameter": "antennas", "values": [1]}}})"),
                 ValidationError);
    EXPECT_THROW(parse_config(R"({"experiment": {"schemes": []}})"), ValidationError);
    EXPECT_THROW(parse_config(R"({"experiment": {"schemes": ["noma"]}})"), ConfigError);
}

TEST(Config, SeedRanges)
{
    EXPECT_EQ(parse_seed_range("3..5"), (std::vector<std::uint64_t>{3, 4, 5}));
    EXPECT_EQ(parse_seed_range("9"), std::vector<std::uint64_t>{9});
    EXPECT_THROW(parse_seed_range("5..3"), ConfigError);
    EXPECT_THROW(parse_seed_range("x"), ConfigError);
}

TEST(Config, SweepParameterSubstitution)
{
    ScenarioTemplate t;
    apply_parameter(t, "max_power_dbm", 20.0);
    apply_parameter(t, "noise_power_dbm", -70.0);
    const Scenario s = make_scenario(t, default_comp_load(), 1);
    EXPECT_DOUBLE_EQ(s.max_power_w, 0.1);
    EXPECT_DOUBLE_EQ(s.noise_power_w, 1e-10);
    EXPECT_THROW(apply_parameter(t, "num_users", 3), ConfigError);
}

TEST(Bench, RowsCoverEveryCombinationInOrder)
{
    Config c = parse_config(kReference, {"experiment.seeds=[2,1]", "experiment.schemes=[\"non_semantic\"]",
                                      R"(experiment.sweep={"parameter":"comp_power_coeff","values":[0.5,1,2,4]})"});
    const auto rows = run_experiment(c, 2);
    ASSERT_EQ(rows.size(), 8u);
    EXPECT_EQ(rows[0].value, 0.5);
    EXPECT_EQ(rows[0].seed, 1u);
    EXPECT_EQ(rows[1].seed, 2u);
    EXPECT_EQ(rows[7].value, 4.0);
    for (const auto& r : rows) {
        EXPECT_EQ(r.status, "ok");
        double sum = 0.0;
        for (double v : r.semantic_rates_bps)
            sum += v;
        EXPECT_NEAR(r.sum_semantic_rate_bps, sum, 1e-9 * sum);
    }
    // Non-semantic ignores the computation coefficient.
    const auto means = compute_means(rows);
    ASSERT_EQ(means.size(), 4u);
    for (const auto& m : means)
        EXPECT_EQ(m.mean_sum_semantic_rate_bps, means[0].mean_sum_semantic_rate_bps);
}

TEST(Bench, StarvedPscRowsAreInfeasible)
{
    const Config c = parse_config(kReference, {"scenario.max_power_dbm=15"}); // 31.6 mW < 4 f(1) = 80 mW
    const auto rows = run_experiment(c);
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_EQ(rows[0].status, "infeasible");
    EXPECT_EQ(rows[1].status, "infeasible");
    EXPECT_EQ(rows[2].status, "ok");
    EXPECT_EQ(exit_code(rows), 0);
    EXPECT_EQ(exit_code({rows[0], rows[1]}), 2);
}

TEST(Bench, ParallelMapKeepsOrder)
{
    const auto out = parallel_map<int>(
        100, [](std::size_t i) { return static_cast<int>(i * i); }, 4);
    for (std::size_t i = 0; i < out.size(); ++i)
        EXPECT_EQ(out[i], static_cast<int>(i * i));
}

TEST(Bench, ResultRowCsvRoundTrip)
{
    for (const auto& c : check_bench())
        EXPECT_TRUE(c.passed()) << c.name;
}

TEST(Bench, PlotScriptReferencesMeans)
{
    std::vector<MeanRow> means(2);
    means[0].parameter = means[1].parameter = "bandwidth_hz";
    means[1].scheme = Scheme::non_semantic;
    std::ostringstream os;
    write_plot_script(os, means);
    const std::string s = os.str();
    EXPECT_NE(s.find("'means.csv'"), std::string::npos);
    EXPECT_NE(s.find("psc_rsma"), std::string::npos);
    EXPECT_NE(s.find("non_semantic"), std::string::npos);
    EXPECT_NE(s.find("set logscale x"), std::string::npos);
}

TEST(Validation, QuickPropertiesOutsideKnownGap)
{
    // Greedy after midpoint segment selection can miss the joint optimum; every
    // other property must hold.
    std::vector<PropertyCheck> checks;
    for (auto v : {check_comp_load(500), check_rsma_rates(100), check_ratio_opt(30)})
        checks.insert(checks.end(), v.begin(), v.end());
    for (const auto& c : checks)
        EXPECT_TRUE(c.passed()) << c.module << "/" << c.name << " worst " << c.worst_margin;
    const OracleComparison oc = compare_with_oracle(10, 1e-2);
    EXPECT_TRUE(oc.against_fixed_assignment.passed());
}

TEST(Validation, MutationIsDetected)
{
    EXPECT_TRUE(check_mutation_detected(parse_config(kReference)).passed());
}

TEST(Validation, ReportIsJson)
{
    ValidationReport rep;
    PropertyCheck c("m", "p");
    c.record(true, 0.5);
    rep.add(c);
    std::ostringstream os;
    rep.write_json(os);
    const auto j = nlohmann::json::parse(os.str());
    EXPECT_TRUE(j["passed"].get<bool>());
    EXPECT_EQ(j["properties"][0]["instances"].get<int>(), 1);
}

} // namespace
} // namespace semopt
