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

// semopt command-line harness: run | sweep | validate.
// Exit codes: 0 ok, 1 usage/config (or failed validation), 2 every run
// infeasible, 3 numerical failure with no successful run.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "semopt/semopt.hpp"

namespace {

using namespace semopt;

struct CommonFlags {
    std::string config;
    std::vector<std::string> overrides;
    std::string seeds;
    std::string out = "out";
    int jobs = 1;
    bool verbose = false;
};

int default_jobs()
{
    if (const char* env = std::getenv("SEMOPT_JOBS")) {
        try {
            return std::max(1, std::stoi(env));
        } catch (const std::exception&) {
        }
    }
    return 1;
}

Config load(const CommonFlags& f)
{
    Config c;
    if (f.config.empty())
        c = parse_config("", f.overrides);
    else
        c = load_config(f.config, f.overrides);
    if (!f.seeds.empty())
        c.experiment.seeds = parse_seed_range(f.seeds);
    return c;
}

void write_file(const std::filesystem::path& path, const std::function<void(std::ostream&)>& body)
{
    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw ConfigError("cannot write '" + path.string() + "'");
    body(os);
}

std::vector<ResultRow> execute(const Config& c, const CommonFlags& f)
{
    std::filesystem::create_directories(f.out);
    const auto rows = run_experiment(c, f.jobs, [&](const ResultRow& r) {
        if (!f.verbose)
            return;
        std::fprintf(stderr, "%-12s %s=%-10g seed=%-6llu %-17s %.6g bit/s  %.1f ms%s%s\n", to_string(r.scheme),
                     r.parameter.c_str(), r.value, static_cast<unsigned long long>(r.seed), r.status.c_str(),
                     r.sum_semantic_rate_bps, r.wall_time_ms, r.detail.empty() ? "" : "  ", r.detail.c_str());
    });
    const std::filesystem::path out(f.out);
    write_file(out / "results.csv", [&](std::ostream& os) { write_results_csv(os, rows); });
    write_file(out / "timing.csv", [&](std::ostream& os) { write_timing_csv(os, rows); });
    return rows;
}

int finish(const std::vector<ResultRow>& rows)
{
    const int code = exit_code(rows);
    if (code == 2)
        std::fprintf(stderr, "every run was infeasible\n");
    else if (code == 3)
        std::fprintf(stderr, "no run succeeded; numerical failures occurred\n");
    return code;
}

int cmd_run(CommonFlags f, const std::string& seed)
{
    if (!seed.empty())
        f.seeds = seed;
    Config c = load(f);
    c.experiment.sweep_parameter.clear();
    c.experiment.sweep_values.clear();
    const auto rows = execute(c, f);
    std::printf("%-12s %10s %-17s %22s %12s %14s %6s\n", "scheme", "seed", "status", "sum_semantic_rate_bps",
                "transmit_w", "computation_w", "outer");
    for (const auto& r : rows)
        std::printf("%-12s %10llu %-17s %22.10g %12.6g %14.6g %6d\n", to_string(r.scheme),
                    static_cast<unsigned long long>(r.seed), r.status.c_str(), r.sum_semantic_rate_bps,
                    r.transmit_power_w, r.computation_power_w, r.outer_iterations);
    for (const auto& r : rows)
        if (!r.detail.empty())
            std::fprintf(stderr, "%s seed %llu: %s\n", to_string(r.scheme), static_cast<unsigned long long>(r.seed),
                         r.detail.c_str());
    return finish(rows);
}

int cmd_sweep(const CommonFlags& f)
{
    const Config c = load(f);
    if (c.experiment.sweep_parameter.empty())
        throw ConfigError("sweep: the config has no experiment.sweep section");
    const auto rows = execute(c, f);
    const auto means = compute_means(rows);
    const std::filesystem::path out(f.out);
    write_file(out / "means.csv", [&](std::ostream& os) { write_means_csv(os, means); });
    write_file(out / "plot.gp", [&](std::ostream& os) { write_plot_script(os, means); });
    std::printf("%-12s %14s %5s %24s\n", "scheme", c.experiment.sweep_parameter.c_str(), "ok",
                "mean_sum_semantic_rate");
    for (const auto& m : means)
        std::printf("%-12s %14g %2d/%-2d %24.10g\n", to_string(m.scheme), m.value, m.ok_runs, m.runs,
                    m.mean_sum_semantic_rate_bps);
    std::printf("wrote %s/{results,timing,means}.csv and plot.gp\n", f.out.c_str());
    return finish(rows);
}

int cmd_validate(const CommonFlags& f, const std::string& level)
{
    const Config c = load(f);
    const ValidationReport rep = run_validation(level == "full" ? ValidationLevel::full : ValidationLevel::quick, c);
    std::filesystem::create_directories(f.out);
    write_file(std::filesystem::path(f.out) / "validation.json", [&](std::ostream& os) { rep.write_json(os); });
    for (const auto& p : rep.checks)
        std::printf("%-4s %-16s %-34s n=%-6lld failures=%-4lld worst_margin=%.3g%s%s\n", p.passed() ? "PASS" : "FAIL",
                    p.module.c_str(), p.name.c_str(), p.instances, p.failures, p.worst_margin,
                    p.note.empty() ? "" : "  # ", p.note.c_str());
    std::printf("%s in %.1f s; report: %s/validation.json\n", rep.passed() ? "all properties hold" : "FAILED",
                rep.seconds, f.out.c_str());
    return rep.passed() ? 0 : 1;
}

void add_common(CLI::App* cmd, CommonFlags& f)
{
    cmd->add_option("--config", f.config, "JSON configuration (default: built-in reference scenario)");
    cmd->add_option("--set", f.overrides, "override a config value, e.g. scenario.max_power_dbm=20")
        ->allow_extra_args(false);
    cmd->add_option("--seeds", f.seeds, "seed range N..M (or a single N)");
    cmd->add_option("--out", f.out, "output directory")->capture_default_str();
    cmd->add_option("--jobs", f.jobs, "worker threads (default: $SEMOPT_JOBS or 1)")->check(CLI::PositiveNumber);
    cmd->add_flag("--verbose", f.verbose, "print every run to stderr");
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Joint transmit beamforming and semantic compression optimization"};
    app.require_subcommand(1);
    CommonFlags run_flags, sweep_flags, validate_flags;
    run_flags.jobs = sweep_flags.jobs = validate_flags.jobs = default_jobs();
    std::string seed, level = "quick";

    auto* run = app.add_subcommand("run", "run every configured scheme on one scenario");
    add_common(run, run_flags);
    run->add_option("--seed", seed, "channel seed (overrides experiment.seeds)");
    auto* sweep = app.add_subcommand("sweep", "sweep one parameter over seeds and schemes");
    add_common(sweep, sweep_flags);
    auto* validate = app.add_subcommand("validate", "run the property validation suite");
    add_common(validate, validate_flags);
    validate->add_option("--level", level, "quick or full")->check(CLI::IsMember({"quick", "full"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }
    try {
        if (*run)
            return cmd_run(run_flags, seed);
        if (*sweep)
            return cmd_sweep(sweep_flags);
        return cmd_validate(validate_flags, level);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 1;
    } catch (const ValidationError& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
