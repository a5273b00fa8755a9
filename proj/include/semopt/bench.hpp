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

#ifndef SEMOPT_BENCH_HPP
#define SEMOPT_BENCH_HPP

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "semopt/config.hpp"
#include "semopt/orchestrator.hpp"

namespace semopt {

/// One pipeline run. `status` is ok | infeasible | numerical_failure | invalid.
struct ResultRow {
    Scheme scheme = Scheme::psc_rsma;
    std::string parameter = "none";
    double value = 0.0;
    std::uint64_t seed = 0;
    std::string status = "ok";
    double sum_semantic_rate_bps = 0.0;
    std::vector<double> semantic_rates_bps;
    double transmit_power_w = 0.0;
    double computation_power_w = 0.0;
    int outer_iterations = 0;
    double wall_time_ms = 0.0; // timing.csv only; results.csv stays deterministic
    std::string detail;        // error text for non-ok rows; not written to CSV
};

/// Fixed results.csv header. Per-user rates are ';'-joined in one column so
/// the column set does not depend on K.
inline const char* results_header()
{
    return "scheme,parameter,value,seed,status,sum_semantic_rate_bps,semantic_rates_bps,transmit_power_w,"
           "computation_power_w,outer_iterations";
}

inline std::string format_real(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline ResultRow run_pipeline(const Config& c, Scheme scheme, const std::string& parameter, double value,
                              std::uint64_t seed)
{
    using Clock = std::chrono::steady_clock;
    ResultRow row;
    row.scheme = scheme;
    row.parameter = parameter;
    row.value = value;
    row.seed = seed;
    const auto t0 = Clock::now();
    try {
        ScenarioTemplate t = c.scenario;
        if (parameter != "none")
            apply_parameter(t, parameter, value);
        const Scenario s = make_scenario(t, c.comp_load, seed);
        const PipelineResult r = run_scheme(scheme, s, c.comp_load, c.options);
        row.semantic_rates_bps = r.report.semantic_rates;
        row.sum_semantic_rate_bps = r.report.sum_semantic_rate();
        row.transmit_power_w = r.report.transmit_power_w;
        row.computation_power_w = r.report.computation_power_w;
        row.outer_iterations = static_cast<int>(r.trace.size());
    } catch (const InfeasibleError& e) {
        row.status = "infeasible";
        row.detail = e.what();
    } catch (const NumericalError& e) {
        row.status = "numerical_failure";
        row.detail = e.what();
    } catch (const ValidationError& e) {
        row.status = "invalid";
        row.detail = e.what();
    }
    row.wall_time_ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
    return row;
}

/// Runs fn(0..n-1) on `jobs` threads; results land at their own index, so the
/// output order never depends on scheduling.
template <typename T>
std::vector<T> parallel_map(std::size_t n, const std::function<T(std::size_t)>& fn, int jobs)
{
    std::vector<T> out(n);
    std::atomic<std::size_t> next{0};
    const auto worker = [&] {
        for (std::size_t i = next++; i < n; i = next++)
            out[i] = fn(i);
    };
    const int threads = std::max(1, std::min<int>(jobs, static_cast<int>(n)));
    std::vector<std::thread> pool;
    for (int t = 1; t < threads; ++t)
        pool.emplace_back(worker);
    worker();
    for (auto& th : pool)
        th.join();
    return out;
}

inline void sort_rows(std::vector<ResultRow>& rows)
{
    std::stable_sort(rows.begin(), rows.end(), [](const ResultRow& a, const ResultRow& b) {
        return std::tie(a.scheme, a.value, a.seed) < std::tie(b.scheme, b.value, b.seed);
    });
}

/// Every (scheme, value, seed) of the experiment; without a sweep the single
/// value is 0 under parameter "none".
inline std::vector<ResultRow> run_experiment(const Config& c, int jobs = 1,
                                             const std::function<void(const ResultRow&)>& on_row = {})
{
    const auto& x = c.experiment;
    const std::string parameter = x.sweep_parameter.empty() ? "none" : x.sweep_parameter;
    const std::vector<double> values = x.sweep_parameter.empty() ? std::vector<double>{0.0} : x.sweep_values;
    std::vector<std::tuple<Scheme, double, std::uint64_t>> work;
    for (Scheme s : x.schemes)
        for (double v : values)
            for (auto seed : x.seeds)
                work.emplace_back(s, v, seed);
    std::mutex report;
    std::vector<ResultRow> rows = parallel_map<ResultRow>(
        work.size(),
        [&](std::size_t i) {
            const auto& [s, v, seed] = work[i];
            ResultRow r = run_pipeline(c, s, parameter, v, seed);
            if (on_row) {
                std::lock_guard<std::mutex> lock(report);
                on_row(r);
            }
            return r;
        },
        jobs);
    sort_rows(rows);
    return rows;
}

inline void write_results_csv(std::ostream& os, const std::vector<ResultRow>& rows)
{
    os << results_header() << '\n';
    for (const auto& r : rows) {
        std::string rates;
        for (std::size_t k = 0; k < r.semantic_rates_bps.size(); ++k)
            rates += (k ? ";" : "") + format_real(r.semantic_rates_bps[k]);
        os << to_string(r.scheme) << ',' << r.parameter << ',' << format_real(r.value) << ',' << r.seed << ','
           << r.status << ',' << format_real(r.sum_semantic_rate_bps) << ',' << rates << ','
           << format_real(r.transmit_power_w) << ',' << format_real(r.computation_power_w) << ','
           << r.outer_iterations << '\n';
    }
}

/// Inverse of write_results_csv for one data line.
inline ResultRow parse_result_row(const std::string& line)
{
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ','))
        f.push_back(cell);
    if (!line.empty() && line.back() == ',')
        f.emplace_back();
    if (f.size() != 10)
        throw std::invalid_argument("results row has " + std::to_string(f.size()) + " fields, expected 10");
    ResultRow r;
    r.scheme = scheme_from_string(f[0]);
    r.parameter = f[1];
    r.value = std::stod(f[2]);
    r.seed = std::stoull(f[3]);
    r.status = f[4];
    r.sum_semantic_rate_bps = std::stod(f[5]);
    std::stringstream rs(f[6]);
    while (std::getline(rs, cell, ';'))
        r.semantic_rates_bps.push_back(std::stod(cell));
    r.transmit_power_w = std::stod(f[7]);
    r.computation_power_w = std::stod(f[8]);
    r.outer_iterations = std::stoi(f[9]);
    return r;
}

inline void write_timing_csv(std::ostream& os, const std::vector<ResultRow>& rows)
{
    os << "scheme,parameter,value,seed,outer_iterations,wall_time_ms\n";
    char buf[64];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%.3f", r.wall_time_ms);
        os << to_string(r.scheme) << ',' << r.parameter << ',' << format_real(r.value) << ',' << r.seed << ','
           << r.outer_iterations << ',' << buf << '\n';
    }
}

struct MeanRow {
    Scheme scheme = Scheme::psc_rsma;
    std::string parameter;
    double value = 0.0;
    int runs = 0;
    int ok_runs = 0;
    double mean_sum_semantic_rate_bps = 0.0; // over ok runs; 0 when none
};

/// Seed averages per (scheme, value), in row order.
inline std::vector<MeanRow> compute_means(const std::vector<ResultRow>& rows)
{
    std::vector<MeanRow> out;
    std::map<std::pair<Scheme, double>, std::size_t> index;
    for (const auto& r : rows) {
        const auto key = std::make_pair(r.scheme, r.value);
        auto it = index.find(key);
        if (it == index.end()) {
            it = index.emplace(key, out.size()).first;
            MeanRow m;
            m.scheme = r.scheme;
            m.parameter = r.parameter;
            m.value = r.value;
            out.push_back(m);
        }
        MeanRow& m = out[it->second];
        ++m.runs;
        if (r.status == "ok") {
            ++m.ok_runs;
            m.mean_sum_semantic_rate_bps += r.sum_semantic_rate_bps;
        }
    }
    for (auto& m : out)
        if (m.ok_runs > 0)
            m.mean_sum_semantic_rate_bps /= m.ok_runs;
    return out;
}

inline void write_means_csv(std::ostream& os, const std::vector<MeanRow>& means)
{
    os << "scheme,parameter,value,runs,ok_runs,mean_sum_semantic_rate_bps\n";
    for (const auto& m : means)
        os << to_string(m.scheme) << ',' << m.parameter << ',' << format_real(m.value) << ',' << m.runs << ','
           << m.ok_runs << ',' << format_real(m.mean_sum_semantic_rate_bps) << '\n';
}

/// gnuplot script plotting means.csv: one line per scheme, in Mbit/s.
inline void write_plot_script(std::ostream& os, const std::vector<MeanRow>& means)
{
    std::vector<Scheme> schemes;
    for (const auto& m : means)
        if (std::find(schemes.begin(), schemes.end(), m.scheme) == schemes.end())
            schemes.push_back(m.scheme);
    const std::string parameter = means.empty() ? "none" : means.front().parameter;
    os << "# gnuplot script generated by semopt; run: gnuplot plot.gp\n"
       << "set datafile separator ','\n"
       << "set terminal pngcairo size 800,600\n"
       << "set output 'sum_semantic_rate.png'\n"
       << "set xlabel '" << parameter << "'\n"
       << "set ylabel 'mean sum semantic rate (Mbit/s)'\n"
       << "set key best\nset grid\n";
    if (parameter == "bandwidth_hz")
        os << "set logscale x\n";
    os << "plot ";
    for (std::size_t i = 0; i < schemes.size(); ++i) {
        const std::string name = to_string(schemes[i]);
        os << (i ? ", \\\n     " : "") << "'means.csv' using (strcol(1) eq '" << name
           << "' ? $3 : NaN):($6/1e6) with linespoints title '" << name << "'";
    }
    os << '\n';
}

/// 0 if any run succeeded; otherwise 3 when a numerical failure occurred, else 2.
inline int exit_code(const std::vector<ResultRow>& rows)
{
    bool numerical = false;
    for (const auto& r : rows) {
        if (r.status == "ok")
            return 0;
        numerical = numerical || r.status == "numerical_failure";
    }
    return numerical ? 3 : 2;
}

} // namespace semopt

#endif // SEMOPT_BENCH_HPP
