// SPDX-License-Identifier: Apache-2.0
//
// cfmimo - link-level simulator for uplink cell-free massive MIMO detection
// Copyright (C) 2026 The cfmimo authors
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
// ------------------------------------------------------------------------

// cfmimo_sim: pilot-to-user-ratio / SNR sweeps of the cell-free detectors.

#include "cfmimo/harness.hpp"
#include "cfmimo/report.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <sstream>
#include <thread>

namespace {

std::vector<std::string> split_list(const std::string& text)
{
    std::vector<std::string> items;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ','))
        if (!item.empty()) items.push_back(item);
    return items;
}

// "0.5" or "1/3"
double parse_ratio(const std::string& text)
{
    if (const auto slash = text.find('/'); slash != std::string::npos) {
        const double num = cfmimo::parse_double("ratios", text.substr(0, slash));
        const double den = cfmimo::parse_double("ratios", text.substr(slash + 1));
        if (den == 0.0) throw cfmimo::ConfigError("ratio '" + text + "' divides by zero");
        return num / den;
    }
    return cfmimo::parse_double("ratios", text);
}

std::vector<double> parse_ratios(const std::string& text)
{
    std::vector<double> out;
    for (const auto& item : split_list(text)) out.push_back(parse_ratio(item));
    return out;
}

std::vector<double> parse_doubles(const std::string& key, const std::string& text)
{
    std::vector<double> out;
    for (const auto& item : split_list(text)) out.push_back(cfmimo::parse_double(key, item));
    return out;
}

std::vector<cfmimo::Detector> parse_detectors(const std::string& text)
{
    std::vector<cfmimo::Detector> out;
    for (const auto& item : split_list(text)) out.push_back(cfmimo::parse_detector(item));
    return out;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Monte Carlo BER / sum-SE sweeps for uplink cell-free massive MIMO detectors"};

    std::string config_path;
    std::string ratios;
    std::string snrs;
    std::string detectors;
    std::vector<std::string> overrides;
    std::optional<int> trials;
    std::optional<int> drops;
    std::optional<std::uint64_t> seed;
    std::optional<int> workers;
    std::string out_dir = ".";
    bool plot = false;
    bool dump = false;
    bool no_timing = false;
    bool resample = false;
    bool quiet = false;

    app.add_option("--config", config_path, "key = value configuration file")->check(CLI::ExistingFile);
    app.add_option("--ratios", ratios, "comma-separated pilot-to-user ratios (0.5 or 1/3)");
    app.add_option("--snr-db", snrs, "comma-separated SNR values in dB");
    app.add_option("--trials", trials, "trials per grid cell");
    app.add_option("--drops", drops, "network drops shared by the trials of a cell");
    app.add_option("--detectors", detectors, "comma-separated subset of mrc,mmse,sic,ep,ml");
    app.add_option("--seed", seed, "campaign seed (CFMIMO_SEED overrides)");
    app.add_option("--set", overrides, "extra key=value configuration entries")->take_all();
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--workers", workers, "worker threads");
    app.add_flag("--plot", plot, "also write plot.svg");
    app.add_flag("--dump-scenario", dump, "write geometry, large-scale fading and one channel realization as CSV");
    app.add_flag("--no-timing", no_timing, "write elapsed_s as 0 for byte-reproducible output");
    app.add_flag("--resample-drops", resample, "draw a fresh network drop for every trial");
    app.add_flag("--quiet", quiet, "no progress output");

    CLI11_PARSE(app, argc, argv);

    try {
        cfmimo::KeyValues values;
        if (!config_path.empty()) values = cfmimo::read_key_value_file(config_path);
        for (const auto& entry : overrides) {
            auto extra = cfmimo::parse_key_values(entry, "--set");
            for (auto& [k, v] : extra) values[k] = v;
        }

        cfmimo::SweepSpec spec;
        spec.config = cfmimo::apply_system_keys(spec.config, values);
        spec.workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));

        // sweep keys may also live in the config file; flags win
        auto take = [&](const char* key) -> std::optional<std::string> {
            auto it = values.find(key);
            if (it == values.end()) return std::nullopt;
            auto v = it->second;
            values.erase(it);
            return v;
        };
        if (auto v = take("ratios")) spec.ratios = parse_ratios(*v);
        if (auto v = take("snrs_db")) spec.snrs_db = parse_doubles("snrs_db", *v);
        if (auto v = take("detectors")) spec.detectors = parse_detectors(*v);
        if (auto v = take("trials")) spec.trials = static_cast<int>(cfmimo::parse_integer("trials", *v));
        if (auto v = take("drops")) spec.drops = static_cast<int>(cfmimo::parse_integer("drops", *v));
        if (auto v = take("workers")) spec.workers = static_cast<int>(cfmimo::parse_integer("workers", *v));
        if (auto v = take("resample_drop_per_trial")) spec.resample_drop_per_trial = cfmimo::parse_bool("resample_drop_per_trial", *v);
        if (!values.empty()) throw cfmimo::ConfigError("unknown configuration key '" + values.begin()->first + "'");

        if (!ratios.empty()) spec.ratios = parse_ratios(ratios);
        if (!snrs.empty()) spec.snrs_db = parse_doubles("snr-db", snrs);
        if (!detectors.empty()) spec.detectors = parse_detectors(detectors);
        if (trials) spec.trials = *trials;
        if (drops) spec.drops = *drops;
        if (workers) spec.workers = *workers;
        if (seed) spec.config.seed = *seed;
        if (resample) spec.resample_drop_per_trial = true;
        if (const char* env = std::getenv("CFMIMO_SEED"))
            spec.config.seed = static_cast<std::uint64_t>(cfmimo::parse_integer("CFMIMO_SEED", env));

        const std::filesystem::path out = out_dir;
        spec.output_path = out / "results.csv";
        spec.validate();

        if (dump) {
            cfmimo::SystemConfig cfg = spec.config;
            cfg.tau = cfmimo::pilots_for_ratio(spec.ratios.front(), cfg.K);
            cfg.set_snr_db(spec.snrs_db.front());
            const auto scenario = cfmimo::make_scenario(cfg, 0);
            cfmimo::dump_scenario(scenario, out);
            cfmimo::dump_channel(cfmimo::draw_trial(scenario, cfg, 0, 0), out);
        }

        auto progress = [&](std::size_t done, std::size_t total) {
            if (!quiet) std::cerr << "cell " << done << "/" << total << " done\n";
        };
        const auto result = cfmimo::run_sweep(spec, progress);
        cfmimo::emit_csv(result, spec.output_path, !no_timing);
        if (plot) cfmimo::emit_plot(result, out / "plot.svg");
        if (!quiet) cfmimo::write_csv(result, std::cout, !no_timing);
    } catch (const cfmimo::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
