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

#include "cfmimo/harness.hpp"
#include "cfmimo/report.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace cfmimo;
using Catch::Approx;

namespace {

SystemConfig small_config()
{
    SystemConfig cfg;
    cfg.L = 16;
    cfg.K = 6;
    cfg.tau = 3;
    cfg.seed = 77;
    return cfg;
}

SweepSpec small_sweep()
{
    SweepSpec spec;
    spec.config = small_config();
    spec.ratios = {0.5, 1.0};
    spec.snrs_db = {10.0, 20.0};
    spec.trials = 12;
    spec.drops = 3;
    return spec;
}

std::string csv_text(const SweepResult& r)
{
    std::ostringstream out;
    write_csv(r, out, false);
    return out.str();
}

} // namespace

TEST_CASE("pilot counts from ratios")
{
    CHECK(pilots_for_ratio(1.0 / 3.0, 60) == 20);
    CHECK(pilots_for_ratio(0.5, 60) == 30);
    CHECK(pilots_for_ratio(5.0 / 6.0, 60) == 50);
    CHECK(pilots_for_ratio(1.0, 60) == 60);
    CHECK(pilots_for_ratio(0.001, 60) == 1);
    CHECK(pilots_for_ratio(3.0, 60) == 60);
}

TEST_CASE("sweep validation")
{
    auto spec = small_sweep();
    REQUIRE_NOTHROW(spec.validate());
    auto bad = spec;
    bad.detectors.clear();
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = spec;
    bad.trials = 0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = spec;
    bad.ratios = {-0.5};
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = spec;
    bad.config.tau_c = 3;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("trials are reproducible and paired")
{
    const auto cfg = small_config();
    const auto sc = make_scenario(cfg, 0);
    const auto a = draw_trial(sc, cfg, 0, 5);
    const auto b = draw_trial(sc, cfg, 0, 5);
    CHECK(a.y == b.y);
    CHECK(a.channel.Hhat == b.channel.Hhat);
    CHECK(a.bits == b.bits);
    CHECK(a.noise_var == Approx(cfg.sigma2 / cfg.p));
    CHECK(draw_trial(sc, cfg, 0, 6).y != a.y);

    const std::vector<Detector> all(std::begin(kAllDetectors), std::end(kAllDetectors));
    const auto o1 = run_trial(a, cfg, all);
    const auto o2 = run_trial(sc, cfg, all, 0, 5);
    for (auto d : all) {
        REQUIRE(o1[slot(d)].has_value());
        REQUIRE(o1[slot(d)]->metrics.has_value());
        CHECK(o1[slot(d)]->metrics->bits.errors == o2[slot(d)]->metrics->bits.errors);
        CHECK(o1[slot(d)]->metrics->bits.total == static_cast<std::int64_t>(a.bits.size()));
    }
    CHECK(std::isnan(o1[slot(Detector::ML)]->metrics->sum_se));
    CHECK(o1[slot(Detector::EP)]->metrics->sum_se >= 0.0);
}

TEST_CASE("noiseless two-user ML makes no errors")
{
    SystemConfig cfg;
    cfg.L = 8;
    cfg.K = 2;
    cfg.tau = 2;
    cfg.p = 1e14;
    const std::vector<Detector> ml{Detector::ML};
    for (int t = 0; t < 50; ++t) {
        const auto sc = make_scenario(cfg, static_cast<std::uint64_t>(t));
        const auto o = run_trial(sc, cfg, ml, static_cast<std::uint64_t>(t), 0);
        REQUIRE(o[slot(Detector::ML)]->metrics->bits.errors == 0);
    }
}

TEST_CASE("orthogonal pilots, high SNR and many APs give error-free detection")
{
    SystemConfig cfg;
    cfg.L = 64;
    cfg.K = 4;
    cfg.tau = 4;
    cfg.set_snr_db(60.0);
    const std::vector<Detector> dets{Detector::MRC, Detector::MMSE, Detector::SIC, Detector::EP, Detector::ML};
    std::array<std::int64_t, 5> errors{};
    for (int t = 0; t < 1000; ++t) {
        const auto drop = static_cast<std::uint64_t>(t % 20);
        const auto sc = make_scenario(cfg, drop);
        const auto o = run_trial(sc, cfg, dets, drop, static_cast<std::uint64_t>(t));
        for (auto d : dets) errors[slot(d)] += o[slot(d)]->metrics->bits.errors;
    }
    for (auto d : {Detector::MMSE, Detector::SIC, Detector::EP, Detector::ML}) {
        INFO(name(d));
        CHECK(errors[slot(d)] == 0);
    }
    // distributed APs give no channel hardening: MRC stays interference limited
    CHECK(errors[slot(Detector::MRC)] > 0);
}

TEST_CASE("confidence interval")
{
    CHECK(ber_ci95(10, 1000) == Approx(1.96 * std::sqrt(0.01 * 0.99 / 1000.0)));
    CHECK(ber_ci95(0, 1000) == 0.0);
    CHECK(ber_ci95(40, 4000) < ber_ci95(10, 1000));
}

TEST_CASE("sweep covers the grid")
{
    auto spec = small_sweep();
    spec.ratios = {1.0};
    spec.snrs_db = {15.0};
    spec.trials = 1;
    spec.drops = 1;
    const auto r = run_sweep(spec);
    REQUIRE(r.rows.size() == spec.detectors.size());

    const auto full = run_sweep(small_sweep());
    CHECK(full.rows.size() == 2 * 2 * 4);
    for (const auto& row : full.rows) {
        CHECK(row.ber >= 0.0);
        CHECK(row.ber <= 1.0);
        CHECK(row.ber_ci95 >= 0.0);
        CHECK(row.trials == 12);
        CHECK(row.bits_total == 12 * 6 * 2);
        CHECK(full.find(row.detector, row.ratio, row.snr_db) != nullptr);
    }
    CHECK(full.find(Detector::ML, 1.0, 10.0) == nullptr);
}

TEST_CASE("sweep output does not depend on the worker count")
{
    auto spec = small_sweep();
    spec.workers = 1;
    const auto one = csv_text(run_sweep(spec));
    spec.workers = 3;
    CHECK(csv_text(run_sweep(spec)) == one);
    spec.resample_drop_per_trial = true;
    const auto resampled = csv_text(run_sweep(spec));
    spec.workers = 1;
    CHECK(csv_text(run_sweep(spec)) == resampled);
}

TEST_CASE("unwritable output fails before computing")
{
    auto spec = small_sweep();
    spec.trials = 100000;
    const auto blocker = std::filesystem::temp_directory_path() / "cfmimo_not_a_dir";
    std::ofstream(blocker) << "x";
    spec.output_path = blocker / "results.csv";
    CHECK_THROWS_AS(run_sweep(spec), ConfigError);
    std::filesystem::remove(blocker);
}

TEST_CASE("CSV round trip")
{
    const auto result = run_sweep(small_sweep());
    std::ostringstream out;
    write_csv(result, out);
    const std::string text = out.str();
    CHECK(text.rfind(std::string(kCsvHeader) + "\n", 0) == 0);
    CHECK(text.find("# aborted_trials") != std::string::npos);
    std::istringstream in(text);
    const auto back = read_csv(in);
    REQUIRE(back.rows.size() == result.rows.size());
    for (std::size_t i = 0; i < back.rows.size(); ++i) {
        const auto& a = result.rows[i];
        const auto& b = back.rows[i];
        CHECK(a.detector == b.detector);
        CHECK(b.ratio == Approx(a.ratio).epsilon(1e-9));
        CHECK(b.snr_db == Approx(a.snr_db).epsilon(1e-9));
        CHECK(b.ber == Approx(a.ber).epsilon(1e-9));
        CHECK(b.ber_ci95 == Approx(a.ber_ci95).epsilon(1e-9));
        CHECK(b.sum_se == Approx(a.sum_se).epsilon(1e-9));
        CHECK(b.avg_iterations == Approx(a.avg_iterations).epsilon(1e-9));
        CHECK(b.trials == a.trials);
        CHECK(b.elapsed_s == Approx(a.elapsed_s).epsilon(1e-9));
    }
}

TEST_CASE("number formatting is locale free and exact")
{
    CHECK(format_number(0.5) == "0.5");
    CHECK(format_number(25.0) == "25");
    CHECK(format_number(std::nan("")) == "nan");
    CHECK(std::stod(format_number(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("plot and scenario dumps")
{
    const auto result = run_sweep(small_sweep());
    const std::string svg = render_plot(result);
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("</svg>") != std::string::npos);
    for (auto d : {"mrc", "mmse", "sic", "ep"}) CHECK(svg.find(d) != std::string::npos);

    const auto dir = std::filesystem::temp_directory_path() / "cfmimo_dump_test";
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    const auto cfg = small_config();
    const auto sc = make_scenario(cfg, 0);
    dump_scenario(sc, dir);
    dump_channel(draw_trial(sc, cfg, 0, 0), dir);
    for (auto f : {"geometry.csv", "large_scale.csv", "channel.csv"}) CHECK(std::filesystem::exists(dir / f));
    std::ifstream geo(dir / "geometry.csv");
    int lines = 0;
    for (std::string l; std::getline(geo, l);) ++lines;
    CHECK(lines == 1 + cfg.L + cfg.K);
    std::filesystem::remove_all(dir);
}
