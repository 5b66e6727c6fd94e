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

#include "cfmimo/config.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>

using namespace cfmimo;

TEST_CASE("defaults are valid and map 25 dB to p")
{
    SystemConfig cfg;
    REQUIRE_NOTHROW(cfg.validate());
    CHECK(cfg.snr_db() == Catch::Approx(25.0).epsilon(1e-12));
    cfg.set_snr_db(10.0);
    CHECK(cfg.p == Catch::Approx(10.0 * cfg.sigma2));
}

TEST_CASE("validation names the offending field")
{
    auto broken = [](auto mutate) {
        SystemConfig cfg;
        mutate(cfg);
        return cfg;
    };
    CHECK_THROWS_AS(broken([](SystemConfig& c) { c.L = 0; }).validate(), ConfigError);
    CHECK_THROWS_AS(broken([](SystemConfig& c) { c.tau = 0; }).validate(), ConfigError);
    CHECK_THROWS_AS(broken([](SystemConfig& c) { c.tau = c.tau_c + 1; }).validate(), ConfigError);
    CHECK_THROWS_AS(broken([](SystemConfig& c) { c.M = 8; }).validate(), ConfigError);
    CHECK_THROWS_AS(broken([](SystemConfig& c) { c.eta = 1.5; }).validate(), ConfigError);
    CHECK_THROWS_AS(broken([](SystemConfig& c) { c.T_max = 0; }).validate(), ConfigError);
    CHECK_THROWS_AS(broken([](SystemConfig& c) { c.eps_conv = 0.0; }).validate(), ConfigError);
    CHECK_THROWS_AS(broken([](SystemConfig& c) { c.p = -1.0; }).validate(), ConfigError);
    CHECK_THROWS_AS(broken([](SystemConfig& c) { c.sigma2 = 0.0; }).validate(), ConfigError);
    CHECK_THROWS_WITH(broken([](SystemConfig& c) { c.K = -3; }).validate(), Catch::Matchers::ContainsSubstring("K"));
}

TEST_CASE("key-value parsing")
{
    const auto kv = parse_key_values("# comment\nL = 16\n  K=8  \n\npilot_mode = \"uniform\"\n");
    REQUIRE(kv.size() == 3);
    CHECK(kv.at("L") == "16");
    CHECK(kv.at("K") == "8");
    CHECK(kv.at("pilot_mode") == "uniform");

    CHECK_THROWS_AS(parse_key_values("L = 1\nL = 2\n"), ConfigError);
    CHECK_THROWS_WITH(parse_key_values("L = 1\nnot a pair\n", "x.cfg"), Catch::Matchers::ContainsSubstring("x.cfg:2"));
}

TEST_CASE("system keys are consumed and typed")
{
    auto kv = parse_key_values("L = 16\nK = 8\ntau = 4\nsnr_db = 10\nseed = 99\npilot_mode = uniform\n"
                               "normalize_beta = false\nunrelated = 1\n");
    const auto cfg = apply_system_keys(SystemConfig{}, kv);
    CHECK(cfg.L == 16);
    CHECK(cfg.K == 8);
    CHECK(cfg.tau == 4);
    CHECK(cfg.p == Catch::Approx(10.0));
    CHECK(cfg.seed == 99u);
    CHECK(cfg.pilot_mode == PilotMode::Uniform);
    CHECK_FALSE(cfg.normalize_beta);
    REQUIRE(kv.size() == 1);
    CHECK(kv.count("unrelated") == 1);
}

TEST_CASE("scalar parsers reject junk")
{
    CHECK(parse_double("x", "1e-3") == 1e-3);
    CHECK_THROWS_AS(parse_double("x", "1.0abc"), ConfigError);
    CHECK_THROWS_AS(parse_double("x", ""), ConfigError);
    CHECK(parse_integer("n", "-42") == -42);
    CHECK_THROWS_AS(parse_integer("n", "4.5"), ConfigError);
    CHECK(parse_bool("b", "true"));
    CHECK_FALSE(parse_bool("b", "0"));
    CHECK_THROWS_AS(parse_bool("b", "maybe"), ConfigError);
    CHECK(parse_pilot_mode("balanced") == PilotMode::Balanced);
    CHECK_THROWS_AS(parse_pilot_mode("greedy"), ConfigError);
    CHECK(to_string(PilotMode::Uniform) == "uniform");
}

TEST_CASE("configuration file round trip")
{
    const auto path = std::filesystem::temp_directory_path() / "cfmimo_test_config.cfg";
    {
        std::ofstream out(path);
        out << "L = 12\nM = 16\n";
    }
    auto kv = read_key_value_file(path);
    const auto cfg = apply_system_keys(SystemConfig{}, kv);
    CHECK(cfg.L == 12);
    CHECK(cfg.M == 16);
    std::filesystem::remove(path);
    CHECK_THROWS_AS(read_key_value_file(path), ConfigError);
}
