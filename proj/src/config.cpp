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
#include "cfmimo/types.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace cfmimo {

namespace {

std::string trim(const std::string& s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

bool is_power_of_four_square(int m)
{
    return m == 4 || m == 16 || m == 64 || m == 256;
}

} // namespace

void SystemConfig::validate() const
{
    if (L < 1) throw ConfigError("L must be >= 1");
    if (K < 1) throw ConfigError("K must be >= 1");
    if (tau < 1) throw ConfigError("tau must be >= 1");
    if (tau > tau_c) throw ConfigError("tau must not exceed tau_c");
    if (!is_power_of_four_square(M)) throw ConfigError("M must be one of 4, 16, 64, 256");
    if (!(eta >= 0.0 && eta <= 1.0)) throw ConfigError("eta must lie in [0, 1]");
    if (T_max < 1) throw ConfigError("T_max must be >= 1");
    if (!(eps_conv > 0.0)) throw ConfigError("eps_conv must be > 0");
    if (!(p > 0.0)) throw ConfigError("p must be > 0");
    if (!(sigma2 > 0.0)) throw ConfigError("sigma2 must be > 0");
    if (!(area_side > 0.0)) throw ConfigError("area_side must be > 0");
    if (!(shadow_std_db >= 0.0)) throw ConfigError("shadow_std_db must be >= 0");
    if (!(decorrelation_m > 0.0)) throw ConfigError("decorrelation_m must be > 0");
    if (!(min_distance_m > 0.0)) throw ConfigError("min_distance_m must be > 0");
}

double SystemConfig::snr_db() const { return 10.0 * std::log10(p / sigma2); }

void SystemConfig::set_snr_db(double snr_db) { p = sigma2 * std::pow(10.0, snr_db / 10.0); }

double parse_double(const std::string& key, const std::string& text)
{
    double value = 0.0;
    const char* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end || !std::isfinite(value))
        throw ConfigError("key '" + key + "': expected a number, got '" + text + "'");
    return value;
}

long long parse_integer(const std::string& key, const std::string& text)
{
    long long value = 0;
    const char* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end)
        throw ConfigError("key '" + key + "': expected an integer, got '" + text + "'");
    return value;
}

bool parse_bool(const std::string& key, const std::string& text)
{
    if (text == "true" || text == "1" || text == "yes") return true;
    if (text == "false" || text == "0" || text == "no") return false;
    throw ConfigError("key '" + key + "': expected a boolean, got '" + text + "'");
}

PilotMode parse_pilot_mode(const std::string& text)
{
    if (text == "uniform") return PilotMode::Uniform;
    if (text == "balanced") return PilotMode::Balanced;
    throw ConfigError("pilot_mode must be 'uniform' or 'balanced', got '" + text + "'");
}

std::string to_string(PilotMode mode)
{
    return mode == PilotMode::Uniform ? "uniform" : "balanced";
}

KeyValues parse_key_values(const std::string& text, const std::string& origin)
{
    KeyValues values;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        const auto where = origin + ":" + std::to_string(line_no);
        if (eq == std::string::npos) throw ConfigError(where + ": expected 'key = value'");
        auto key = trim(line.substr(0, eq));
        auto value = trim(line.substr(eq + 1));
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
            value = value.substr(1, value.size() - 2);
        if (key.empty()) throw ConfigError(where + ": empty key");
        if (!values.emplace(key, value).second) throw ConfigError(where + ": duplicate key '" + key + "'");
    }
    return values;
}

KeyValues read_key_value_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_key_values(buffer.str(), path.string());
}

SystemConfig apply_system_keys(SystemConfig cfg, KeyValues& values)
{
    auto take = [&](const char* key, auto&& apply) {
        if (auto it = values.find(key); it != values.end()) {
            apply(it->first, it->second);
            values.erase(it);
        }
    };
    auto as_int = [](const std::string& k, const std::string& v) { return static_cast<int>(parse_integer(k, v)); };

    take("L", [&](auto& k, auto& v) { cfg.L = as_int(k, v); });
    take("K", [&](auto& k, auto& v) { cfg.K = as_int(k, v); });
    take("tau", [&](auto& k, auto& v) { cfg.tau = as_int(k, v); });
    take("tau_c", [&](auto& k, auto& v) { cfg.tau_c = as_int(k, v); });
    take("sigma2", [&](auto& k, auto& v) { cfg.sigma2 = parse_double(k, v); });
    take("p", [&](auto& k, auto& v) { cfg.p = parse_double(k, v); });
    // snr_db is applied after sigma2 so that it wins over an explicit p
    take("snr_db", [&](auto& k, auto& v) { cfg.set_snr_db(parse_double(k, v)); });
    take("M", [&](auto& k, auto& v) { cfg.M = as_int(k, v); });
    take("eta", [&](auto& k, auto& v) { cfg.eta = parse_double(k, v); });
    take("T_max", [&](auto& k, auto& v) { cfg.T_max = as_int(k, v); });
    take("eps_conv", [&](auto& k, auto& v) { cfg.eps_conv = parse_double(k, v); });
    take("area_side", [&](auto& k, auto& v) { cfg.area_side = parse_double(k, v); });
    take("seed", [&](auto& k, auto& v) { cfg.seed = static_cast<std::uint64_t>(parse_integer(k, v)); });
    take("shadow_std_db", [&](auto& k, auto& v) { cfg.shadow_std_db = parse_double(k, v); });
    take("decorrelation_m", [&](auto& k, auto& v) { cfg.decorrelation_m = parse_double(k, v); });
    take("min_distance_m", [&](auto& k, auto& v) { cfg.min_distance_m = parse_double(k, v); });
    take("pilot_mode", [&](auto&, auto& v) { cfg.pilot_mode = parse_pilot_mode(v); });
    take("normalize_beta", [&](auto& k, auto& v) { cfg.normalize_beta = parse_bool(k, v); });
    return cfg;
}

} // namespace cfmimo
