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

#pragma once

#include "cfmimo/types.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>

namespace cfmimo {

enum class PilotMode {
    Uniform,   // each UE draws its pilot i.i.d. uniformly
    Balanced,  // round-robin over a random UE permutation
};

// System constants for one simulated network. Defaults follow the
// 100-AP / 60-UE urban-microcell setup at 25 dB SNR.
struct SystemConfig {
    int L = 100;              // access points
    int K = 60;               // user equipments
    int tau = 30;             // orthogonal pilots
    int tau_c = 200;          // coherence block length (channel uses)
    double p = 316.22776601683796;  // uplink transmit power, linear
    double sigma2 = 1.0;      // noise power, linear
    int M = 4;                // QAM order
    double eta = 0.7;         // EP damping weight
    int T_max = 10;           // EP iteration cap
    double eps_conv = 1e-4;   // EP convergence threshold
    double area_side = 1000.0;  // meters
    std::uint64_t seed = 1;

    double shadow_std_db = 4.0;
    double decorrelation_m = 9.0;
    double min_distance_m = 1.0;
    PilotMode pilot_mode = PilotMode::Balanced;
    // Scale beta by its drop-wide mean so that p / sigma2 is the SNR.
    bool normalize_beta = true;

    // Throws ConfigError naming the first violated invariant.
    void validate() const;

    double snr_db() const;
    void set_snr_db(double snr_db);
};

using KeyValues = std::map<std::string, std::string>;

// Parses `key = value` lines; `#` starts a comment. Duplicate keys and
// malformed lines are ConfigErrors carrying the file path and line number.
KeyValues read_key_value_file(const std::filesystem::path& path);
KeyValues parse_key_values(const std::string& text, const std::string& origin = "<string>");

// Applies every SystemConfig key present in `values` on top of `base` and
// erases the consumed keys, leaving the rest for other consumers.
SystemConfig apply_system_keys(SystemConfig base, KeyValues& values);

double parse_double(const std::string& key, const std::string& text);
long long parse_integer(const std::string& key, const std::string& text);
bool parse_bool(const std::string& key, const std::string& text);
PilotMode parse_pilot_mode(const std::string& text);
std::string to_string(PilotMode mode);

} // namespace cfmimo
