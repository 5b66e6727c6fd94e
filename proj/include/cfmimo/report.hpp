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

#include "cfmimo/harness.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace cfmimo {

inline constexpr const char* kCsvHeader = "detector,ratio,snr_db,ber,ber_ci95,sum_se,avg_iter,trials,elapsed_s";

// Shortest decimal that round-trips, independent of the global locale.
std::string format_number(double value);

// One row per grid cell per detector and a trailing `# aborted_trials ...`
// comment. With include_timing false the elapsed_s column is written as 0,
// which makes the file a pure function of the sweep spec.
void write_csv(const SweepResult& result, std::ostream& out, bool include_timing = true);
void emit_csv(const SweepResult& result, const std::filesystem::path& path, bool include_timing = true);

// Parses what write_csv produced (comment lines are skipped). Only the
// header columns are restored.
SweepResult read_csv(std::istream& in);

// Two-panel SVG: BER on a log axis and sum SE, both against the ratio, one
// series per detector (and SNR when several are swept).
std::string render_plot(const SweepResult& result);
void emit_plot(const SweepResult& result, const std::filesystem::path& path);

// geometry.csv and large_scale.csv for one drop.
void dump_scenario(const Scenario& scenario, const std::filesystem::path& directory);
// channel.csv with H, Hhat, alpha, C and D for one trial.
void dump_channel(const TrialInput& trial, const std::filesystem::path& directory);

} // namespace cfmimo
