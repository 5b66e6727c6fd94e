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

#include "cfmimo/channel.hpp"
#include "cfmimo/config.hpp"
#include "cfmimo/detectors.hpp"
#include "cfmimo/metrics.hpp"
#include "cfmimo/scenario.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace cfmimo {

struct SweepSpec {
    SystemConfig config;
    std::vector<double> ratios{1.0 / 3.0, 0.5, 2.0 / 3.0, 5.0 / 6.0, 1.0};
    std::vector<double> snrs_db{25.0};
    std::vector<Detector> detectors{Detector::MRC, Detector::MMSE, Detector::SIC, Detector::EP};
    int trials = 200;
    int drops = 50;
    bool resample_drop_per_trial = false;
    std::filesystem::path output_path;  // CSV destination; empty disables the write check
    int workers = 1;

    // ConfigError on an empty detector set, trials < 1, drops < 1, a
    // non-positive ratio or a pilot count above tau_c.
    void validate() const;
};

// round(ratio K) clamped to [1, K].
int pilots_for_ratio(double ratio, int K);

// Everything one coherence block feeds to the detectors.
struct TrialInput {
    PilotAssignment pilots;
    ChannelRealization channel;
    Bits bits;
    CVector x;
    CVector y;
    double noise_var = 0.0;  // data-domain noise variance sigma2 / p
};

// Draws trial `trial` of drop `drop`. The data model is written with unit
// transmit power, y = H x + n with n ~ CN(0, sigma2 / p).
TrialInput draw_trial(const Scenario& scenario, const SystemConfig& config, std::uint64_t drop,
                      std::uint64_t trial);

struct DetectorOutcome {
    std::optional<TrialMetrics> metrics;  // empty when the detector aborted
    double elapsed_s = 0.0;
};

using TrialOutcome = std::array<std::optional<DetectorOutcome>, std::size(kAllDetectors)>;

inline std::size_t slot(Detector d) { return static_cast<std::size_t>(d); }

// Runs every enabled detector on the same (y, Hhat, D) of one trial.
TrialOutcome run_trial(const TrialInput& input, const SystemConfig& config, std::span<const Detector> detectors);
TrialOutcome run_trial(const Scenario& scenario, const SystemConfig& config, std::span<const Detector> detectors,
                       std::uint64_t drop, std::uint64_t trial);

struct SweepRow {
    Detector detector = Detector::EP;
    double ratio = 0.0;
    double snr_db = 0.0;
    double ber = 0.0;
    double ber_ci95 = 0.0;
    double sum_se = 0.0;
    double avg_iterations = 0.0;
    std::int64_t trials = 0;  // completed; aborted ones excluded
    double elapsed_s = 0.0;

    int tau = 0;
    std::int64_t bit_errors = 0;
    std::int64_t bits_total = 0;
    std::int64_t aborted = 0;
};

struct SweepResult {
    std::vector<SweepRow> rows;

    const SweepRow* find(Detector d, double ratio, double snr_db) const;
};

// 1.96 sqrt(q (1 - q) / n) for the pooled error proportion q.
double ber_ci95(std::int64_t errors, std::int64_t total);

using ProgressFn = std::function<void(std::size_t done_cells, std::size_t total_cells)>;

// Rows are ordered by ratio, then SNR, then detector in spec order. Every
// number except elapsed_s is independent of `workers`.
SweepResult run_sweep(const SweepSpec& spec, const ProgressFn& progress = {});

} // namespace cfmimo
