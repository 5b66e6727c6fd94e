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

#include "cfmimo/detectors.hpp"
#include "cfmimo/types.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace cfmimo {

struct BitErrorCount {
    std::int64_t errors = 0;
    std::int64_t total = 0;

    BitErrorCount& operator+=(const BitErrorCount& other)
    {
        errors += other.errors;
        total += other.total;
        return *this;
    }
    double rate() const { return total > 0 ? static_cast<double>(errors) / static_cast<double>(total) : 0.0; }
};

// Hamming distance and length. ContractViolation on a length mismatch.
BitErrorCount ber(std::span<const std::uint8_t> hard_bits, std::span<const std::uint8_t> true_bits);

// K / tr(V_obs), the common SINR of every UE under EP.
double sinr_ep(const RVector& v_obs_final);

// (1 - tau_p / tau_c) log2(1 + sinr).
double se(double sinr, int tau_p, int tau_c);

// p |a^H h_k|^2 / (p sum_{i in interferers} |a^H h_i|^2 + p a^H D a + sigma2 ||a||^2)
double sinr_linear(const CVector& a, const CMatrix& Hhat, Eigen::Index k, const RVector& D, double p, double sigma2,
                   std::span<const int> interferers);

// Every other UE interferes.
double sinr_linear(const CVector& a, const CMatrix& Hhat, Eigen::Index k, const RVector& D, double p, double sigma2);

// Per-UE SINR of a linear or SIC detection result from its combiners. For SIC
// only UEs detected at later stages interfere. EP results use sinr_ep for
// every UE. Empty for ML, which has no SINR.
RVector detector_sinr(const DetectionResult& result, const CMatrix& Hhat, const RVector& D, double p, double sigma2);

struct TrialMetrics {
    BitErrorCount bits;
    RVector sinr;
    double sum_se = 0.0;  // NaN when the detector defines no SINR
    int iterations = 1;
};

} // namespace cfmimo
