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

#include "cfmimo/modem.hpp"
#include "cfmimo/types.hpp"

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cfmimo {

enum class Detector { MRC, MMSE, SIC, EP, ML };

inline constexpr Detector kAllDetectors[] = {Detector::MRC, Detector::MMSE, Detector::SIC, Detector::EP,
                                             Detector::ML};

std::string_view name(Detector d);
// Accepts mrc, mmse, sic, ep, ml. Throws ConfigError otherwise.
Detector parse_detector(std::string_view text);

struct DetectionResult {
    CVector soft;
    CVector hard;
    Bits hard_bits;
    int iterations = 1;
    RVector v_obs_final;               // EP only
    CMatrix combiner;                  // L x K linear combiners a_k; empty for EP and ML
    std::vector<int> detection_order;  // SIC only: UE detected at each stage
};

// Quantities of the effective model y = Hhat x + w, w ~ CN(0, R),
// R = diag(D) + sigma2 I, shared by every iteration of a detector.
struct ObservationModel {
    RVector r_inv;    // diagonal of R^-1
    CMatrix gram;     // Hhat^H R^-1 Hhat
    CVector matched;  // Hhat^H R^-1 y
};

ObservationModel make_observation_model(const CVector& y, const CMatrix& Hhat, const RVector& D, double sigma2);

// Conjugate combining normalized by ||hhat_k||^2. An all-zero column gives
// soft_k = 0.
DetectionResult detect_mrc(const CVector& y, const CMatrix& Hhat, const Constellation& c);

// (Hhat^H R^-1 Hhat + I)^-1 Hhat^H R^-1 y
DetectionResult detect_mmse(const CVector& y, const CMatrix& Hhat, const RVector& D, double sigma2,
                            const Constellation& c);

// Ordered successive cancellation: each stage applies the MMSE filter to the
// residual over the undetected UEs, slices the one with the highest
// post-filter SINR and subtracts its contribution.
DetectionResult detect_mmse_sic(const CVector& y, const CMatrix& Hhat, const RVector& D, double sigma2,
                                const Constellation& c);

inline constexpr double kLambdaMin = 5e-7;
inline constexpr double kVarianceFloor = 1e-8;

struct EpState {
    RVector lambda;      // prior-site precisions, > 0
    CVector gamma;       // prior-site precision-weighted means
    RVector sigma_diag;  // diag of the Gaussian belief covariance
    CVector mu;          // Gaussian belief mean
    CVector x_obs;       // extrinsic means
    RVector v_obs;       // extrinsic variances, > 0
    CVector x_hat;       // discrete posterior means
    RVector v_post;      // discrete posterior variances
    int iteration = 0;
    int clamped = 0;     // v_obs entries floored in the last observation step
};

// lambda = 1, gamma = 0.
EpState initial_ep_state(Eigen::Index K);

// Gaussian belief (Sigma, mu) and its extrinsic (x_obs, v_obs).
EpState ep_observation_step(EpState state, const ObservationModel& model);

// Moment matching against the constellation prior and the damped site
// update. A damped lambda at or below kLambdaMin keeps the previous pair.
EpState ep_estimation_step(EpState state, const Constellation& c, double eta);

struct EpParams {
    double eta = 0.7;
    int T_max = 10;
    double eps_conv = 1e-4;
};

// Called after each iteration's estimation step with the state of that
// iteration (belief and extrinsic of t, site parameters of t + 1).
using EpObserver = std::function<void(const EpState& before, const EpState& after)>;

// Throws DetectorAbort if the state becomes non-finite.
DetectionResult detect_ep(const CVector& y, const CMatrix& Hhat, const RVector& D, double sigma2,
                          const Constellation& c, const EpParams& params, const EpObserver& observer = {});

inline constexpr double kMaxMlCandidates = 1 << 20;

// Exhaustive minimum of (y - Hhat x)^H R^-1 (y - Hhat x) over all M^K
// vectors. ConfigError if M^K exceeds kMaxMlCandidates.
DetectionResult detect_ml(const CVector& y, const CMatrix& Hhat, const RVector& D, double sigma2,
                          const Constellation& c);

} // namespace cfmimo
