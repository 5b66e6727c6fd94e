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

#include "cfmimo/config.hpp"
#include "cfmimo/rng.hpp"
#include "cfmimo/types.hpp"

#include <span>
#include <vector>

namespace cfmimo {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

double distance(Point a, Point b);

struct Geometry {
    std::vector<Point> ap_positions;  // L entries, meters
    std::vector<Point> ue_positions;  // K entries, meters
};

struct LargeScaleFading {
    RMatrix beta;       // L x K, linear scale
    RMatrix shadow_db;  // L x K shadow-fading realizations F, dB
};

// One network drop: geometry, its large-scale fading, and the effective
// gains handed to the channel model (beta scaled by `gain_scale`).
struct Scenario {
    Geometry geometry;
    LargeScaleFading fading;
    RMatrix beta;
    double gain_scale = 1.0;
};

// i.i.d. uniform placement of L APs and K UEs over [0, area_side]^2.
Geometry place_entities(const SystemConfig& config, Rng& rng);

// Urban-microcell pathloss without shadowing, -30.5 - 36.7 log10(d / 1 m).
// Throws std::domain_error for d <= 0.
double pathloss_db(double distance_m);

// K x K covariance (dB^2) of one AP's shadowing vector:
// std_db^2 * 2^(-delta_ki / decorrelation_m).
RMatrix shadowing_covariance(std::span<const Point> ue_positions, double std_db = 4.0,
                             double decorrelation_m = 9.0);

// Draws shadowing rows independently per AP and combines them with the
// pathloss at max(d, min_distance_m). Throws ConfigError when the jittered
// covariance is not positive definite.
LargeScaleFading sample_large_scale(const Geometry& geometry, const SystemConfig& config, Rng& rng);

// Mean of all entries of beta.
double mean_gain(const RMatrix& beta);

// Generates drop `drop` of a campaign from config.seed.
Scenario make_scenario(const SystemConfig& config, std::uint64_t drop);
Scenario make_scenario(const SystemConfig& config, Geometry geometry, Rng& shadowing_rng);

} // namespace cfmimo
