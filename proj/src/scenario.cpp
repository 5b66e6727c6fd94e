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

#include "cfmimo/scenario.hpp"

#include <cmath>
#include <stdexcept>

namespace cfmimo {

namespace {

constexpr double kCovarianceJitter = 1e-9;

} // namespace

double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

Geometry place_entities(const SystemConfig& config, Rng& rng)
{
    std::uniform_real_distribution<double> coord(0.0, config.area_side);
    Geometry g;
    g.ap_positions.resize(static_cast<std::size_t>(config.L));
    g.ue_positions.resize(static_cast<std::size_t>(config.K));
    for (auto& ap : g.ap_positions) {
        ap.x = coord(rng);
        ap.y = coord(rng);
    }
    for (auto& ue : g.ue_positions) {
        ue.x = coord(rng);
        ue.y = coord(rng);
    }
    return g;
}

double pathloss_db(double distance_m)
{
    if (!(distance_m > 0.0)) throw std::domain_error("pathloss_db: distance must be positive");
    return -30.5 - 36.7 * std::log10(distance_m);
}

RMatrix shadowing_covariance(std::span<const Point> ue_positions, double std_db, double decorrelation_m)
{
    const auto K = static_cast<Eigen::Index>(ue_positions.size());
    const double variance = std_db * std_db;
    RMatrix cov(K, K);
    for (Eigen::Index k = 0; k < K; ++k) {
        cov(k, k) = variance;
        for (Eigen::Index i = k + 1; i < K; ++i) {
            const double delta = distance(ue_positions[static_cast<std::size_t>(k)],
                                          ue_positions[static_cast<std::size_t>(i)]);
            cov(k, i) = cov(i, k) = variance * std::exp2(-delta / decorrelation_m);
        }
    }
    return cov;
}

LargeScaleFading sample_large_scale(const Geometry& geometry, const SystemConfig& config, Rng& rng)
{
    const auto L = static_cast<Eigen::Index>(geometry.ap_positions.size());
    const auto K = static_cast<Eigen::Index>(geometry.ue_positions.size());

    LargeScaleFading lsf;
    lsf.shadow_db = RMatrix::Zero(L, K);
    if (config.shadow_std_db > 0.0) {
        RMatrix cov = shadowing_covariance(geometry.ue_positions, config.shadow_std_db, config.decorrelation_m);
        cov.diagonal().array() += kCovarianceJitter;
        Eigen::LLT<RMatrix> chol(cov);
        if (chol.info() != Eigen::Success)
            throw ConfigError("shadowing covariance is not positive definite");
        const RMatrix lower = chol.matrixL();
        std::normal_distribution<double> normal;
        RVector z(K);
        for (Eigen::Index l = 0; l < L; ++l) {
            for (Eigen::Index k = 0; k < K; ++k) z(k) = normal(rng);
            lsf.shadow_db.row(l) = (lower * z).transpose();
        }
    }

    lsf.beta.resize(L, K);
    for (Eigen::Index l = 0; l < L; ++l) {
        for (Eigen::Index k = 0; k < K; ++k) {
            const double d = std::max(config.min_distance_m,
                                      distance(geometry.ap_positions[static_cast<std::size_t>(l)],
                                               geometry.ue_positions[static_cast<std::size_t>(k)]));
            lsf.beta(l, k) = std::pow(10.0, (pathloss_db(d) + lsf.shadow_db(l, k)) / 10.0);
        }
    }
    return lsf;
}

double mean_gain(const RMatrix& beta) { return beta.mean(); }

Scenario make_scenario(const SystemConfig& config, Geometry geometry, Rng& shadowing_rng)
{
    Scenario s;
    s.geometry = std::move(geometry);
    s.fading = sample_large_scale(s.geometry, config, shadowing_rng);
    s.gain_scale = config.normalize_beta ? 1.0 / mean_gain(s.fading.beta) : 1.0;
    s.beta = s.fading.beta * s.gain_scale;
    return s;
}

Scenario make_scenario(const SystemConfig& config, std::uint64_t drop)
{
    auto geometry_rng = make_stream(config.seed, drop, 0, Stream::Geometry);
    auto shadow_rng = make_stream(config.seed, drop, 0, Stream::Shadowing);
    return make_scenario(config, place_entities(config, geometry_rng), shadow_rng);
}

} // namespace cfmimo
