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

#include "cfmimo/metrics.hpp"

#include <cmath>

namespace cfmimo {

BitErrorCount ber(std::span<const std::uint8_t> hard_bits, std::span<const std::uint8_t> true_bits)
{
    require(hard_bits.size() == true_bits.size(), "ber: bit streams differ in length");
    BitErrorCount count;
    count.total = static_cast<std::int64_t>(true_bits.size());
    for (std::size_t i = 0; i < true_bits.size(); ++i) count.errors += (hard_bits[i] != true_bits[i]) ? 1 : 0;
    return count;
}

double sinr_ep(const RVector& v_obs_final)
{
    require(v_obs_final.size() > 0 && (v_obs_final.array() > 0.0).all(), "sinr_ep: v_obs must be positive");
    return static_cast<double>(v_obs_final.size()) / v_obs_final.sum();
}

double se(double sinr, int tau_p, int tau_c)
{
    require(tau_c > 0 && tau_p >= 0 && tau_p <= tau_c, "se: need 0 <= tau_p <= tau_c");
    return (1.0 - static_cast<double>(tau_p) / tau_c) * std::log2(1.0 + sinr);
}

double sinr_linear(const CVector& a, const CMatrix& Hhat, Eigen::Index k, const RVector& D, double p, double sigma2,
                   std::span<const int> interferers)
{
    const double signal = p * std::norm(a.dot(Hhat.col(k)));
    double interference = 0.0;
    for (int i : interferers)
        if (i != k) interference += std::norm(a.dot(Hhat.col(i)));
    const double error = (a.array().abs2() * D.array()).sum();
    const double denom = p * interference + p * error + sigma2 * a.squaredNorm();
    return denom > 0.0 ? signal / denom : 0.0;
}

double sinr_linear(const CVector& a, const CMatrix& Hhat, Eigen::Index k, const RVector& D, double p, double sigma2)
{
    std::vector<int> all(static_cast<std::size_t>(Hhat.cols()));
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
    return sinr_linear(a, Hhat, k, D, p, sigma2, all);
}

RVector detector_sinr(const DetectionResult& result, const CMatrix& Hhat, const RVector& D, double p, double sigma2)
{
    const auto K = Hhat.cols();
    if (result.v_obs_final.size() > 0) return RVector::Constant(K, sinr_ep(result.v_obs_final));
    if (result.combiner.size() == 0) return {};

    RVector sinr(K);
    if (result.detection_order.empty()) {
        for (Eigen::Index k = 0; k < K; ++k) sinr(k) = sinr_linear(result.combiner.col(k), Hhat, k, D, p, sigma2);
        return sinr;
    }
    const auto& order = result.detection_order;
    for (std::size_t stage = 0; stage < order.size(); ++stage) {
        const std::span<const int> later(order.data() + stage + 1, order.size() - stage - 1);
        const int k = order[stage];
        sinr(k) = sinr_linear(result.combiner.col(k), Hhat, k, D, p, sigma2, later);
    }
    return sinr;
}

} // namespace cfmimo
