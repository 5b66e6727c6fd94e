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

#include "cfmimo/modem.hpp"

#include <array>
#include <cmath>
#include <limits>

namespace cfmimo {

namespace {

int gray_to_binary(int g)
{
    int b = 0;
    for (; g != 0; g >>= 1) b ^= g;
    return b;
}

} // namespace

Constellation::Constellation(int order) : order_(order)
{
    if (order != 4 && order != 16 && order != 64 && order != 256)
        throw ConfigError("unsupported QAM order " + std::to_string(order));
    bits_per_symbol_ = static_cast<int>(std::lround(std::log2(order)));
    const int axis_bits = bits_per_symbol_ / 2;
    const int levels = 1 << axis_bits;
    const int axis_mask = levels - 1;
    const double scale = 1.0 / std::sqrt(2.0 * (order - 1) / 3.0);

    points_.resize(static_cast<std::size_t>(order));
    for (int i = 0; i < order; ++i) {
        // a label's Gray code value on an axis gives the level position
        const int re_level = gray_to_binary(i >> axis_bits);
        const int im_level = gray_to_binary(i & axis_mask);
        points_[static_cast<std::size_t>(i)] =
            Complex(2 * re_level - (levels - 1), 2 * im_level - (levels - 1)) * scale;
    }
}

Bits Constellation::label(int index) const
{
    Bits bits(static_cast<std::size_t>(bits_per_symbol_));
    for (int b = 0; b < bits_per_symbol_; ++b)
        bits[static_cast<std::size_t>(b)] = static_cast<std::uint8_t>((index >> (bits_per_symbol_ - 1 - b)) & 1);
    return bits;
}

int Constellation::index_of_bits(std::span<const std::uint8_t> bits) const
{
    require(static_cast<int>(bits.size()) == bits_per_symbol_, "index_of_bits: wrong label length");
    int index = 0;
    for (auto b : bits) index = (index << 1) | (b & 1);
    return index;
}

int Constellation::nearest_index(Complex x) const
{
    int best = 0;
    double best_dist = std::numeric_limits<double>::infinity();
    for (int i = 0; i < order_; ++i) {
        const double d = std::norm(x - points_[static_cast<std::size_t>(i)]);
        if (d < best_dist) {
            best_dist = d;
            best = i;
        }
    }
    return best;
}

Constellation build_constellation(int order) { return Constellation(order); }

CVector modulate(std::span<const std::uint8_t> bits, const Constellation& c)
{
    const auto bps = static_cast<std::size_t>(c.bits_per_symbol());
    require(bits.size() % bps == 0, "modulate: bit count not a multiple of log2(M)");
    CVector symbols(static_cast<Eigen::Index>(bits.size() / bps));
    for (Eigen::Index k = 0; k < symbols.size(); ++k)
        symbols(k) = c.point(c.index_of_bits(bits.subspan(static_cast<std::size_t>(k) * bps, bps)));
    return symbols;
}

HardDecision demodulate_hard(Complex x, const Constellation& c)
{
    HardDecision d;
    d.index = c.nearest_index(x);
    d.point = c.point(d.index);
    d.bits = c.label(d.index);
    return d;
}

void slice(const CVector& soft, const Constellation& c, CVector& hard, Bits& bits)
{
    const auto bps = c.bits_per_symbol();
    hard.resize(soft.size());
    bits.resize(static_cast<std::size_t>(soft.size() * bps));
    for (Eigen::Index k = 0; k < soft.size(); ++k) {
        const int index = c.nearest_index(soft(k));
        hard(k) = c.point(index);
        for (int b = 0; b < bps; ++b)
            bits[static_cast<std::size_t>(k * bps + b)] = static_cast<std::uint8_t>((index >> (bps - 1 - b)) & 1);
    }
}

PosteriorMoments posterior_moments(Complex x_obs, double v_obs, const Constellation& c)
{
    require(v_obs > 0.0, "posterior_moments: v_obs must be positive");
    const auto& pts = c.points();
    // largest log-weight is the smallest distance
    double min_dist = std::numeric_limits<double>::infinity();
    for (const auto& s : pts) min_dist = std::min(min_dist, std::norm(x_obs - s));

    std::array<double, 256> weight{};
    double total = 0.0;
    Complex mean = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        weight[i] = std::exp(-(std::norm(x_obs - pts[i]) - min_dist) / v_obs);
        total += weight[i];
        mean += weight[i] * pts[i];
    }
    mean /= total;
    double second = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) second += weight[i] * std::norm(pts[i] - mean);
    return {mean, second / total};
}

} // namespace cfmimo
