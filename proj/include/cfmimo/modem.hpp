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

#include <span>
#include <vector>

namespace cfmimo {

// Square Gray-coded M-QAM with unit average energy. Point i carries the
// label whose integer value is i: the high log2(M)/2 bits select the
// in-phase level, the low bits the quadrature level, each axis using a
// reflected-binary code.
class Constellation {
public:
    // Throws ConfigError unless M is 4, 16, 64 or 256.
    explicit Constellation(int order);

    int order() const { return order_; }
    int bits_per_symbol() const { return bits_per_symbol_; }
    const std::vector<Complex>& points() const { return points_; }
    Complex point(int index) const { return points_[static_cast<std::size_t>(index)]; }
    // Label of point `index`, most significant bit first.
    Bits label(int index) const;

    int index_of_bits(std::span<const std::uint8_t> bits) const;
    // Nearest point by Euclidean distance, lowest index on ties.
    int nearest_index(Complex x) const;

private:
    int order_;
    int bits_per_symbol_;
    std::vector<Complex> points_;
};

Constellation build_constellation(int order);

// Throws ContractViolation if bits.size() is not a multiple of log2(M).
CVector modulate(std::span<const std::uint8_t> bits, const Constellation& c);

struct HardDecision {
    Complex point;
    int index = 0;
    Bits bits;
};

HardDecision demodulate_hard(Complex x, const Constellation& c);

// Hard decisions for a whole vector: the points plus the concatenated bits.
void slice(const CVector& soft, const Constellation& c, CVector& hard, Bits& bits);

struct PosteriorMoments {
    Complex mean;
    double variance = 0.0;
};

// Mean and variance of the discrete posterior
// w_s ~ exp(-|x_obs - s|^2 / v_obs) over s in the constellation.
// Computed in the log domain; v_obs must be positive.
PosteriorMoments posterior_moments(Complex x_obs, double v_obs, const Constellation& c);

} // namespace cfmimo
