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
#include <initializer_list>
#include <random>

namespace cfmimo {

using Rng = std::mt19937_64;

// Independent sub-streams of one campaign; each random quantity of a trial
// draws from its own stream.
enum class Stream : std::uint64_t {
    Geometry = 1,
    Shadowing,
    SmallScale,
    PilotAssignment,
    PilotNoise,
    DataBits,
    DataNoise,
};

// Seeds a generator from (seed, keys...) through a SplitMix64 chain.
Rng make_stream(std::uint64_t seed, std::initializer_list<std::uint64_t> keys);

inline Rng make_stream(std::uint64_t seed, std::uint64_t drop, std::uint64_t trial, Stream purpose)
{
    return make_stream(seed, {drop, trial, static_cast<std::uint64_t>(purpose)});
}

// Circularly-symmetric complex Gaussian with E|z|^2 = variance.
Complex complex_normal(Rng& rng, double variance = 1.0);

CMatrix complex_normal_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols, double variance = 1.0);

} // namespace cfmimo
