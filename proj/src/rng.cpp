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

#include "cfmimo/rng.hpp"

#include <cmath>

namespace cfmimo {

namespace {

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

} // namespace

Rng make_stream(std::uint64_t seed, std::initializer_list<std::uint64_t> keys)
{
    std::uint64_t state = splitmix64(seed);
    for (auto key : keys) state = splitmix64(state ^ splitmix64(key + 0x632be59bd9b4e019ULL));
    std::seed_seq seq{static_cast<std::uint32_t>(state), static_cast<std::uint32_t>(state >> 32),
                      static_cast<std::uint32_t>(splitmix64(state)),
                      static_cast<std::uint32_t>(splitmix64(state) >> 32)};
    return Rng(seq);
}

Complex complex_normal(Rng& rng, double variance)
{
    // both parts come from one polar-method pair
    std::normal_distribution<double> n;
    const double scale = std::sqrt(variance / 2.0);
    const double re = n(rng);
    const double im = n(rng);
    return {scale * re, scale * im};
}

CMatrix complex_normal_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols, double variance)
{
    CMatrix out(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i) out(i, j) = complex_normal(rng, variance);
    return out;
}

} // namespace cfmimo
