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
#include "cfmimo/rng.hpp"
#include "oracles.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <limits>

using namespace cfmimo;
using Catch::Approx;

TEST_CASE("bit error counts")
{
    Bits a(120, 0);
    Bits b = a;
    CHECK(ber(a, b).errors == 0);
    CHECK(ber(a, b).total == 120);
    for (auto& v : b) v = 1;
    CHECK(ber(a, b).errors == 120);
    Bits c = a;
    c[17] = 1;
    const auto one = ber(c, a);
    CHECK(one.errors == 1);
    CHECK(one.total == 120);
    CHECK(one.rate() == Approx(1.0 / 120.0));
    Bits shorter(119, 0);
    CHECK_THROWS_AS(ber(shorter, a), ContractViolation);
}

TEST_CASE("pooled counts add")
{
    BitErrorCount pooled;
    const BitErrorCount parts[] = {{3, 100}, {0, 50}, {7, 70}};
    for (const auto& p : parts) pooled += p;
    CHECK(pooled.errors == 10);
    CHECK(pooled.total == 220);
    CHECK(BitErrorCount{}.rate() == 0.0);
}

TEST_CASE("EP SINR proxy")
{
    CHECK(sinr_ep(RVector::Ones(60)) == Approx(1.0));
    CHECK(sinr_ep(RVector::Constant(60, 0.01)) == Approx(100.0));
    CHECK(sinr_ep((RVector(2) << 0.1, 0.3).finished()) == Approx(5.0));
}

TEST_CASE("spectral efficiency")
{
    CHECK(se(0.0, 10, 200) == 0.0);
    CHECK(se(50.0, 200, 200) == 0.0);
    CHECK(se(3.0, 20, 200) == Approx(1.8));
    // strictly increasing in SINR, strictly decreasing in overhead
    double prev = -1.0;
    for (double s = 0.0; s < 100.0; s += 0.7) {
        const double v = se(s, 30, 200);
        CHECK(v > prev);
        prev = v;
    }
    for (int tp = 1; tp < 200; tp += 13) CHECK(se(4.0, tp + 1, 200) < se(4.0, tp, 200));
}

TEST_CASE("linear SINR")
{
    auto rng = make_stream(1, {1});
    SECTION("single matched user without error")
    {
        const CMatrix h = complex_normal_matrix(rng, 5, 1, 1.0);
        const double v = sinr_linear(h.col(0), h, 0, RVector::Zero(5), 3.0, 0.5);
        CHECK(v == Approx(3.0 * h.squaredNorm() / 0.5).epsilon(1e-12));
    }
    SECTION("orthogonal columns carry no cross terms")
    {
        const CMatrix H = CMatrix::Identity(4, 3);
        const RVector D = RVector::Zero(4);
        CHECK(sinr_linear(H.col(1), H, 1, D, 2.0, 1.0) == Approx(2.0));
    }
    SECTION("random instance against the expanded expression")
    {
        const CMatrix H = complex_normal_matrix(rng, 8, 2, 1.0);
        const CVector a = complex_normal_matrix(rng, 8, 1, 1.0).col(0);
        RVector D(8);
        for (int l = 0; l < 8; ++l) D(l) = 0.05 * (l + 1);
        for (int k = 0; k < 2; ++k) {
            const double ref = oracle::sinr(a, H, k, D, 4.0, 0.3, {0, 1});
            CHECK(sinr_linear(a, H, k, D, 4.0, 0.3) == Approx(ref).epsilon(1e-12));
            const std::vector<int> none;
            CHECK(sinr_linear(a, H, k, D, 4.0, 0.3, none) == Approx(oracle::sinr(a, H, k, D, 4.0, 0.3, {}))
                                                                 .epsilon(1e-12));
        }
    }
}

TEST_CASE("per-detector SINR selection")
{
    auto rng = make_stream(2, {1});
    const CMatrix H = complex_normal_matrix(rng, 6, 3, 1.0);
    const RVector D = RVector::Constant(6, 0.1);

    DetectionResult ep;
    ep.v_obs_final = (RVector(3) << 0.1, 0.2, 0.3).finished();
    const RVector s_ep = detector_sinr(ep, H, D, 1.0, 0.1);
    REQUIRE(s_ep.size() == 3);
    CHECK(s_ep(2) == Approx(5.0));

    DetectionResult ml;
    CHECK(detector_sinr(ml, H, D, 1.0, 0.1).size() == 0);

    DetectionResult sic;
    sic.combiner = complex_normal_matrix(rng, 6, 3, 1.0);
    sic.detection_order = {2, 0, 1};
    const RVector s = detector_sinr(sic, H, D, 1.0, 0.1);
    CHECK(s(2) == Approx(oracle::sinr(sic.combiner.col(2), H, 2, D, 1.0, 0.1, {0, 1})).epsilon(1e-12));
    CHECK(s(0) == Approx(oracle::sinr(sic.combiner.col(0), H, 0, D, 1.0, 0.1, {1})).epsilon(1e-12));
    CHECK(s(1) == Approx(oracle::sinr(sic.combiner.col(1), H, 1, D, 1.0, 0.1, {})).epsilon(1e-12));
}
