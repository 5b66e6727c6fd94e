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

#include <vector>

namespace cfmimo {

// Pilot indices are zero-based: pilot[k] in [0, tau).
struct PilotAssignment {
    int tau = 0;
    std::vector<int> pilot;                 // K entries
    std::vector<std::vector<int>> cohorts;  // tau sets partitioning {0..K-1}
};

// Builds the cohorts from explicit indices; ContractViolation if an index
// falls outside [0, tau).
PilotAssignment make_assignment(std::vector<int> pilot, int tau);

PilotAssignment assign_pilots(int K, int tau, Rng& rng, PilotMode mode = PilotMode::Uniform);

// Column i of `phi` is pilot sequence i: row i of the tau x tau DFT matrix,
// so that phi_i^H phi_j = tau [i == j].
struct PilotBook {
    CMatrix phi;
    int tau() const { return static_cast<int>(phi.cols()); }
};

PilotBook make_pilot_book(int tau);

// h = sqrt(beta) g, g ~ CN(0, 1) i.i.d.
CMatrix sample_channel(const RMatrix& beta, Rng& rng);

// Received pilots, one row per AP: Z(l, :) = z_l^T with
// z_l = sqrt(p) sum_i h_{l,i} phi_{t_i} + v_l.
CMatrix transmit_pilots(const CMatrix& H, const PilotAssignment& assignment, const PilotBook& book, double p,
                        const CMatrix& noise);
CMatrix transmit_pilots(const CMatrix& H, const PilotAssignment& assignment, const PilotBook& book, double p,
                        double sigma2, Rng& rng);

struct ChannelEstimate {
    CMatrix Hhat;   // L x K MMSE estimate
    RMatrix alpha;  // L x K, E|hhat|^2
    RMatrix C;      // L x K, E|h - hhat|^2 = beta - alpha
    RVector D;      // L, diagonal of the aggregate error covariance, sum_k C(l, k)
};

// Error statistics only; they do not depend on the received pilots.
ChannelEstimate estimation_statistics(const RMatrix& beta, const PilotAssignment& assignment, double p,
                                      double sigma2);

// MMSE estimate from the projection of each z_l onto the assigned pilot.
ChannelEstimate mmse_estimate(const CMatrix& Z, const RMatrix& beta, const PilotAssignment& assignment,
                              const PilotBook& book, double p, double sigma2);

// The same estimate written out through the cohort channel sum plus the
// projected noise. Fed the pilot noise used by transmit_pilots, it matches
// mmse_estimate up to rounding.
CMatrix mmse_estimate_expanded(const CMatrix& H, const CMatrix& noise, const RMatrix& beta,
                               const PilotAssignment& assignment, const PilotBook& book, double p, double sigma2);

struct ChannelRealization {
    CMatrix H;
    CMatrix Hhat;
    RMatrix alpha;
    RMatrix C;
    RVector D;
};

// Draws H and the pilot noise from their own streams, then estimates.
ChannelRealization realize_channel(const RMatrix& beta, const PilotAssignment& assignment, const PilotBook& book,
                                   double p, double sigma2, Rng& fading_rng, Rng& pilot_noise_rng);

// y = H x + n, n ~ CN(0, noise_var I). Always fed the true channel.
CVector received_data(const CMatrix& H, const CVector& x, double noise_var, Rng& rng);

} // namespace cfmimo
