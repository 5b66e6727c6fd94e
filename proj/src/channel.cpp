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

#include "cfmimo/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <numbers>

namespace cfmimo {

PilotAssignment make_assignment(std::vector<int> pilot, int tau)
{
    require(tau >= 1, "make_assignment: tau must be >= 1");
    PilotAssignment a;
    a.tau = tau;
    a.cohorts.assign(static_cast<std::size_t>(tau), {});
    for (std::size_t k = 0; k < pilot.size(); ++k) {
        require(pilot[k] >= 0 && pilot[k] < tau, "make_assignment: pilot index out of range");
        a.cohorts[static_cast<std::size_t>(pilot[k])].push_back(static_cast<int>(k));
    }
    a.pilot = std::move(pilot);
    return a;
}

PilotAssignment assign_pilots(int K, int tau, Rng& rng, PilotMode mode)
{
    require(tau >= 1, "assign_pilots: tau must be >= 1");
    std::vector<int> pilot(static_cast<std::size_t>(K));
    if (mode == PilotMode::Uniform) {
        std::uniform_int_distribution<int> pick(0, tau - 1);
        for (auto& t : pilot) t = pick(rng);
    } else {
        std::vector<int> order(static_cast<std::size_t>(K));
        std::iota(order.begin(), order.end(), 0);
        // Fisher-Yates
        for (int i = K - 1; i > 0; --i) {
            std::uniform_int_distribution<int> pick(0, i);
            std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(pick(rng))]);
        }
        for (int j = 0; j < K; ++j) pilot[static_cast<std::size_t>(order[static_cast<std::size_t>(j)])] = j % tau;
    }
    return make_assignment(std::move(pilot), tau);
}

PilotBook make_pilot_book(int tau)
{
    require(tau >= 1, "make_pilot_book: tau must be >= 1");
    PilotBook book;
    book.phi.resize(tau, tau);
    for (int i = 0; i < tau; ++i) {
        for (int n = 0; n < tau; ++n) {
            const double phase = -2.0 * std::numbers::pi * static_cast<double>((i * n) % tau) / tau;
            book.phi(n, i) = std::polar(1.0, phase);
        }
    }
    return book;
}

CMatrix sample_channel(const RMatrix& beta, Rng& rng)
{
    CMatrix H(beta.rows(), beta.cols());
    for (Eigen::Index k = 0; k < beta.cols(); ++k)
        for (Eigen::Index l = 0; l < beta.rows(); ++l) H(l, k) = std::sqrt(beta(l, k)) * complex_normal(rng);
    return H;
}

CMatrix transmit_pilots(const CMatrix& H, const PilotAssignment& assignment, const PilotBook& book, double p,
                        const CMatrix& noise)
{
    const auto K = H.cols();
    require(static_cast<Eigen::Index>(assignment.pilot.size()) == K, "transmit_pilots: assignment size != K");
    require(noise.rows() == H.rows() && noise.cols() == book.tau(), "transmit_pilots: noise must be L x tau");
    // Phi_t(:, k) = phi_{t_k}; Z = sqrt(p) H Phi_t^T + V
    CMatrix assigned(book.tau(), K);
    for (Eigen::Index k = 0; k < K; ++k) assigned.col(k) = book.phi.col(assignment.pilot[static_cast<std::size_t>(k)]);
    return std::sqrt(p) * H * assigned.transpose() + noise;
}

CMatrix transmit_pilots(const CMatrix& H, const PilotAssignment& assignment, const PilotBook& book, double p,
                        double sigma2, Rng& rng)
{
    return transmit_pilots(H, assignment, book, p, complex_normal_matrix(rng, H.rows(), book.tau(), sigma2));
}

namespace {

// (sigma2 + p tau sum_{i in S_{t_k}} beta_{l,i}) for every (l, k)
RMatrix estimation_denominators(const RMatrix& beta, const PilotAssignment& assignment, double p, double sigma2)
{
    const auto L = beta.rows();
    const auto K = beta.cols();
    const double ptau = p * assignment.tau;
    RMatrix cohort_sum = RMatrix::Zero(L, assignment.tau);
    for (Eigen::Index k = 0; k < K; ++k) cohort_sum.col(assignment.pilot[static_cast<std::size_t>(k)]) += beta.col(k);
    RMatrix denom(L, K);
    for (Eigen::Index k = 0; k < K; ++k)
        denom.col(k) = (sigma2 + ptau * cohort_sum.col(assignment.pilot[static_cast<std::size_t>(k)]).array()).matrix();
    return denom;
}

} // namespace

ChannelEstimate estimation_statistics(const RMatrix& beta, const PilotAssignment& assignment, double p,
                                      double sigma2)
{
    require(static_cast<Eigen::Index>(assignment.pilot.size()) == beta.cols(),
            "estimation_statistics: assignment size != K");
    const RMatrix denom = estimation_denominators(beta, assignment, p, sigma2);
    const double ptau = p * assignment.tau;
    ChannelEstimate est;
    est.alpha = (ptau * beta.array().square() / denom.array()).matrix();
    est.C = beta - est.alpha;
    // alpha <= beta analytically; clip the rounding residue
    est.C = est.C.cwiseMax(0.0);
    est.D = est.C.rowwise().sum();
    return est;
}

ChannelEstimate mmse_estimate(const CMatrix& Z, const RMatrix& beta, const PilotAssignment& assignment,
                              const PilotBook& book, double p, double sigma2)
{
    require(Z.rows() == beta.rows() && Z.cols() == book.tau(), "mmse_estimate: Z must be L x tau");
    require(assignment.tau == book.tau(), "mmse_estimate: assignment and pilot book disagree on tau");
    ChannelEstimate est = estimation_statistics(beta, assignment, p, sigma2);

    const double tau = assignment.tau;
    const RMatrix denom = estimation_denominators(beta, assignment, p, sigma2);
    // (phi_i^H z_l) / sqrt(tau) for all (l, i)
    const CMatrix projected = Z * book.phi.conjugate() / std::sqrt(tau);
    est.Hhat.resize(beta.rows(), beta.cols());
    for (Eigen::Index k = 0; k < beta.cols(); ++k) {
        const int t = assignment.pilot[static_cast<std::size_t>(k)];
        for (Eigen::Index l = 0; l < beta.rows(); ++l)
            est.Hhat(l, k) = std::sqrt(p * tau) * beta(l, k) / denom(l, k) * projected(l, t);
    }
    return est;
}

CMatrix mmse_estimate_expanded(const CMatrix& H, const CMatrix& noise, const RMatrix& beta,
                               const PilotAssignment& assignment, const PilotBook& book, double p, double sigma2)
{
    const auto L = H.rows();
    const auto K = H.cols();
    const double tau = assignment.tau;
    const double ptau = p * tau;
    CMatrix Hhat(L, K);
    for (Eigen::Index k = 0; k < K; ++k) {
        const int t = assignment.pilot[static_cast<std::size_t>(k)];
        const auto& cohort = assignment.cohorts[static_cast<std::size_t>(t)];
        for (Eigen::Index l = 0; l < L; ++l) {
            double beta_sum = 0.0;
            Complex h_sum = 0.0;
            for (int i : cohort) {
                beta_sum += beta(l, i);
                h_sum += H(l, i);
            }
            Complex v_tilde = 0.0;
            for (int n = 0; n < book.tau(); ++n) v_tilde += std::conj(book.phi(n, t)) * noise(l, n);
            v_tilde /= std::sqrt(tau);
            const double coef = std::sqrt(ptau) * beta(l, k) / (sigma2 + ptau * beta_sum);
            Hhat(l, k) = coef * (std::sqrt(ptau) * h_sum + v_tilde);
        }
    }
    return Hhat;
}

ChannelRealization realize_channel(const RMatrix& beta, const PilotAssignment& assignment, const PilotBook& book,
                                   double p, double sigma2, Rng& fading_rng, Rng& pilot_noise_rng)
{
    ChannelRealization r;
    r.H = sample_channel(beta, fading_rng);
    const CMatrix Z = transmit_pilots(r.H, assignment, book, p, sigma2, pilot_noise_rng);
    auto est = mmse_estimate(Z, beta, assignment, book, p, sigma2);
    r.Hhat = std::move(est.Hhat);
    r.alpha = std::move(est.alpha);
    r.C = std::move(est.C);
    r.D = std::move(est.D);
    return r;
}

CVector received_data(const CMatrix& H, const CVector& x, double noise_var, Rng& rng)
{
    require(H.cols() == x.size(), "received_data: x must have K entries");
    return H * x + complex_normal_matrix(rng, H.rows(), 1, noise_var).col(0);
}

} // namespace cfmimo
