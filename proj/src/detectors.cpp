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

#include "cfmimo/detectors.hpp"

#include <cmath>
#include <limits>

namespace cfmimo {

std::string_view name(Detector d)
{
    switch (d) {
    case Detector::MRC: return "mrc";
    case Detector::MMSE: return "mmse";
    case Detector::SIC: return "sic";
    case Detector::EP: return "ep";
    case Detector::ML: return "ml";
    }
    return "?";
}

Detector parse_detector(std::string_view text)
{
    for (auto d : kAllDetectors)
        if (name(d) == text) return d;
    throw ConfigError("unknown detector '" + std::string(text) + "' (expected mrc, mmse, sic, ep, ml)");
}

namespace {

void check_dimensions(const CVector& y, const CMatrix& Hhat, const RVector& D, double sigma2)
{
    require(y.size() == Hhat.rows(), "detector: y and Hhat disagree on L");
    require(D.size() == Hhat.rows(), "detector: D must have L entries");
    require(sigma2 > 0.0, "detector: sigma2 must be positive");
    require((D.array() >= 0.0).all(), "detector: D must be nonnegative");
}

void finish(DetectionResult& r, const Constellation& c) { slice(r.soft, c, r.hard, r.hard_bits); }

// Inverse of a Hermitian positive definite matrix.
CMatrix hpd_inverse(const CMatrix& A)
{
    Eigen::LLT<CMatrix> llt(A);
    require(llt.info() == Eigen::Success, "hpd_inverse: matrix is not positive definite");
    return llt.solve(CMatrix::Identity(A.rows(), A.cols()));
}

bool all_finite(const CVector& v) { return v.array().isFinite().all(); }
bool all_finite(const RVector& v) { return v.array().isFinite().all(); }

} // namespace

ObservationModel make_observation_model(const CVector& y, const CMatrix& Hhat, const RVector& D, double sigma2)
{
    check_dimensions(y, Hhat, D, sigma2);
    ObservationModel m;
    m.r_inv = (D.array() + sigma2).inverse().matrix();
    const CMatrix weighted = m.r_inv.asDiagonal() * Hhat;
    m.gram = Hhat.adjoint() * weighted;
    m.gram = (0.5 * (m.gram + m.gram.adjoint())).eval();
    m.matched = weighted.adjoint() * y;
    return m;
}

DetectionResult detect_mrc(const CVector& y, const CMatrix& Hhat, const Constellation& c)
{
    require(y.size() == Hhat.rows(), "detect_mrc: y and Hhat disagree on L");
    const auto K = Hhat.cols();
    DetectionResult r;
    r.soft.resize(K);
    r.combiner.resize(Hhat.rows(), K);
    for (Eigen::Index k = 0; k < K; ++k) {
        const double energy = Hhat.col(k).squaredNorm();
        if (energy > 0.0) {
            r.combiner.col(k) = Hhat.col(k) / energy;
            r.soft(k) = r.combiner.col(k).dot(y);
        } else {
            r.combiner.col(k).setZero();
            r.soft(k) = 0.0;
        }
    }
    finish(r, c);
    return r;
}

DetectionResult detect_mmse(const CVector& y, const CMatrix& Hhat, const RVector& D, double sigma2,
                            const Constellation& c)
{
    const auto model = make_observation_model(y, Hhat, D, sigma2);
    const auto K = Hhat.cols();
    const CMatrix regularized = model.gram + CMatrix::Identity(K, K);
    Eigen::LLT<CMatrix> llt(regularized);
    require(llt.info() == Eigen::Success, "detect_mmse: regularized Gram matrix is not positive definite");

    DetectionResult r;
    r.soft = llt.solve(model.matched);
    // a_k = R^-1 Hhat A e_k with A = (Hhat^H R^-1 Hhat + I)^-1
    r.combiner = model.r_inv.asDiagonal() * Hhat * llt.solve(CMatrix::Identity(K, K));
    finish(r, c);
    return r;
}

DetectionResult detect_mmse_sic(const CVector& y, const CMatrix& Hhat, const RVector& D, double sigma2,
                                const Constellation& c)
{
    const auto model = make_observation_model(y, Hhat, D, sigma2);
    const auto K = Hhat.cols();
    // inverse of (G + I) restricted to the undetected UEs; detected rows and
    // columns are zeroed by the downdate below
    CMatrix inv = hpd_inverse(model.gram + CMatrix::Identity(K, K));
    CVector residual_matched = model.matched;
    std::vector<bool> done(static_cast<std::size_t>(K), false);

    DetectionResult r;
    r.soft.resize(K);
    r.combiner = CMatrix::Zero(Hhat.rows(), K);
    r.detection_order.reserve(static_cast<std::size_t>(K));

    for (Eigen::Index stage = 0; stage < K; ++stage) {
        // post-filter SINR is 1 / inv(k, k) - 1, so the best UE has the smallest diagonal
        Eigen::Index best = -1;
        double best_diag = std::numeric_limits<double>::infinity();
        for (Eigen::Index k = 0; k < K; ++k) {
            if (done[static_cast<std::size_t>(k)]) continue;
            const double d = inv(k, k).real();
            if (d < best_diag) {
                best_diag = d;
                best = k;
            }
        }
        require(best >= 0 && best_diag > 0.0, "detect_mmse_sic: degenerate filter");

        r.soft(best) = (inv.row(best) * residual_matched).value();
        r.combiner.col(best) = model.r_inv.asDiagonal() * (Hhat * inv.col(best));
        const Complex decided = c.point(c.nearest_index(r.soft(best)));

        residual_matched -= model.gram.col(best) * decided;
        const CVector pivot_col = inv.col(best);
        const CVector pivot_row = inv.row(best).transpose();
        inv -= pivot_col * pivot_row.transpose() / inv(best, best);
        done[static_cast<std::size_t>(best)] = true;
        r.detection_order.push_back(static_cast<int>(best));
    }
    finish(r, c);
    return r;
}

EpState initial_ep_state(Eigen::Index K)
{
    EpState s;
    s.lambda = RVector::Ones(K);
    s.gamma = CVector::Zero(K);
    s.sigma_diag = RVector::Zero(K);
    s.mu = CVector::Zero(K);
    s.x_obs = CVector::Zero(K);
    s.v_obs = RVector::Ones(K);
    s.x_hat = CVector::Zero(K);
    s.v_post = RVector::Ones(K);
    return s;
}

EpState ep_observation_step(EpState s, const ObservationModel& model)
{
    const auto K = model.gram.rows();
    require((s.lambda.array() > 0.0).all(), "ep_observation_step: lambda must be positive");
    CMatrix precision = model.gram;
    precision.diagonal() += s.lambda.cast<Complex>();
    Eigen::LLT<CMatrix> llt(precision);
    require(llt.info() == Eigen::Success, "ep_observation_step: precision is not positive definite");
    const CMatrix sigma = llt.solve(CMatrix::Identity(K, K));

    s.mu = llt.solve(model.matched + s.gamma);
    s.sigma_diag = sigma.diagonal().real();
    s.clamped = 0;
    for (Eigen::Index k = 0; k < K; ++k) {
        double v = s.sigma_diag(k) / (1.0 - s.sigma_diag(k) * s.lambda(k));
        if (!(v > 0.0) || !std::isfinite(v)) {
            v = kVarianceFloor;
            ++s.clamped;
        }
        s.v_obs(k) = v;
        s.x_obs(k) = v * (s.mu(k) / s.sigma_diag(k) - s.gamma(k));
    }
    return s;
}

EpState ep_estimation_step(EpState s, const Constellation& c, double eta)
{
    const auto K = s.x_obs.size();
    require((s.v_obs.array() > 0.0).all(), "ep_estimation_step: v_obs must be positive");
    for (Eigen::Index k = 0; k < K; ++k) {
        const auto moments = posterior_moments(s.x_obs(k), s.v_obs(k), c);
        s.x_hat(k) = moments.mean;
        s.v_post(k) = moments.variance;
        const double v = std::max(moments.variance, kVarianceFloor);
        const double v_obs = std::max(s.v_obs(k), kVarianceFloor);

        const double lambda_candidate = 1.0 / v - 1.0 / v_obs;
        const Complex gamma_candidate = moments.mean / v - s.x_obs(k) / v_obs;
        const double lambda_new = (1.0 - eta) * lambda_candidate + eta * s.lambda(k);
        if (lambda_new > kLambdaMin) {
            s.lambda(k) = lambda_new;
            s.gamma(k) = (1.0 - eta) * gamma_candidate + eta * s.gamma(k);
        }
    }
    return s;
}

DetectionResult detect_ep(const CVector& y, const CMatrix& Hhat, const RVector& D, double sigma2,
                          const Constellation& c, const EpParams& params, const EpObserver& observer)
{
    require(params.T_max >= 1, "detect_ep: T_max must be >= 1");
    const auto model = make_observation_model(y, Hhat, D, sigma2);
    EpState state = initial_ep_state(Hhat.cols());

    for (int t = 1; t <= params.T_max; ++t) {
        state.iteration = t;
        EpState observed = ep_observation_step(std::move(state), model);
        state = ep_estimation_step(observed, c, params.eta);
        if (!all_finite(state.mu) || !all_finite(state.x_hat) || !all_finite(state.lambda) ||
            !all_finite(state.gamma) || !all_finite(state.v_obs))
            throw DetectorAbort("detect_ep: non-finite state at iteration " + std::to_string(t));
        if (observer) observer(observed, state);
        if ((state.mu - state.x_hat).norm() <= params.eps_conv) break;
    }

    DetectionResult r;
    r.soft = state.x_hat;
    r.iterations = state.iteration;
    r.v_obs_final = state.v_obs;
    finish(r, c);
    return r;
}

DetectionResult detect_ml(const CVector& y, const CMatrix& Hhat, const RVector& D, double sigma2,
                          const Constellation& c)
{
    check_dimensions(y, Hhat, D, sigma2);
    const auto K = Hhat.cols();
    const int M = c.order();
    if (std::pow(static_cast<double>(M), static_cast<double>(K)) > kMaxMlCandidates)
        throw ConfigError("detect_ml: M^K exceeds the exhaustive-search limit of 2^20 candidates");

    // whitened model: ||R^-1/2 y - R^-1/2 Hhat x||^2
    const RVector w = (D.array() + sigma2).rsqrt().matrix();
    const CVector yw = w.asDiagonal() * y;
    const CMatrix Hw = w.asDiagonal() * Hhat;

    std::vector<int> index(static_cast<std::size_t>(K), 0);
    std::vector<int> best_index = index;
    double best = std::numeric_limits<double>::infinity();
    CVector x(K);
    while (true) {
        for (Eigen::Index k = 0; k < K; ++k) x(k) = c.point(index[static_cast<std::size_t>(k)]);
        const double metric = (yw - Hw * x).squaredNorm();
        if (metric < best) {
            best = metric;
            best_index = index;
        }
        // odometer increment, least significant UE first
        Eigen::Index k = 0;
        while (k < K && ++index[static_cast<std::size_t>(k)] == M) index[static_cast<std::size_t>(k++)] = 0;
        if (k == K) break;
    }

    DetectionResult r;
    r.soft.resize(K);
    for (Eigen::Index k = 0; k < K; ++k) r.soft(k) = c.point(best_index[static_cast<std::size_t>(k)]);
    finish(r, c);
    return r;
}

} // namespace cfmimo
