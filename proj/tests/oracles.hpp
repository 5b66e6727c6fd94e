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

// Naive reference implementations used as independent oracles. Written with
// plain loops and textbook formulas, sharing no code with the library.

#pragma once

#include "cfmimo/types.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <vector>

namespace oracle {

using cfmimo::CMatrix;
using cfmimo::Complex;
using cfmimo::CVector;
using cfmimo::RMatrix;
using cfmimo::RVector;

inline double pathloss_db(double d) { return -30.5 - 36.7 * std::log10(d); }

// Reflected binary code of `value`, most significant bit first.
inline std::vector<int> reflected_gray(int value, int width)
{
    const int g = value ^ (value >> 1);
    std::vector<int> out(static_cast<std::size_t>(width));
    for (int b = 0; b < width; ++b) out[static_cast<std::size_t>(b)] = (g >> (width - 1 - b)) & 1;
    return out;
}

// Solves A x = b by Gaussian elimination with partial pivoting.
inline CVector solve(CMatrix A, CVector b)
{
    const int n = static_cast<int>(A.rows());
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(A(r, col)) > std::abs(A(piv, col))) piv = r;
        A.row(col).swap(A.row(piv));
        std::swap(b(col), b(piv));
        for (int r = col + 1; r < n; ++r) {
            const Complex f = A(r, col) / A(col, col);
            for (int c = col; c < n; ++c) A(r, c) -= f * A(col, c);
            b(r) -= f * b(col);
        }
    }
    CVector x(n);
    for (int r = n - 1; r >= 0; --r) {
        Complex acc = b(r);
        for (int c = r + 1; c < n; ++c) acc -= A(r, c) * x(c);
        x(r) = acc / A(r, r);
    }
    return x;
}

inline CMatrix inverse(const CMatrix& A)
{
    const auto n = A.rows();
    CMatrix out(n, n);
    for (Eigen::Index c = 0; c < n; ++c) out.col(c) = solve(A, CVector::Unit(n, c));
    return out;
}

// Loop form of Hhat^H R^-1 Hhat and Hhat^H R^-1 y with R = diag(D) + sigma2 I.
inline CMatrix gram(const CMatrix& Hhat, const RVector& D, double sigma2)
{
    const auto L = Hhat.rows();
    const auto K = Hhat.cols();
    CMatrix G = CMatrix::Zero(K, K);
    for (Eigen::Index i = 0; i < K; ++i)
        for (Eigen::Index j = 0; j < K; ++j)
            for (Eigen::Index l = 0; l < L; ++l) G(i, j) += std::conj(Hhat(l, i)) * Hhat(l, j) / (D(l) + sigma2);
    return G;
}

inline CVector matched(const CMatrix& Hhat, const RVector& D, double sigma2, const CVector& y)
{
    CVector b = CVector::Zero(Hhat.cols());
    for (Eigen::Index k = 0; k < Hhat.cols(); ++k)
        for (Eigen::Index l = 0; l < Hhat.rows(); ++l) b(k) += std::conj(Hhat(l, k)) * y(l) / (D(l) + sigma2);
    return b;
}

inline CVector mmse(const CMatrix& Hhat, const RVector& D, double sigma2, const CVector& y)
{
    CMatrix A = gram(Hhat, D, sigma2);
    for (Eigen::Index k = 0; k < A.rows(); ++k) A(k, k) += 1.0;
    return solve(A, matched(Hhat, D, sigma2, y));
}

// Direct exponentials without any stabilization; fine for moderate inputs.
inline void posterior(Complex x_obs, double v_obs, const std::vector<Complex>& points, Complex& mean,
                      double& variance)
{
    double z = 0.0;
    Complex m = 0.0;
    for (const auto& s : points) {
        const double w = std::exp(-std::norm(x_obs - s) / v_obs);
        z += w;
        m += w * s;
    }
    m /= z;
    double v = 0.0;
    for (const auto& s : points) v += std::exp(-std::norm(x_obs - s) / v_obs) / z * std::norm(s - m);
    mean = m;
    variance = v;
}

inline double sinr(const CVector& a, const CMatrix& Hhat, int k, const RVector& D, double p, double sigma2,
                   const std::vector<int>& interferers)
{
    auto dot = [&](int col) {
        Complex acc = 0.0;
        for (Eigen::Index l = 0; l < a.size(); ++l) acc += std::conj(a(l)) * Hhat(l, col);
        return acc;
    };
    const double signal = p * std::norm(dot(k));
    double interference = 0.0;
    for (int i : interferers)
        if (i != k) interference += p * std::norm(dot(i));
    double error = 0.0;
    double norm2 = 0.0;
    for (Eigen::Index l = 0; l < a.size(); ++l) {
        error += p * D(l) * std::norm(a(l));
        norm2 += std::norm(a(l));
    }
    return signal / (interference + error + sigma2 * norm2);
}

// Plain nested enumeration over all candidate index tuples.
inline std::vector<int> ml_indices(const CVector& y, const CMatrix& Hhat, const RVector& D, double sigma2,
                                   const std::vector<Complex>& points)
{
    const int K = static_cast<int>(Hhat.cols());
    const int M = static_cast<int>(points.size());
    long long count = 1;
    for (int k = 0; k < K; ++k) count *= M;
    std::vector<int> best(static_cast<std::size_t>(K), 0);
    double best_metric = std::numeric_limits<double>::infinity();
    for (long long code = 0; code < count; ++code) {
        std::vector<int> idx(static_cast<std::size_t>(K));
        long long rest = code;
        for (int k = 0; k < K; ++k) {
            idx[static_cast<std::size_t>(k)] = static_cast<int>(rest % M);
            rest /= M;
        }
        double metric = 0.0;
        for (Eigen::Index l = 0; l < y.size(); ++l) {
            Complex e = y(l);
            for (int k = 0; k < K; ++k) e -= Hhat(l, k) * points[static_cast<std::size_t>(idx[static_cast<std::size_t>(k)])];
            metric += std::norm(e) / (D(l) + sigma2);
        }
        if (metric < best_metric) {
            best_metric = metric;
            best = idx;
        }
    }
    return best;
}

} // namespace oracle
