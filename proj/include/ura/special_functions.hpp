// SPDX-License-Identifier: Apache-2.0
//
// urasim: uncoupled compressive-sensing unsourced random access simulator
// Copyright (C) 2026 The urasim authors
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

#include <cmath>
#include <numbers>

namespace ura
{
    inline constexpr double kSqrt2Pi = 2.5066282746310005024;
    inline constexpr double kLogSqrt2Pi = 0.91893853320467274178;

    /// Standard normal upper tail Q(x) = P(Z > x).
    inline double gaussian_q(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

    /// Scaled complementary error function exp(x^2) * erfc(x). Finite for every finite x
    /// with x > -26.5; large positive arguments use a continued fraction.
    double erfcx(double x);

    /// Summary of Z ~ N(0,1) conditioned on Z > t.
    ///
    /// log_mills is log(R(t)) with R(t) = Q(t) * exp(t^2/2) * sqrt(2 pi), the Mills
    /// ratio. It stays finite for any finite t, so products such as Q(t)*exp(t^2/2)
    /// never need to be formed explicitly.
    struct TailStats
    {
        double log_mills;
        double excess;   // E[Z | Z > t] - t, always > 0
        double variance; // Var[Z | Z > t], in (0, 1]
    };

    TailStats upper_tail(double t);

    /// log(exp(a) + exp(b)) without overflow.
    inline double log_add_exp(double a, double b)
    {
        if (a < b)
            std::swap(a, b);
        if (b == -INFINITY)
            return a;
        return a + std::log1p(std::exp(b - a));
    }

    /// 1 / (1 + exp(-x)), stable at both ends.
    inline double logistic(double x)
    {
        if (x >= 0.0)
            return 1.0 / (1.0 + std::exp(-x));
        const double e = std::exp(x);
        return e / (1.0 + e);
    }
}
