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

#include "ura/special_functions.hpp"

namespace ura
{
    namespace
    {
        // Above this threshold the direct exp(t^2/2)*erfc form loses digits in
        // excess/variance; the continued fraction converges in < 32 terms there.
        constexpr double kTailSwitch = 5.0;
        constexpr int kTailTerms = 32;

        struct FractionTails
        {
            double t0, t1, t2, t3;
        };

        // Backward evaluation of R(t) = 1/(t + 1/(t + 2/(t + 3/(t + ...)))).
        // T_k = t + (k+1)/T_{k+1}, R = 1/T_0.
        FractionTails mills_fraction(double t)
        {
            double tk = t;
            FractionTails f{t, t, t, t};
            for (int k = kTailTerms - 1; k >= 0; --k)
            {
                tk = t + (k + 1) / tk;
                if (k == 3)
                    f.t3 = tk;
                else if (k == 2)
                    f.t2 = tk;
                else if (k == 1)
                    f.t1 = tk;
                else if (k == 0)
                    f.t0 = tk;
            }
            return f;
        }
    }

    double erfcx(double x)
    {
        if (x * std::numbers::sqrt2 > kTailSwitch)
        {
            // R(t) = sqrt(pi/2) erfcx(t/sqrt2)
            const auto f = mills_fraction(x * std::numbers::sqrt2);
            return std::sqrt(2.0 / std::numbers::pi) / f.t0;
        }
        return std::exp(x * x) * std::erfc(x);
    }

    TailStats upper_tail(double t)
    {
        TailStats s{};
        if (t > kTailSwitch)
        {
            const auto f = mills_fraction(t);
            s.log_mills = -std::log(f.t0);
            s.excess = 1.0 / f.t1;
            s.variance = (t + 4.0 / f.t2 - 3.0 / f.t3) / (f.t1 * f.t1 * f.t2);
            return s;
        }

        if (t >= 0.0)
            s.log_mills = 0.5 * t * t + std::log(std::erfc(t / std::numbers::sqrt2)) + kLogSqrt2Pi - std::numbers::ln2;
        else
            s.log_mills = 0.5 * t * t + kLogSqrt2Pi + std::log1p(-gaussian_q(-t));

        const double hazard = std::exp(-s.log_mills);
        s.excess = hazard - t;
        s.variance = 1.0 - hazard * s.excess;
        return s;
    }
}
