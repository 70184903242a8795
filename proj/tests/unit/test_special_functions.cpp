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

#include "doctest.h"

#include <cmath>
#include <initializer_list>

#include "ura/special_functions.hpp"

using namespace ura;

namespace
{
    // Mills ratio R(t) = Q(t) / phi(t) in long double; fine while Q(t) is not denormal.
    long double mills_direct(long double t)
    {
        const long double q = 0.5L * std::erfc(t / std::sqrt(2.0L));
        const long double phi = std::exp(-0.5L * t * t) / std::sqrt(2.0L * 3.14159265358979323846264L);
        return q / phi;
    }

    // Asymptotic series for large t, truncated after the t^-10 term.
    double mills_asymptotic(double t)
    {
        const double u = 1.0 / (t * t);
        return (1.0 - u + 3 * u * u - 15 * u * u * u + 105 * u * u * u * u - 945 * u * u * u * u * u) / t;
    }
}

TEST_CASE("gaussian_q reference values")
{
    CHECK(gaussian_q(0.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(gaussian_q(1.959963984540054) == doctest::Approx(0.025).epsilon(1e-12));
    CHECK(gaussian_q(-1.0) == doctest::Approx(1.0 - gaussian_q(1.0)).epsilon(1e-15));
}

TEST_CASE("erfcx matches exp(x^2) erfc(x) and stays finite in the tail")
{
    for (double x : {-3.0, -0.5, 0.0, 0.7, 2.0, 3.4, 3.6, 5.0, 8.0})
    {
        const long double ref = std::exp((long double)x * x) * std::erfc((long double)x);
        CHECK(erfcx(x) == doctest::Approx(double(ref)).epsilon(1e-12));
    }
    // 1/(x sqrt(pi)) (1 - 1/(2x^2) + 3/(4x^4) - 15/(8x^6))
    for (double x : {30.0, 100.0, 1e4})
    {
        const double u = 1.0 / (x * x);
        const double ref = (1.0 - 0.5 * u + 0.75 * u * u - 1.875 * u * u * u) / (x * std::sqrt(M_PI));
        CHECK(erfcx(x) == doctest::Approx(ref).epsilon(1e-10));
    }
}

TEST_CASE("upper_tail against direct and asymptotic Mills ratios")
{
    for (double t : {-6.0, -2.0, -0.3, 0.0, 0.4, 1.0, 2.5, 4.99, 5.01, 7.0, 10.0})
    {
        const long double R = mills_direct(t);
        const long double h = 1.0L / R; // inverse Mills ratio phi/Q
        const auto s = upper_tail(t);
        CAPTURE(t);
        CHECK(s.log_mills == doctest::Approx(double(std::log(R))).epsilon(1e-12));
        CHECK(s.excess == doctest::Approx(double(h - t)).epsilon(1e-10));
        CHECK(s.variance == doctest::Approx(double(1.0L - h * (h - t))).epsilon(1e-8));
    }
    for (double t : {20.0, 40.0, 1e3})
    {
        const auto s = upper_tail(t);
        CAPTURE(t);
        CHECK(s.log_mills == doctest::Approx(std::log(mills_asymptotic(t))).epsilon(1e-10));
        CHECK(s.excess > 0.0);
        CHECK(s.excess == doctest::Approx(1.0 / t).epsilon(5.0 / (t * t)));
        // Var[Z | Z > t] ~ 1/t^2 for large t
        CHECK(s.variance == doctest::Approx(1.0 / (t * t)).epsilon(10.0 / (t * t)));
    }
}

TEST_CASE("upper_tail is continuous across the evaluation switch")
{
    const auto a = upper_tail(5.0 - 1e-12);
    const auto b = upper_tail(5.0 + 1e-12);
    CHECK(a.log_mills == doctest::Approx(b.log_mills).epsilon(1e-12));
    CHECK(a.excess == doctest::Approx(b.excess).epsilon(1e-10));
    CHECK(a.variance == doctest::Approx(b.variance).epsilon(1e-8));
}

TEST_CASE("log_add_exp and logistic at the extremes")
{
    CHECK(log_add_exp(0.0, 0.0) == doctest::Approx(std::log(2.0)));
    CHECK(log_add_exp(1000.0, 0.0) == doctest::Approx(1000.0));
    CHECK(log_add_exp(-INFINITY, 3.0) == 3.0);
    CHECK(logistic(0.0) == 0.5);
    CHECK(logistic(800.0) == 1.0);
    CHECK(logistic(-800.0) >= 0.0);
    CHECK(logistic(-30.0) == doctest::Approx(std::exp(-30.0)).epsilon(1e-12));
}
