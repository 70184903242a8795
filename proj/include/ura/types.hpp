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
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

namespace ura
{
    using cplx = std::complex<double>;
    using CVec = std::vector<cplx>;
    using RVec = std::vector<double>;
    using Index = std::uint32_t;

    // Every Monte-Carlo stream in the project draws from this engine.
    using Rng = std::mt19937_64;

    /// Draws one circularly-symmetric complex Gaussian sample with E|z|^2 = variance.
    inline cplx complex_normal(Rng &rng, double variance = 1.0)
    {
        std::normal_distribution<double> n(0.0, std::sqrt(0.5 * variance));
        const double re = n(rng);
        const double im = n(rng);
        return {re, im};
    }
}
