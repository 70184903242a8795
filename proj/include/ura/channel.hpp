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

#include <cstddef>
#include <span>
#include <vector>

#include "ura/codebook.hpp"
#include "ura/types.hpp"

namespace ura
{
    inline constexpr double kSpeedOfLight = 3.0e8;

    struct ChannelParams
    {
        // Large-scale fading g[dB] = -alpha_db - 10*beta*log10(r). The sign is applied
        // literally: alpha_db = -15.3 yields +15.3 dB at r = 1 m.
        double alpha_db = -15.3;
        double beta = 3.76;
        double r_in = 5.0;    // m
        double r_out = 1000.0; // m
        double noise_power = 1.2589254117941673e-13; // W, 10^-19.9 * 10 MHz
        std::size_t Mr = 32;
        double delta = 0.0;   // inter-slot decorrelation
        bool pathloss = true; // false: every user has g = 1

        void validate() const;
    };

    /// Users active in one frame. small_scale[l] holds the K_a x Mr coefficients
    /// h~_{k,m} for slot l, row-major (k * Mr + m). Without time variation every
    /// slot carries the same matrix.
    struct UserChannelSet
    {
        std::size_t users = 0;
        std::size_t Mr = 0;
        RVec radii;
        RVec gains;
        std::vector<CVec> small_scale;

        /// Effective channel sqrt(g_k) h~_{k,m} in slot l.
        cplx effective(std::size_t slot, std::size_t k, std::size_t m) const
        {
            return std::sqrt(gains[k]) * small_scale[slot][k * Mr + m];
        }
    };

    /// Received samples of one slot. Y is n0 x Mr, stored antenna-major: Y[m * n0 + t].
    struct SlotObservation
    {
        std::size_t n0 = 0;
        std::size_t Mr = 0;
        CVec Y;

        cplx &at(std::size_t t, std::size_t m) { return Y[m * n0 + t]; }
        const cplx &at(std::size_t t, std::size_t m) const { return Y[m * n0 + t]; }
        std::span<const cplx> antenna(std::size_t m) const { return {Y.data() + m * n0, n0}; }

        /// Real vectorized view [Re vec(Y^T); Im vec(Y^T)], where vec(Y^T) runs over
        /// t-major then antenna (index t * Mr + m).
        RVec real_view() const;
    };

    double radius_cdf(double r, double r_in, double r_out);
    RVec draw_radii(std::size_t count, double r_in, double r_out, Rng &rng);

    /// Linear large-scale gain for distance r (m).
    double large_scale_gain(double r, double alpha_db, double beta);

    /// Clarke-Jakes inter-slot decorrelation delta = 1 - J0(2 pi fc k v / (W c))^2,
    /// v in m/s, fc and W in Hz, k in samples. Clamped to [0, 1].
    double jakes_delta(double velocity, double carrier_hz, double bandwidth_hz, double lag);

    /// AR(1) step: sqrt(1 - delta) H + sqrt(delta) E with E ~ CN(0, 1) entrywise.
    CVec evolve_channel(std::span<const cplx> H, double delta, Rng &rng);

    /// Draws radii, gains and per-slot small-scale fading for `users` active users.
    UserChannelSet draw_users(const ChannelParams &p, std::size_t users, std::size_t slots, Rng &rng);

    /// Y = A X + W for one slot. Row j of X accumulates sqrt(g_k) h~_k over every user
    /// with indices[k] == j; H is K_a x Mr row-major.
    SlotObservation apply_mac(const Codebook &cb, std::span<const Index> indices, std::span<const double> gains,
                              std::span<const cplx> H, std::size_t Mr, double noise_power, Rng &rng);
}
