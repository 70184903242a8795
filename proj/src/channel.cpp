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

#include "ura/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ura
{
    void ChannelParams::validate() const
    {
        if (!(r_in > 0.0) || !(r_out > r_in))
            throw std::invalid_argument("ChannelParams: radii must satisfy 0 < r_in < r_out");
        if (!(noise_power > 0.0))
            throw std::invalid_argument("ChannelParams: noise power must be positive");
        if (Mr == 0)
            throw std::invalid_argument("ChannelParams: at least one receive antenna is required");
        if (!(delta >= 0.0 && delta <= 1.0))
            throw std::invalid_argument("ChannelParams: delta must lie in [0, 1]");
    }

    RVec SlotObservation::real_view() const
    {
        const std::size_t half = n0 * Mr;
        RVec out(2 * half);
        for (std::size_t t = 0; t < n0; ++t)
            for (std::size_t m = 0; m < Mr; ++m)
            {
                out[t * Mr + m] = at(t, m).real();
                out[half + t * Mr + m] = at(t, m).imag();
            }
        return out;
    }

    double radius_cdf(double r, double r_in, double r_out)
    {
        if (r <= r_in)
            return 0.0;
        if (r >= r_out)
            return 1.0;
        return (r * r - r_in * r_in) / (r_out * r_out - r_in * r_in);
    }

    RVec draw_radii(std::size_t count, double r_in, double r_out, Rng &rng)
    {
        std::uniform_real_distribution<double> u(0.0, 1.0);
        const double a = r_in * r_in;
        const double span = r_out * r_out - a;
        RVec r(count);
        for (auto &x : r)
            x = std::sqrt(a + u(rng) * span);
        return r;
    }

    double large_scale_gain(double r, double alpha_db, double beta)
    {
        if (!(r > 0.0))
            throw std::invalid_argument("large_scale_gain: distance must be positive");
        const double g_db = -alpha_db - 10.0 * beta * std::log10(r);
        return std::pow(10.0, g_db / 10.0);
    }

    double jakes_delta(double velocity, double carrier_hz, double bandwidth_hz, double lag)
    {
        const double arg = 2.0 * std::numbers::pi * carrier_hz * lag * velocity / (bandwidth_hz * kSpeedOfLight);
        const double j0 = std::cyl_bessel_j(0.0, arg);
        return std::clamp(1.0 - j0 * j0, 0.0, 1.0);
    }

    CVec evolve_channel(std::span<const cplx> H, double delta, Rng &rng)
    {
        if (!(delta >= 0.0 && delta <= 1.0))
            throw std::invalid_argument("evolve_channel: delta must lie in [0, 1]");
        CVec out(H.begin(), H.end());
        if (delta == 0.0)
            return out;
        const double keep = std::sqrt(1.0 - delta);
        const double fresh = std::sqrt(delta);
        for (auto &h : out)
            h = keep * h + fresh * complex_normal(rng);
        return out;
    }

    UserChannelSet draw_users(const ChannelParams &p, std::size_t users, std::size_t slots, Rng &rng)
    {
        p.validate();
        UserChannelSet set;
        set.users = users;
        set.Mr = p.Mr;
        set.radii = draw_radii(users, p.r_in, p.r_out, rng);
        set.gains.resize(users);
        for (std::size_t k = 0; k < users; ++k)
            set.gains[k] = p.pathloss ? large_scale_gain(set.radii[k], p.alpha_db, p.beta) : 1.0;

        CVec H(users * p.Mr);
        for (auto &h : H)
            h = complex_normal(rng);
        set.small_scale.reserve(slots);
        set.small_scale.push_back(std::move(H));
        for (std::size_t l = 1; l < slots; ++l)
            set.small_scale.push_back(evolve_channel(set.small_scale.back(), p.delta, rng));
        return set;
    }

    SlotObservation apply_mac(const Codebook &cb, std::span<const Index> indices, std::span<const double> gains,
                              std::span<const cplx> H, std::size_t Mr, double noise_power, Rng &rng)
    {
        const std::size_t users = indices.size();
        if (gains.size() != users || H.size() != users * Mr)
            throw std::invalid_argument("apply_mac: indices, gains and channel matrix disagree on user count");
        if (noise_power < 0.0)
            throw std::invalid_argument("apply_mac: noise power must be nonnegative");

        SlotObservation obs;
        obs.n0 = cb.n0();
        obs.Mr = Mr;
        obs.Y.assign(obs.n0 * Mr, cplx{});

        for (std::size_t k = 0; k < users; ++k)
        {
            const CVec col = cb.column(indices[k]);
            const double amp = std::sqrt(gains[k]);
            for (std::size_t m = 0; m < Mr; ++m)
            {
                const cplx h = amp * H[k * Mr + m];
                cplx *y = obs.Y.data() + m * obs.n0;
                for (std::size_t t = 0; t < obs.n0; ++t)
                    y[t] += col[t] * h;
            }
        }

        if (noise_power > 0.0)
            for (auto &y : obs.Y)
                y += complex_normal(rng, noise_power);
        return obs;
    }
}
