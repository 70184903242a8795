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
#include <functional>
#include <optional>
#include <vector>

#include "ura/channel.hpp"
#include "ura/codebook.hpp"
#include "ura/denoiser.hpp"
#include "ura/types.hpp"

namespace ura
{
    struct HyGampIteration
    {
        unsigned t;
        double residual_norm;  // ||y - A x||, physical units
        double sigma_w2;       // complex noise power, W
        double sigma_x;
        double max_activity;
    };

    struct HyGampConfig
    {
        double lambda = 0.01;
        double sigma_x = 0.0;   // <= 0 with learn_sigma_x: method-of-moments start
        double sigma_w2 = 1.0;  // complex noise power in W; each real measurement sees half
        double xi = 1e-6;
        unsigned T_max = 100;
        double damping = 0.7;
        bool learn_sigma_x = true;
        bool learn_sigma_w = true;
        unsigned em_inner_iters = 1;
        unsigned em_warmup = 5;
        bool uniform_variance = false;
        double variance_floor = kDefaultVarianceFloor;
        // EM clamp for sigma_x, relative to its starting value
        double sigma_x_range = 1e4;

        std::function<void(const HyGampIteration &)> trace;

        void validate() const;
    };

    /// All per-iteration quantities of one slot, in the solver's working units.
    ///
    /// Components are indexed q * N + j with q in [0, 2Mr): q < Mr is Re h_q, q >= Mr
    /// is Im h_{q-Mr}. Measurements are indexed (part * Mr + m) * n0 + t with part 0
    /// for Re y and part 1 for Im y.
    struct GampState
    {
        std::size_t N = 0;
        std::size_t Mr = 0;
        std::size_t n0 = 0;

        RVec x, mu_x, r, mu_r, rho, llr_out, llr_in;
        RVec z, mu_p, p, z0, mu_z, s, mu_s;

        double sigma_x = 0.0;
        double sigma_w2 = 0.0; // per real measurement
        unsigned t = 0;

        std::size_t components() const { return 2 * Mr * N; }
        std::size_t measurements() const { return 2 * Mr * n0; }
    };

    /// sigma_x EM step over a whole state, evaluated at the state's r, mu_r and rho.
    SigmaUpdate em_sigma_x_step(const GampState &state, double sigma_x, double lo, double hi);

    struct SlotEstimate
    {
        RVec activity_posterior;
        std::vector<Index> decoded_indices;
        std::vector<RVec> channel_estimates; // [Re h; Im h], length 2 Mr each
        bool converged = false;
        unsigned iterations = 0;
        double sigma_x = 0.0;
        double sigma_w2 = 0.0;
    };

    /// Sum-product HyGAMP on one slot with the Kronecker structure factorized per antenna:
    /// measurement (t, m) only touches the components of antenna m, so every product
    /// with A or |A|^2 is Mr length-N circulant products.
    ///
    /// `operator_scale` multiplies every codebook entry; run_hygamp uses it to work in
    /// normalized units. The trace reports sigma_w2 as a complex noise power.
    class HyGampSolver
    {
    public:
        HyGampSolver(const Codebook &cb, const SlotObservation &obs, const HyGampConfig &cfg,
                     double operator_scale = 1.0);

        /// One pass of the loop body. Returns true when the stopping rule fires.
        bool step();
        /// Iterates until the stopping rule or T_max.
        void run();

        bool converged() const { return converged_; }
        const GampState &state() const { return st_; }
        const RVec &y() const { return y_; }

        /// Sum over q of LLR_{q->j} for every group j.
        RVec llr_sums() const;
        double residual_norm() const;
        double lambda() const { return cfg_.lambda; }

        /// Dense helpers used by the state updates; exposed for testing.
        void forward(const RVec &x, RVec &z) const;
        void forward_variance(const RVec &v, RVec &out) const;
        void adjoint(const RVec &s, RVec &out) const;
        void adjoint_variance(const RVec &v, RVec &out) const;

    private:
        void init_sigma_x();
        void update_llrs();

        const Codebook &cb_;
        HyGampConfig cfg_;
        double c_;
        RVec y_;
        GampState st_;
        double sigma_lo_ = 0.0, sigma_hi_ = 0.0;
        double logit_lambda_;
        bool converged_ = false;
        std::vector<HalfLinePair> pairs_;
        mutable CVec work_a_, work_b_, work_c_;
    };

    /// Runs HyGAMP on one slot and decodes the K_a most likely groups. Internally the
    /// observation is scaled to unit energy per real entry and the codebook to unit
    /// entry variance; the estimates are returned in physical units.
    SlotEstimate run_hygamp(const SlotObservation &obs, const Codebook &cb, const HyGampConfig &cfg,
                            std::size_t Ka);

    /// Top-K groups by score, ties broken by lower index.
    std::vector<Index> top_k(const RVec &score, std::size_t k);
}
