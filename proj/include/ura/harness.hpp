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
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "ura/codebook.hpp"
#include "ura/config.hpp"
#include "ura/encoder.hpp"
#include "ura/types.hpp"

namespace ura
{
    /// Failure inside one pipeline stage; `stage` is one of encode, channel, hygamp,
    /// clustering, stitch.
    class StageError : public std::runtime_error
    {
    public:
        StageError(std::string stage, const std::string &what)
            : std::runtime_error(stage + ": " + what), stage_(std::move(stage))
        {
        }
        const std::string &stage() const { return stage_; }

    private:
        std::string stage_;
    };

    struct StageSeconds
    {
        double encode = 0, channel = 0, hygamp = 0, clustering = 0, stitch = 0;
        double total() const { return encode + channel + hygamp + clustering + stitch; }
    };

    struct TrialResult
    {
        std::uint64_t trial_id = 0;
        double pe = 0.0;
        std::size_t missed = 0;           // users whose message is absent from the decoded list
        std::size_t decoded = 0;          // always K_a
        RVec support_recovery;            // per slot, fraction of users whose index was decoded
        std::size_t colliding_pairs = 0;  // summed over slots
        std::vector<char> converged;      // per slot
        std::vector<unsigned> iterations; // per slot
        double clustering_llf = 0.0;
        unsigned gmm_iterations = 0;
        unsigned gmm_reseeds = 0;
        StageSeconds seconds;
    };

    /// Trial-local engine seeded from (master_seed, trial_id).
    Rng trial_rng(std::uint64_t master_seed, std::uint64_t trial_id);

    /// Fraction of transmitted messages absent from `decoded` (set membership; repeated
    /// transmissions count once per user).
    double compute_pe(std::span<const Message> transmitted, std::span<const Message> decoded);

    /// Full encode, channel, decode and stitch pipeline for one trial. `cb` must be
    /// built from cfg.codebook_config().
    TrialResult run_trial(const SimConfig &cfg, const Codebook &cb, std::uint64_t trial_id);
    TrialResult run_trial(const SimConfig &cfg, std::uint64_t trial_id);

    using TrialCallback = std::function<void(const TrialResult &)>;

    /// Runs trials 0..cfg.trials-1 on `threads` workers. Results are ordered by trial id,
    /// so the output does not depend on the worker count.
    std::vector<TrialResult> run_trials(const SimConfig &cfg, unsigned threads, const TrialCallback &on_trial = {});

    struct AggregateRow
    {
        double mu_tot = 0.0; // realized
        std::size_t Mr = 0;
        std::size_t Ka = 0;
        double Pt_dBm = 0.0;
        double delta = 0.0;
        std::size_t trials = 0;
        double pe_mean = 0.0;
        double pe_stderr = 0.0; // binomial, over trials * K_a users
        double runtime_s = 0.0;
    };

    AggregateRow aggregate(const SimConfig &cfg, std::span<const TrialResult> results, double runtime_s);

    /// Grid file: {"base": {config}, "axes": {"key": [values, ...], ...}}. Grid points are
    /// the Cartesian product of the axes applied on top of base.
    std::vector<SimConfig> expand_grid(const nlohmann::json &grid);

    std::vector<AggregateRow> sweep(const std::vector<SimConfig> &points, unsigned threads,
                                    const std::function<void(const SimConfig &, const TrialResult &)> &on_trial = {});

    inline constexpr const char *kCsvHeader = "mu_tot,Mr,Ka,Pt_dBm,delta,trials,pe_mean,pe_stderr,runtime_s";
    void write_csv(std::ostream &os, std::span<const AggregateRow> rows);
    nlohmann::json trial_to_json(const SimConfig &cfg, const TrialResult &r);

    struct CollisionStats
    {
        double empirical_pairs = 0.0; // mean colliding pairs per slot
        double analytic_pairs = 0.0;  // C(K_a, 2) / 2^J
        double union_bound = 0.0;     // 2 L C(K_a, 2) / (K_a 2^J)
        std::size_t samples = 0;
    };

    double collision_union_bound(std::size_t Ka, unsigned J, unsigned L);
    CollisionStats collision_probe(std::size_t Ka, unsigned J, unsigned L, std::size_t n_samples, Rng &rng);
}
