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
#include <optional>
#include <stdexcept>
#include <string>

#include "json.hpp"

#include "ura/channel.hpp"
#include "ura/codebook.hpp"
#include "ura/gmm.hpp"
#include "ura/hygamp.hpp"

namespace ura
{
    /// Thrown for malformed or inconsistent configuration; the CLI maps it to exit code 2.
    class ConfigError : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    struct HyGampOptions
    {
        double sigma_x = 0.0; // 0: method-of-moments start
        double xi = 1e-6;
        unsigned T_max = 100;
        double damping = 0.7;
        bool learn_sigma_x = true;
        bool learn_sigma_w = true;
        unsigned em_inner_iters = 1;
        unsigned em_warmup = 5;
        bool uniform_variance = false;
        double variance_floor = kDefaultVarianceFloor;
    };

    struct ClusteringOptions
    {
        GmmConfig gmm;
        double p_floor = 1e-300;
    };

    struct SimConfig
    {
        unsigned B = 102;
        unsigned L = 6;
        std::size_t K = 0; // total population, bookkeeping only
        std::size_t Ka = 150;
        std::size_t Mr = 32;
        std::optional<double> mu_tot = 5.5;
        std::optional<std::size_t> n0;   // overrides mu_tot when set

        double Pt_dBm = 15.0;
        double bandwidth_hz = 10e6;
        std::optional<double> noise_power_w; // default 10^-19.9 W/Hz times the bandwidth
        std::optional<double> snr_db;        // Pt / noise power; overrides noise_power_w

        bool pathloss = true;
        double alpha_db = -15.3;
        double beta = 3.76;
        double r_in = 5.0;
        double r_out = 1000.0;

        double delta = 0.0;
        std::optional<double> velocity_kmh; // overrides delta through the Jakes model
        double carrier_hz = 2e9;

        HyGampOptions hygamp;
        ClusteringOptions clustering;

        std::size_t trials = 10;
        std::uint64_t master_seed = 1;
        std::uint64_t codebook_seed = 7;

        void validate() const;

        unsigned J() const { return B / L; }
        std::size_t blocklength_per_slot() const;
        double realized_mu_tot() const;
        double pt_watts() const;
        double noise_power() const;
        double resolved_delta() const;
        double lambda() const;

        CodebookConfig codebook_config() const;
        ChannelParams channel_params() const;
        HyGampConfig hygamp_config() const;
    };

    double dbm_to_watts(double dbm);

    SimConfig config_from_json(const nlohmann::json &j);
    nlohmann::json config_to_json(const SimConfig &cfg);
    SimConfig load_config(const std::string &path);
    nlohmann::json load_json(const std::string &path);
}
