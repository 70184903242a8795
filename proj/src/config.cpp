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

#include "ura/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

namespace ura
{
    using nlohmann::json;

    double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

    void SimConfig::validate() const
    {
        if (L == 0 || B == 0)
            throw ConfigError("config: B and L must be positive");
        if (B % L != 0)
            throw ConfigError("config: L must divide B (B = " + std::to_string(B) + ", L = " + std::to_string(L) + ")");
        if (J() > 32)
            throw ConfigError("config: more than 32 bits per slot");
        if (Ka == 0)
            throw ConfigError("config: Ka must be positive");
        if (Mr == 0)
            throw ConfigError("config: Mr must be positive");
        if (!n0 && !mu_tot)
            throw ConfigError("config: one of mu_tot or n0 is required");
        if (!n0 && !(*mu_tot > 0.0))
            throw ConfigError("config: mu_tot must be positive");
        const std::size_t n = blocklength_per_slot();
        if (n == 0)
            throw ConfigError("config: mu_tot too large, n0 rounds to zero");
        if (J() < 63 && n > (std::size_t{1} << J()))
            throw ConfigError("config: n0 = " + std::to_string(n) + " exceeds 2^J");
        if (std::size_t{1} << J() < Ka)
            throw ConfigError("config: Ka exceeds the number of codewords");
        if (!(bandwidth_hz > 0.0))
            throw ConfigError("config: bandwidth must be positive");
        if (noise_power_w && !(*noise_power_w > 0.0))
            throw ConfigError("config: noise_power_w must be positive");
        if (!(delta >= 0.0 && delta <= 1.0))
            throw ConfigError("config: delta must lie in [0, 1]");
        if (velocity_kmh && !(*velocity_kmh >= 0.0))
            throw ConfigError("config: velocity must be nonnegative");
        if (trials == 0)
            throw ConfigError("config: trials must be positive");
        try
        {
            channel_params().validate();
            hygamp_config().validate();
            clustering.gmm.validate();
        }
        catch (const std::invalid_argument &e)
        {
            throw ConfigError(std::string("config: ") + e.what());
        }
    }

    std::size_t SimConfig::blocklength_per_slot() const
    {
        if (n0)
            return *n0;
        // per-slot share of n = B Ka / mu_tot, rounded down
        const double n = double(B) * double(Ka) / *mu_tot;
        return static_cast<std::size_t>(std::floor(n / double(L) + 1e-9));
    }

    double SimConfig::realized_mu_tot() const
    {
        return double(B) * double(Ka) / (double(blocklength_per_slot()) * double(L));
    }

    double SimConfig::pt_watts() const { return dbm_to_watts(Pt_dBm); }

    double SimConfig::noise_power() const
    {
        if (snr_db)
            return pt_watts() / std::pow(10.0, *snr_db / 10.0);
        if (noise_power_w)
            return *noise_power_w;
        return std::pow(10.0, -19.9) * bandwidth_hz;
    }

    double SimConfig::resolved_delta() const
    {
        if (velocity_kmh)
            return jakes_delta(*velocity_kmh / 3.6, carrier_hz, bandwidth_hz, double(blocklength_per_slot()));
        return delta;
    }

    double SimConfig::lambda() const { return double(Ka) / std::ldexp(1.0, int(J())); }

    CodebookConfig SimConfig::codebook_config() const
    {
        CodebookConfig c;
        c.J = J();
        c.n0 = blocklength_per_slot();
        c.transmit_power = pt_watts();
        c.seed = codebook_seed;
        return c;
    }

    ChannelParams SimConfig::channel_params() const
    {
        ChannelParams p;
        p.alpha_db = alpha_db;
        p.beta = beta;
        p.r_in = r_in;
        p.r_out = r_out;
        p.noise_power = noise_power();
        p.Mr = Mr;
        p.delta = resolved_delta();
        p.pathloss = pathloss;
        return p;
    }

    HyGampConfig SimConfig::hygamp_config() const
    {
        HyGampConfig h;
        h.lambda = lambda();
        h.sigma_x = hygamp.sigma_x;
        h.sigma_w2 = noise_power();
        h.xi = hygamp.xi;
        h.T_max = hygamp.T_max;
        h.damping = hygamp.damping;
        h.learn_sigma_x = hygamp.learn_sigma_x;
        h.learn_sigma_w = hygamp.learn_sigma_w;
        h.em_inner_iters = hygamp.em_inner_iters;
        h.em_warmup = hygamp.em_warmup;
        h.uniform_variance = hygamp.uniform_variance;
        h.variance_floor = hygamp.variance_floor;
        return h;
    }

    namespace
    {
        void reject_unknown(const json &j, const std::set<std::string> &known, const std::string &where)
        {
            for (auto it = j.begin(); it != j.end(); ++it)
                if (!known.count(it.key()))
                    throw ConfigError("config: unknown key '" + it.key() + "' in " + where);
        }

        template <typename T>
        void read(const json &j, const char *key, T &out)
        {
            if (!j.contains(key))
                return;
            try
            {
                out = j.at(key).get<T>();
            }
            catch (const json::exception &e)
            {
                throw ConfigError(std::string("config: bad value for '") + key + "': " + e.what());
            }
        }

        template <typename T>
        void read(const json &j, const char *key, std::optional<T> &out)
        {
            if (!j.contains(key))
                return;
            if (j.at(key).is_null())
            {
                out.reset();
                return;
            }
            T v{};
            read(j, key, v);
            out = v;
        }
    }

    SimConfig config_from_json(const json &j)
    {
        if (!j.is_object())
            throw ConfigError("config: top level must be an object");
        reject_unknown(j,
                       {"B", "L", "K", "Ka", "Mr", "mu_tot", "n0", "Pt_dBm", "bandwidth_hz", "noise_power_w", "snr_db",
                        "pathloss", "alpha_db", "beta", "r_in", "r_out", "delta", "velocity_kmh", "carrier_hz",
                        "hygamp", "clustering", "trials", "master_seed", "codebook_seed"},
                       "top level");
        SimConfig c;
        read(j, "B", c.B);
        read(j, "L", c.L);
        read(j, "K", c.K);
        read(j, "Ka", c.Ka);
        read(j, "Mr", c.Mr);
        read(j, "mu_tot", c.mu_tot);
        read(j, "n0", c.n0);
        read(j, "Pt_dBm", c.Pt_dBm);
        read(j, "bandwidth_hz", c.bandwidth_hz);
        read(j, "noise_power_w", c.noise_power_w);
        read(j, "snr_db", c.snr_db);
        read(j, "pathloss", c.pathloss);
        read(j, "alpha_db", c.alpha_db);
        read(j, "beta", c.beta);
        read(j, "r_in", c.r_in);
        read(j, "r_out", c.r_out);
        read(j, "delta", c.delta);
        read(j, "velocity_kmh", c.velocity_kmh);
        read(j, "carrier_hz", c.carrier_hz);
        read(j, "trials", c.trials);
        read(j, "master_seed", c.master_seed);
        read(j, "codebook_seed", c.codebook_seed);

        if (j.contains("hygamp"))
        {
            const json &h = j.at("hygamp");
            reject_unknown(h,
                           {"sigma_x", "xi", "T_max", "damping", "learn_sigma_x", "learn_sigma_w", "em_inner_iters",
                            "em_warmup", "uniform_variance", "variance_floor"},
                           "hygamp");
            read(h, "sigma_x", c.hygamp.sigma_x);
            read(h, "xi", c.hygamp.xi);
            read(h, "T_max", c.hygamp.T_max);
            read(h, "damping", c.hygamp.damping);
            read(h, "learn_sigma_x", c.hygamp.learn_sigma_x);
            read(h, "learn_sigma_w", c.hygamp.learn_sigma_w);
            read(h, "em_inner_iters", c.hygamp.em_inner_iters);
            read(h, "em_warmup", c.hygamp.em_warmup);
            read(h, "uniform_variance", c.hygamp.uniform_variance);
            read(h, "variance_floor", c.hygamp.variance_floor);
        }
        if (j.contains("clustering"))
        {
            const json &g = j.at("clustering");
            reject_unknown(g, {"tol", "max_iters", "diagonal", "cov_floor_rel", "p_floor"}, "clustering");
            read(g, "tol", c.clustering.gmm.tol);
            read(g, "max_iters", c.clustering.gmm.max_iters);
            read(g, "diagonal", c.clustering.gmm.diagonal);
            read(g, "cov_floor_rel", c.clustering.gmm.cov_floor_rel);
            read(g, "p_floor", c.clustering.p_floor);
        }
        c.validate();
        return c;
    }

    json config_to_json(const SimConfig &c)
    {
        json j;
        j["B"] = c.B;
        j["L"] = c.L;
        j["K"] = c.K;
        j["Ka"] = c.Ka;
        j["Mr"] = c.Mr;
        j["mu_tot"] = c.mu_tot ? json(*c.mu_tot) : json(nullptr);
        j["n0"] = c.n0 ? json(*c.n0) : json(nullptr);
        j["Pt_dBm"] = c.Pt_dBm;
        j["bandwidth_hz"] = c.bandwidth_hz;
        j["noise_power_w"] = c.noise_power_w ? json(*c.noise_power_w) : json(nullptr);
        j["snr_db"] = c.snr_db ? json(*c.snr_db) : json(nullptr);
        j["pathloss"] = c.pathloss;
        j["alpha_db"] = c.alpha_db;
        j["beta"] = c.beta;
        j["r_in"] = c.r_in;
        j["r_out"] = c.r_out;
        j["delta"] = c.delta;
        j["velocity_kmh"] = c.velocity_kmh ? json(*c.velocity_kmh) : json(nullptr);
        j["carrier_hz"] = c.carrier_hz;
        j["hygamp"] = {{"sigma_x", c.hygamp.sigma_x},
                       {"xi", c.hygamp.xi},
                       {"T_max", c.hygamp.T_max},
                       {"damping", c.hygamp.damping},
                       {"learn_sigma_x", c.hygamp.learn_sigma_x},
                       {"learn_sigma_w", c.hygamp.learn_sigma_w},
                       {"em_inner_iters", c.hygamp.em_inner_iters},
                       {"em_warmup", c.hygamp.em_warmup},
                       {"uniform_variance", c.hygamp.uniform_variance},
                       {"variance_floor", c.hygamp.variance_floor}};
        j["clustering"] = {{"tol", c.clustering.gmm.tol},
                           {"max_iters", c.clustering.gmm.max_iters},
                           {"diagonal", c.clustering.gmm.diagonal},
                           {"cov_floor_rel", c.clustering.gmm.cov_floor_rel},
                           {"p_floor", c.clustering.p_floor}};
        j["trials"] = c.trials;
        j["master_seed"] = c.master_seed;
        j["codebook_seed"] = c.codebook_seed;
        return j;
    }

    json load_json(const std::string &path)
    {
        std::ifstream in(path);
        if (!in)
            throw ConfigError("config: cannot open " + path);
        try
        {
            return json::parse(in);
        }
        catch (const json::parse_error &e)
        {
            throw ConfigError("config: " + path + ": " + e.what());
        }
    }

    SimConfig load_config(const std::string &path) { return config_from_json(load_json(path)); }
}
