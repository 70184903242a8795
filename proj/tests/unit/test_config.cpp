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
#include <cstdio>
#include <fstream>

#include "ura/config.hpp"

using namespace ura;
using nlohmann::json;

TEST_CASE("dBm conversion")
{
    CHECK(dbm_to_watts(30.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(dbm_to_watts(0.0) == doctest::Approx(1e-3).epsilon(1e-15));
    CHECK(dbm_to_watts(15.0) == doctest::Approx(std::pow(10.0, -1.5)).epsilon(1e-15));
}

TEST_CASE("defaults")
{
    const SimConfig c = config_from_json(json::object());
    CHECK(c.J() == 17);
    CHECK(c.lambda() == doctest::Approx(150.0 / 131072.0));
    CHECK(c.noise_power() == doctest::Approx(std::pow(10.0, -19.9) * 1e7).epsilon(1e-14));
    // B Ka / mu_tot = 2781.8 channel uses, 463 per slot
    CHECK(c.blocklength_per_slot() == 463);
    CHECK(c.realized_mu_tot() == doctest::Approx(102.0 * 150.0 / (463.0 * 6.0)));
    CHECK(c.resolved_delta() == 0.0);
}

TEST_CASE("blocklength rounding")
{
    SimConfig c;
    c.B = 48;
    c.L = 4;
    c.Ka = 40;
    c.mu_tot = 3.0; // 640 channel uses, exactly 160 per slot
    CHECK(c.blocklength_per_slot() == 160);
    CHECK(c.realized_mu_tot() == doctest::Approx(3.0));
    c.mu_tot = 7.0; // 274.28 channel uses
    CHECK(c.blocklength_per_slot() == 68);
    CHECK(c.realized_mu_tot() > 7.0);
    c.n0 = 100;
    CHECK(c.blocklength_per_slot() == 100);
}

TEST_CASE("noise and mobility overrides")
{
    json j{{"B", 30}, {"L", 3}, {"Ka", 5}, {"Mr", 2}, {"n0", 64}, {"snr_db", 20.0}, {"Pt_dBm", 30.0}};
    SimConfig c = config_from_json(j);
    CHECK(c.noise_power() == doctest::Approx(0.01));
    j["velocity_kmh"] = 120.0;
    c = config_from_json(j);
    CHECK(c.resolved_delta() == jakes_delta(120.0 / 3.6, 2e9, 1e7, 64.0));
    CHECK(c.channel_params().delta == c.resolved_delta());
}

TEST_CASE("rejects malformed configurations")
{
    CHECK_THROWS_AS(config_from_json(json{{"Ka", 0}}), ConfigError);
    CHECK_THROWS_AS(config_from_json(json{{"Kaa", 3}}), ConfigError);
    CHECK_THROWS_AS(config_from_json(json{{"hygamp", {{"damp", 0.5}}}}), ConfigError);
    CHECK_THROWS_AS(config_from_json(json{{"B", 100}, {"L", 3}}), ConfigError);
    CHECK_THROWS_AS(config_from_json(json{{"delta", 1.5}}), ConfigError);
    CHECK_THROWS_AS(config_from_json(json{{"Mr", "eight"}}), ConfigError);
    CHECK_THROWS_AS(config_from_json(json{{"mu_tot", -1.0}}), ConfigError);
    CHECK_THROWS_AS(config_from_json(json{{"hygamp", {{"damping", 0.0}}}}), ConfigError);
    CHECK_THROWS_AS(config_from_json(json::array()), ConfigError);
    CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("JSON round trip")
{
    json j{{"B", 48}, {"L", 4}, {"Ka", 40}, {"Mr", 8}, {"mu_tot", 4.5}, {"delta", 0.003},
           {"hygamp", {{"xi", 1e-5}, {"uniform_variance", true}}}, {"clustering", {{"diagonal", true}}}};
    const SimConfig a = config_from_json(j);
    const SimConfig b = config_from_json(config_to_json(a));
    CHECK(config_to_json(a) == config_to_json(b));
    CHECK(b.hygamp.xi == 1e-5);
    CHECK(b.hygamp.uniform_variance);
    CHECK(b.clustering.gmm.diagonal);
    CHECK(b.delta == 0.003);

    const std::string path = "test_config_roundtrip.json";
    {
        std::ofstream os(path);
        os << config_to_json(a).dump(2);
    }
    CHECK(config_to_json(load_config(path)) == config_to_json(a));
    std::remove(path.c_str());
}

TEST_CASE("derived component configurations")
{
    const SimConfig c = config_from_json(json{{"B", 48}, {"L", 4}, {"Ka", 40}, {"Mr", 8}, {"mu_tot", 3.0}});
    const auto cb = c.codebook_config();
    CHECK(cb.J == 12);
    CHECK(cb.n0 == 160);
    CHECK(cb.transmit_power == doctest::Approx(dbm_to_watts(15.0)));
    const auto h = c.hygamp_config();
    CHECK(h.lambda == doctest::Approx(40.0 / 4096.0));
    CHECK(h.sigma_w2 == c.noise_power());
    CHECK(c.channel_params().Mr == 8);
}
