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
#include <sstream>

#include "ura/harness.hpp"

using namespace ura;
using nlohmann::json;

namespace
{
    Message msg(std::initializer_list<int> bits)
    {
        Message m;
        for (int b : bits)
            m.bits.push_back(std::uint8_t(b));
        return m;
    }

    SimConfig small_config()
    {
        return config_from_json(json{{"B", 24}, {"L", 3}, {"Ka", 5}, {"Mr", 4}, {"n0", 96}, {"snr_db", 30.0},
                                     {"pathloss", false}, {"trials", 4}, {"master_seed", 5}});
    }
}

TEST_CASE("per-user error probability")
{
    const std::vector<Message> tx{msg({0, 1}), msg({1, 1}), msg({1, 0}), msg({0, 0})};
    CHECK(compute_pe(tx, tx) == 0.0);
    const std::vector<Message> dec{msg({1, 1}), msg({0, 0}), msg({0, 0}), msg({1, 1})};
    CHECK(compute_pe(tx, dec) == 0.5);
    CHECK(compute_pe(tx, std::vector<Message>{}) == 1.0);
    // a repeated message counts once per user that sent it
    const std::vector<Message> dup{msg({0, 1}), msg({0, 1})};
    CHECK(compute_pe(dup, std::vector<Message>{msg({0, 1})}) == 0.0);
    CHECK(compute_pe(std::vector<Message>{}, dec) == 0.0);
}

TEST_CASE("trial RNG streams are distinct and reproducible")
{
    Rng a = trial_rng(1, 0), b = trial_rng(1, 0), c = trial_rng(1, 1), d = trial_rng(2, 0);
    const auto x = a();
    CHECK(x == b());
    CHECK(x != c());
    CHECK(x != d());
    CHECK(trial_rng(1ull << 32, 0)() != trial_rng(1, 0)());
}

TEST_CASE("trials are deterministic and independent of the worker count")
{
    const SimConfig cfg = small_config();
    const auto one = run_trials(cfg, 1);
    const auto two = run_trials(cfg, 2);
    const auto again = run_trials(cfg, 1);
    REQUIRE(one.size() == 4);
    for (std::size_t i = 0; i < one.size(); ++i)
    {
        CHECK(one[i].trial_id == i);
        CHECK(one[i].pe == two[i].pe);
        CHECK(one[i].pe == again[i].pe);
        CHECK(one[i].clustering_llf == two[i].clustering_llf);
        CHECK(one[i].iterations == two[i].iterations);
        CHECK(one[i].decoded == cfg.Ka);
        // pe is a count of missed users over K_a
        CHECK(one[i].pe * double(cfg.Ka) == doctest::Approx(double(one[i].missed)));
        CHECK(one[i].support_recovery.size() == cfg.L);
        CHECK(one[i].converged.size() == cfg.L);
    }
    const auto single = run_trial(cfg, 2);
    CHECK(single.pe == one[2].pe);
    CHECK(single.clustering_llf == one[2].clustering_llf);
}

TEST_CASE("callback sees every trial")
{
    const SimConfig cfg = small_config();
    std::size_t seen = 0;
    run_trials(cfg, 2, [&](const TrialResult &) { ++seen; });
    CHECK(seen == cfg.trials);
}

TEST_CASE("mismatched codebook is reported as an encode failure")
{
    SimConfig cfg = small_config();
    CodebookConfig other = cfg.codebook_config();
    other.n0 = 32;
    const Codebook cb(other);
    try
    {
        run_trial(cfg, cb, 0);
        FAIL("expected StageError");
    }
    catch (const StageError &e)
    {
        CHECK(e.stage() == "encode");
    }
}

TEST_CASE("aggregation uses the binomial standard error")
{
    const SimConfig cfg = small_config();
    std::vector<TrialResult> rs(4);
    rs[0].pe = 0.2;
    rs[1].pe = 0.0;
    rs[2].pe = 0.4;
    rs[3].pe = 0.2;
    const auto row = aggregate(cfg, rs, 1.5);
    CHECK(row.pe_mean == doctest::Approx(0.2));
    CHECK(row.pe_stderr == doctest::Approx(std::sqrt(0.2 * 0.8 / 20.0)));
    CHECK(row.trials == 4);
    CHECK(row.runtime_s == 1.5);
    CHECK(row.mu_tot == doctest::Approx(24.0 * 5.0 / (96.0 * 3.0)));
}

TEST_CASE("CSV layout")
{
    AggregateRow r;
    r.mu_tot = 3.0;
    r.Mr = 8;
    r.Ka = 40;
    r.Pt_dBm = 15.0;
    r.delta = 0.012;
    r.trials = 50;
    r.pe_mean = 0.25;
    r.pe_stderr = 0.01;
    r.runtime_s = 12.5;
    std::ostringstream os;
    write_csv(os, std::vector<AggregateRow>{r});
    CHECK(os.str() == "mu_tot,Mr,Ka,Pt_dBm,delta,trials,pe_mean,pe_stderr,runtime_s\n"
                      "3,8,40,15,0.012,50,0.25,0.01,12.5\n");
}

TEST_CASE("grid expansion")
{
    const json grid{{"base", {{"B", 48}, {"L", 4}, {"Ka", 40}, {"mu_tot", 3.0}}},
                    {"axes", {{"Mr", {8, 16}}, {"mu_tot", {3.0, 4.5, 6.0}}, {"hygamp.xi", {1e-5}}}}};
    const auto pts = expand_grid(grid);
    REQUIRE(pts.size() == 6);
    for (const auto &p : pts)
        CHECK(p.hygamp.xi == 1e-5);
    CHECK(pts[0].Mr == 8);
    CHECK(pts[5].Mr == 16);
    std::size_t n8 = 0;
    for (const auto &p : pts)
        n8 += p.Mr == 8;
    CHECK(n8 == 3);
    CHECK_THROWS_AS(expand_grid(json{{"base", json::object()}}), ConfigError);
    CHECK_THROWS_AS(expand_grid(json{{"base", json::object()}, {"axes", {{"Mr", json::array()}}}}), ConfigError);
    CHECK_THROWS_AS(expand_grid(json{{"base", json::object()}, {"axes", {{"Mrr", {1}}}}}), ConfigError);
}

TEST_CASE("trial record")
{
    SimConfig cfg = small_config();
    TrialResult r;
    r.trial_id = 3;
    r.converged = {1, 0, 1};
    const json j = trial_to_json(cfg, r);
    CHECK(j["trial_id"] == 3);
    CHECK(j["mu_tot_nominal"].is_null());
    CHECK(j["hygamp_converged"] == json::array({true, false, true}));
    cfg.n0.reset();
    cfg.mu_tot = 2.0;
    CHECK(trial_to_json(cfg, r)["mu_tot_nominal"] == 2.0);
}

TEST_CASE("collision statistics")
{
    // C(150, 2) / 2^17 per slot, times 2L / K_a for the per-user union bound
    CHECK(collision_union_bound(150, 17, 6) == doctest::Approx(6.0 * 149.0 / 131072.0).epsilon(1e-14));
    CHECK(collision_union_bound(150, 17, 6) == doctest::Approx(6.8207e-3).epsilon(1e-4));

    Rng rng(31);
    const auto a = collision_probe(2, 1, 1, 20000, rng);
    CHECK(a.analytic_pairs == 0.5);
    CHECK(a.empirical_pairs == doctest::Approx(0.5).epsilon(0.05));

    const auto b = collision_probe(100, 17, 1, 100000, rng);
    CHECK(b.analytic_pairs == doctest::Approx(4950.0 / 131072.0));
    CHECK(b.empirical_pairs == doctest::Approx(b.analytic_pairs).epsilon(0.05));
    CHECK_THROWS_AS(collision_probe(5, 8, 1, 10, rng), std::invalid_argument);
}
