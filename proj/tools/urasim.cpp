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

// Command-line front end: run, sweep, probe-collisions, trace.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "ura/config.hpp"
#include "ura/harness.hpp"
#include "ura/hygamp.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace
{
    struct Common
    {
        std::optional<std::uint64_t> seed;
        std::optional<std::size_t> trials;
        unsigned threads = 1;
        std::string out = "out";
    };

    void add_common(CLI::App *app, Common &c)
    {
        app->add_option("--seed", c.seed, "Master seed (overrides the config)");
        app->add_option("--trials", c.trials, "Trials per grid point (overrides the config)");
        app->add_option("--threads", c.threads, "Worker threads")->check(CLI::PositiveNumber);
        app->add_option("--out", c.out, "Output directory");
    }

    void apply_overrides(ura::SimConfig &cfg, const Common &c)
    {
        if (c.seed)
            cfg.master_seed = *c.seed;
        if (c.trials)
            cfg.trials = *c.trials;
        cfg.validate();
    }

    std::ofstream open_out(const fs::path &p)
    {
        fs::create_directories(p.parent_path());
        std::ofstream os(p);
        if (!os)
            throw std::runtime_error("cannot write " + p.string());
        return os;
    }

    int cmd_run(const std::string &config_path, const Common &c)
    {
        auto cfg = ura::load_config(config_path);
        apply_overrides(cfg, c);
        auto nd = open_out(fs::path(c.out) / "trials.ndjson");
        const auto t0 = std::chrono::steady_clock::now();
        const auto results = ura::run_trials(cfg, c.threads, [&](const ura::TrialResult &r) {
            nd << ura::trial_to_json(cfg, r).dump() << '\n';
        });
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const ura::AggregateRow row = ura::aggregate(cfg, results, secs);
        auto csv = open_out(fs::path(c.out) / "results.csv");
        ura::write_csv(csv, std::span(&row, 1));
        ura::write_csv(std::cout, std::span(&row, 1));
        return 0;
    }

    int cmd_sweep(const std::string &grid_path, const Common &c)
    {
        auto points = ura::expand_grid(ura::load_json(grid_path));
        for (auto &p : points)
            apply_overrides(p, c);
        auto nd = open_out(fs::path(c.out) / "trials.ndjson");
        const auto rows = ura::sweep(points, c.threads, [&](const ura::SimConfig &cfg, const ura::TrialResult &r) {
            nd << ura::trial_to_json(cfg, r).dump() << '\n';
        });
        auto csv = open_out(fs::path(c.out) / "results.csv");
        ura::write_csv(csv, rows);
        ura::write_csv(std::cout, rows);
        return 0;
    }

    int cmd_probe(std::size_t Ka, unsigned J, unsigned L, std::size_t samples, std::uint64_t seed)
    {
        ura::Rng rng(seed);
        const auto st = ura::collision_probe(Ka, J, L, samples, rng);
        json j{{"Ka", Ka},
               {"J", J},
               {"L", L},
               {"samples", st.samples},
               {"empirical_pairs", st.empirical_pairs},
               {"analytic_pairs", st.analytic_pairs},
               {"union_bound", st.union_bound}};
        std::cout << j.dump() << '\n';
        return 0;
    }

    // Replays one trial up to the channel and dumps per-iteration HyGAMP records for a slot.
    int cmd_trace(const std::string &config_path, const Common &c, std::uint64_t trial, std::size_t slot)
    {
        auto cfg = ura::load_config(config_path);
        apply_overrides(cfg, c);
        if (slot >= cfg.L)
            throw ura::ConfigError("trace: slot out of range");
        const ura::Codebook cb(cfg.codebook_config());
        ura::Rng rng = ura::trial_rng(cfg.master_seed, trial);
        std::vector<ura::ChunkIndexSeq> seqs;
        for (std::size_t k = 0; k < cfg.Ka; ++k)
            seqs.push_back(ura::partition_message(ura::random_message(cfg.B, rng), cfg.L));
        const auto params = cfg.channel_params();
        const auto users = ura::draw_users(params, cfg.Ka, cfg.L, rng);
        std::optional<ura::SlotObservation> obs;
        for (std::size_t l = 0; l <= slot; ++l)
        {
            const auto sup = ura::slot_support(seqs, l);
            obs = ura::apply_mac(cb, sup.indices, users.gains, users.small_scale[l], cfg.Mr, params.noise_power, rng);
        }

        auto nd = open_out(fs::path(c.out) / "trace.ndjson");
        auto hcfg = cfg.hygamp_config();
        hcfg.trace = [&](const ura::HyGampIteration &it) {
            json j{{"t", it.t},
                   {"residual_norm", it.residual_norm},
                   {"sigma_w2", it.sigma_w2},
                   {"sigma_x", it.sigma_x},
                   {"max_activity", it.max_activity}};
            nd << j.dump() << '\n';
            std::cout << j.dump() << '\n';
        };
        const auto est = ura::run_hygamp(*obs, cb, hcfg, cfg.Ka);
        std::cerr << "converged=" << est.converged << " iterations=" << est.iterations << '\n';
        return 0;
    }
}

int main(int argc, char **argv)
{
    CLI::App app{"urasim: uncoupled compressive-sensing unsourced random access simulator"};
    app.require_subcommand(1);

    Common common;
    std::string config_path, grid_path;

    auto *run = app.add_subcommand("run", "Run the trials of a single configuration");
    run->add_option("config", config_path, "JSON configuration")->required()->check(CLI::ExistingFile);
    add_common(run, common);

    auto *sw = app.add_subcommand("sweep", "Run every point of a grid file");
    sw->add_option("grid", grid_path, "JSON grid {base, axes}")->required()->check(CLI::ExistingFile);
    add_common(sw, common);

    std::size_t Ka = 150, samples = 100000;
    unsigned J = 17, L = 6;
    std::uint64_t probe_seed = 1;
    auto *probe = app.add_subcommand("probe-collisions", "Monte-Carlo slot collision statistics");
    probe->add_option("--Ka", Ka, "Active users");
    probe->add_option("--J", J, "Bits per slot");
    probe->add_option("--L", L, "Slots");
    probe->add_option("--samples", samples, "Sampled slots");
    probe->add_option("--seed", probe_seed, "Seed");

    std::uint64_t trial = 0;
    std::size_t slot = 0;
    auto *trace = app.add_subcommand("trace", "Per-iteration HyGAMP records for one slot");
    trace->add_option("config", config_path, "JSON configuration")->required()->check(CLI::ExistingFile);
    trace->add_option("--trial", trial, "Trial id");
    trace->add_option("--slot", slot, "Slot index");
    add_common(trace, common);

    CLI11_PARSE(app, argc, argv);

    try
    {
        if (*run)
            return cmd_run(config_path, common);
        if (*sw)
            return cmd_sweep(grid_path, common);
        if (*probe)
            return cmd_probe(Ka, J, L, samples, probe_seed);
        if (*trace)
            return cmd_trace(config_path, common, trial, slot);
    }
    catch (const ura::ConfigError &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
