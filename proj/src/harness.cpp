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

#include "ura/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <ostream>
#include <thread>

#include "ura/channel.hpp"
#include "ura/gmm.hpp"
#include "ura/hygamp.hpp"
#include "ura/stitching.hpp"

namespace ura
{
    using nlohmann::json;

    namespace
    {
        using Clock = std::chrono::steady_clock;

        double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

        template <typename F>
        auto stage(const char *name, double &seconds, F &&f)
        {
            const auto t0 = Clock::now();
            try
            {
                if constexpr (std::is_void_v<decltype(f())>)
                {
                    f();
                    seconds += since(t0);
                }
                else
                {
                    auto out = f();
                    seconds += since(t0);
                    return out;
                }
            }
            catch (const StageError &)
            {
                throw;
            }
            catch (const std::exception &e)
            {
                throw StageError(name, e.what());
            }
        }
    }

    Rng trial_rng(std::uint64_t master_seed, std::uint64_t trial_id)
    {
        std::seed_seq seq{std::uint32_t(master_seed), std::uint32_t(master_seed >> 32), std::uint32_t(trial_id),
                          std::uint32_t(trial_id >> 32)};
        return Rng(seq);
    }

    double compute_pe(std::span<const Message> transmitted, std::span<const Message> decoded)
    {
        if (transmitted.empty())
            return 0.0;
        std::vector<Message> pool(decoded.begin(), decoded.end());
        std::sort(pool.begin(), pool.end());
        std::size_t missed = 0;
        for (const auto &m : transmitted)
            if (!std::binary_search(pool.begin(), pool.end(), m))
                ++missed;
        return double(missed) / double(transmitted.size());
    }

    TrialResult run_trial(const SimConfig &cfg, const Codebook &cb, std::uint64_t trial_id)
    {
        cfg.validate();
        const std::size_t Ka = cfg.Ka, L = cfg.L, Mr = cfg.Mr;
        const unsigned J = cfg.J();
        if (cb.n0() != cfg.blocklength_per_slot() || cb.size() != (std::size_t{1} << J))
            throw StageError("encode", "codebook does not match the configuration");

        TrialResult res;
        res.trial_id = trial_id;
        Rng rng = trial_rng(cfg.master_seed, trial_id);

        std::vector<Message> tx;
        std::vector<ChunkIndexSeq> seqs;
        stage("encode", res.seconds.encode, [&] {
            for (std::size_t k = 0; k < Ka; ++k)
            {
                tx.push_back(random_message(cfg.B, rng));
                seqs.push_back(partition_message(tx.back(), cfg.L));
            }
        });

        const ChannelParams params = cfg.channel_params();
        std::vector<SlotObservation> obs;
        std::vector<std::vector<Index>> planted(L);
        stage("channel", res.seconds.channel, [&] {
            const UserChannelSet users = draw_users(params, Ka, L, rng);
            for (std::size_t l = 0; l < L; ++l)
            {
                const SlotSupport sup = slot_support(seqs, l);
                res.colliding_pairs += sup.colliding_pairs;
                planted[l] = sup.indices;
                obs.push_back(apply_mac(cb, sup.indices, users.gains, users.small_scale[l], Mr, params.noise_power, rng));
            }
        });

        const HyGampConfig hcfg = cfg.hygamp_config();
        std::vector<SlotEstimate> est;
        stage("hygamp", res.seconds.hygamp, [&] {
            for (std::size_t l = 0; l < L; ++l)
            {
                est.push_back(run_hygamp(obs[l], cb, hcfg, Ka));
                auto sorted = est.back().decoded_indices;
                std::sort(sorted.begin(), sorted.end());
                std::size_t hit = 0;
                for (Index j : planted[l])
                    hit += std::binary_search(sorted.begin(), sorted.end(), j);
                res.support_recovery.push_back(double(hit) / double(Ka));
                res.converged.push_back(est.back().converged);
                res.iterations.push_back(est.back().iterations);
            }
        });

        AssignmentResult assign;
        stage("clustering", res.seconds.clustering, [&] {
            const ChannelPointSet pts = build_point_set(est);
            const GmmModel model = gmm_em(pts.points, Ka, cfg.clustering.gmm, rng);
            res.clustering_llf = model.log_likelihood;
            res.gmm_iterations = model.iterations;
            res.gmm_reseeds = model.reseeds;
            assign = constrained_assign(model.membership, L, Ka, cfg.clustering.p_floor);
        });

        stage("stitch", res.seconds.stitch, [&] {
            std::vector<std::vector<Index>> lists;
            for (const auto &e : est)
                lists.push_back(e.decoded_indices);
            std::vector<Message> decoded;
            for (const auto &seq : stitch(assign, lists))
                decoded.push_back(assemble_message(seq, J));
            res.decoded = decoded.size();
            res.pe = compute_pe(tx, decoded);
            res.missed = static_cast<std::size_t>(std::lround(res.pe * double(Ka)));
        });
        return res;
    }

    TrialResult run_trial(const SimConfig &cfg, std::uint64_t trial_id)
    {
        cfg.validate();
        const Codebook cb(cfg.codebook_config());
        return run_trial(cfg, cb, trial_id);
    }

    namespace
    {
        std::vector<TrialResult> run_trials_with(const SimConfig &cfg, const Codebook &cb, unsigned threads,
                                                 const TrialCallback &on_trial)
        {
            const std::size_t n = cfg.trials;
            std::vector<TrialResult> out(n);
            std::atomic<std::size_t> next{0};
            std::mutex mu;
            std::exception_ptr err;
            auto worker = [&] {
                for (;;)
                {
                    const std::size_t i = next.fetch_add(1);
                    if (i >= n)
                        return;
                    try
                    {
                        out[i] = run_trial(cfg, cb, i);
                        if (on_trial)
                        {
                            std::lock_guard lock(mu);
                            on_trial(out[i]);
                        }
                    }
                    catch (...)
                    {
                        std::lock_guard lock(mu);
                        if (!err)
                            err = std::current_exception();
                        next = n;
                    }
                }
            };
            threads = std::max(1u, std::min<unsigned>(threads, unsigned(n)));
            if (threads == 1)
                worker();
            else
            {
                std::vector<std::thread> pool;
                for (unsigned t = 0; t < threads; ++t)
                    pool.emplace_back(worker);
                for (auto &t : pool)
                    t.join();
            }
            if (err)
                std::rethrow_exception(err);
            return out;
        }
    }

    std::vector<TrialResult> run_trials(const SimConfig &cfg, unsigned threads, const TrialCallback &on_trial)
    {
        cfg.validate();
        const Codebook cb(cfg.codebook_config());
        return run_trials_with(cfg, cb, threads, on_trial);
    }

    AggregateRow aggregate(const SimConfig &cfg, std::span<const TrialResult> results, double runtime_s)
    {
        AggregateRow row;
        row.mu_tot = cfg.realized_mu_tot();
        row.Mr = cfg.Mr;
        row.Ka = cfg.Ka;
        row.Pt_dBm = cfg.Pt_dBm;
        row.delta = cfg.resolved_delta();
        row.trials = results.size();
        row.runtime_s = runtime_s;
        if (results.empty())
            return row;
        double sum = 0.0;
        for (const auto &r : results)
            sum += r.pe;
        row.pe_mean = sum / double(results.size());
        const double users = double(results.size()) * double(cfg.Ka);
        row.pe_stderr = std::sqrt(row.pe_mean * (1.0 - row.pe_mean) / users);
        return row;
    }

    std::vector<SimConfig> expand_grid(const json &grid)
    {
        if (!grid.is_object() || !grid.contains("base") || !grid.contains("axes"))
            throw ConfigError("grid: expected an object with 'base' and 'axes'");
        const json &axes = grid.at("axes");
        if (!axes.is_object() || axes.empty())
            throw ConfigError("grid: 'axes' must be a nonempty object");

        std::vector<std::pair<json::json_pointer, std::vector<json>>> dims;
        for (auto it = axes.begin(); it != axes.end(); ++it)
        {
            if (!it.value().is_array() || it.value().empty())
                throw ConfigError("grid: axis '" + it.key() + "' must be a nonempty array");
            std::string path = "/" + it.key();
            std::replace(path.begin(), path.end(), '.', '/');
            dims.emplace_back(json::json_pointer(path), std::vector<json>(it.value().begin(), it.value().end()));
        }

        std::vector<SimConfig> out;
        std::vector<std::size_t> pos(dims.size(), 0);
        for (;;)
        {
            json point = grid.at("base");
            for (std::size_t d = 0; d < dims.size(); ++d)
                point[dims[d].first] = dims[d].second[pos[d]];
            out.push_back(config_from_json(point));
            std::size_t d = dims.size();
            while (d > 0)
            {
                --d;
                if (++pos[d] < dims[d].second.size())
                    break;
                pos[d] = 0;
                if (d == 0)
                    return out;
            }
        }
    }

    std::vector<AggregateRow> sweep(const std::vector<SimConfig> &points, unsigned threads,
                                    const std::function<void(const SimConfig &, const TrialResult &)> &on_trial)
    {
        if (points.empty())
            throw ConfigError("sweep: empty grid");
        std::vector<AggregateRow> rows;
        for (const auto &cfg : points)
        {
            cfg.validate();
            const auto t0 = Clock::now();
            const Codebook cb(cfg.codebook_config());
            TrialCallback cb_fn;
            if (on_trial)
                cb_fn = [&](const TrialResult &r) { on_trial(cfg, r); };
            const auto results = run_trials_with(cfg, cb, threads, cb_fn);
            rows.push_back(aggregate(cfg, results, since(t0)));
        }
        return rows;
    }

    void write_csv(std::ostream &os, std::span<const AggregateRow> rows)
    {
        os << kCsvHeader << '\n';
        const auto prec = os.precision(10);
        for (const auto &r : rows)
            os << r.mu_tot << ',' << r.Mr << ',' << r.Ka << ',' << r.Pt_dBm << ',' << r.delta << ',' << r.trials << ','
               << r.pe_mean << ',' << r.pe_stderr << ',' << r.runtime_s << '\n';
        os.precision(prec);
    }

    json trial_to_json(const SimConfig &cfg, const TrialResult &r)
    {
        json j;
        j["trial_id"] = r.trial_id;
        j["mu_tot"] = cfg.realized_mu_tot();
        j["mu_tot_nominal"] = (cfg.mu_tot && !cfg.n0) ? json(*cfg.mu_tot) : json(nullptr);
        j["n0"] = cfg.blocklength_per_slot();
        j["Mr"] = cfg.Mr;
        j["Ka"] = cfg.Ka;
        j["Pt_dBm"] = cfg.Pt_dBm;
        j["delta"] = cfg.resolved_delta();
        j["pe"] = r.pe;
        j["missed"] = r.missed;
        j["decoded"] = r.decoded;
        j["support_recovery"] = r.support_recovery;
        j["colliding_pairs"] = r.colliding_pairs;
        std::vector<bool> conv(r.converged.begin(), r.converged.end());
        j["hygamp_converged"] = conv;
        j["hygamp_iterations"] = r.iterations;
        j["clustering_llf"] = r.clustering_llf;
        j["gmm_iterations"] = r.gmm_iterations;
        j["gmm_reseeds"] = r.gmm_reseeds;
        j["seconds"] = {{"encode", r.seconds.encode},
                        {"channel", r.seconds.channel},
                        {"hygamp", r.seconds.hygamp},
                        {"clustering", r.seconds.clustering},
                        {"stitch", r.seconds.stitch}};
        return j;
    }

    double collision_union_bound(std::size_t Ka, unsigned J, unsigned L)
    {
        const double pairs = 0.5 * double(Ka) * double(Ka - 1);
        return 2.0 * double(L) * pairs / (double(Ka) * std::ldexp(1.0, int(J)));
    }

    CollisionStats collision_probe(std::size_t Ka, unsigned J, unsigned L, std::size_t n_samples, Rng &rng)
    {
        if (n_samples < 1000)
            throw std::invalid_argument("collision_probe: at least 1000 samples are required");
        if (Ka < 1 || J < 1 || J > 32)
            throw std::invalid_argument("collision_probe: need K_a >= 1 and 1 <= J <= 32");
        const std::uint64_t size = std::uint64_t{1} << J;
        std::uniform_int_distribution<std::uint64_t> pick(0, size - 1);
        std::vector<std::uint64_t> idx(Ka);
        double total = 0.0;
        for (std::size_t s = 0; s < n_samples; ++s)
        {
            for (auto &v : idx)
                v = pick(rng);
            std::sort(idx.begin(), idx.end());
            for (std::size_t a = 0; a < Ka;)
            {
                std::size_t b = a;
                while (b < Ka && idx[b] == idx[a])
                    ++b;
                const double m = double(b - a);
                total += 0.5 * m * (m - 1.0);
                a = b;
            }
        }
        CollisionStats st;
        st.samples = n_samples;
        st.empirical_pairs = total / double(n_samples);
        st.analytic_pairs = 0.5 * double(Ka) * double(Ka - 1) / double(size);
        st.union_bound = collision_union_bound(Ka, J, L);
        return st;
    }
}
