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

#include "ura/hygamp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "ura/special_functions.hpp"

namespace ura
{
    void HyGampConfig::validate() const
    {
        if (!(lambda > 0.0 && lambda < 1.0))
            throw std::invalid_argument("HyGAMP: lambda must lie in (0, 1)");
        if (!learn_sigma_x && !(sigma_x > 0.0))
            throw std::invalid_argument("HyGAMP: sigma_x must be positive when it is not learned");
        if (!std::isfinite(sigma_x))
            throw std::invalid_argument("HyGAMP: sigma_x must be finite");
        if (!(sigma_w2 > 0.0) || !std::isfinite(sigma_w2))
            throw std::invalid_argument("HyGAMP: sigma_w2 must be positive");
        if (!(xi > 0.0 && xi < 1.0))
            throw std::invalid_argument("HyGAMP: xi must lie in (0, 1)");
        if (T_max < 1)
            throw std::invalid_argument("HyGAMP: T_max must be at least 1");
        if (!(damping > 0.0 && damping <= 1.0))
            throw std::invalid_argument("HyGAMP: damping must lie in (0, 1]");
        if (em_inner_iters < 1)
            throw std::invalid_argument("HyGAMP: em_inner_iters must be at least 1");
        if (!(variance_floor > 0.0))
            throw std::invalid_argument("HyGAMP: variance_floor must be positive");
        if (!(sigma_x_range > 1.0))
            throw std::invalid_argument("HyGAMP: sigma_x_range must exceed 1");
    }

    SigmaUpdate em_sigma_x_step(const GampState &state, double sigma_x, double lo, double hi)
    {
        return em_sigma_x_step(state.r, state.mu_r, state.rho, sigma_x, lo, hi);
    }

    HyGampSolver::HyGampSolver(const Codebook &cb, const SlotObservation &obs, const HyGampConfig &cfg,
                               double operator_scale)
        : cb_(cb), cfg_(cfg), c_(operator_scale)
    {
        cfg_.validate();
        if (!(c_ > 0.0) || !std::isfinite(c_))
            throw std::invalid_argument("HyGAMP: operator scale must be positive");
        if (obs.n0 != cb.n0())
            throw std::invalid_argument("HyGAMP: observation has " + std::to_string(obs.n0) +
                                        " rows but the codebook has " + std::to_string(cb.n0()));
        if (obs.Mr == 0 || obs.Y.size() != obs.n0 * obs.Mr)
            throw std::invalid_argument("HyGAMP: malformed observation");

        st_.N = cb.size();
        st_.Mr = obs.Mr;
        st_.n0 = obs.n0;
        const std::size_t K = st_.components(), M = st_.measurements();

        y_.resize(M);
        for (std::size_t m = 0; m < st_.Mr; ++m)
            for (std::size_t t = 0; t < st_.n0; ++t)
            {
                const cplx v = obs.at(t, m);
                if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
                    throw std::invalid_argument("HyGAMP: observation contains non-finite samples");
                y_[m * st_.n0 + t] = v.real();
                y_[(st_.Mr + m) * st_.n0 + t] = v.imag();
            }

        logit_lambda_ = std::log(cfg_.lambda) - std::log1p(-cfg_.lambda);

        st_.x.assign(K, 0.0);
        st_.mu_x.assign(K, 0.0);
        st_.r.assign(K, 0.0);
        st_.mu_r.assign(K, 1.0);
        st_.llr_out.assign(K, 0.0);
        st_.llr_in.assign(K, logit_lambda_);
        st_.rho.assign(K, logistic(logit_lambda_));

        st_.z.assign(M, 0.0);
        st_.mu_p.assign(M, cfg_.variance_floor);
        st_.p.assign(M, 0.0);
        st_.z0.assign(M, 0.0);
        st_.mu_z.assign(M, 0.0);
        st_.s.assign(M, 0.0);
        st_.mu_s.assign(M, 0.0);

        st_.sigma_w2 = std::max(0.5 * cfg_.sigma_w2, cfg_.variance_floor);
        init_sigma_x();
        pairs_.assign(K, half_line_pair(0.0, 1.0, st_.sigma_x));
    }

    void HyGampSolver::init_sigma_x()
    {
        if (cfg_.sigma_x > 0.0)
            st_.sigma_x = cfg_.sigma_x;
        else
        {
            // Per-component energy from ||y||^2: each real measurement sums N terms with
            // mean squared weight c^2 (E(Re g)^2 + E(Im g)^2).
            const double M = static_cast<double>(st_.measurements());
            const double energy = std::inner_product(y_.begin(), y_.end(), y_.begin(), 0.0) / M;
            const double gain = c_ * c_ * static_cast<double>(st_.N) *
                                (cb_.mean_re_squared() + cb_.mean_im_squared());
            double v = (energy - st_.sigma_w2) / gain;
            if (!(v > 0.0))
                v = 1e-3 * energy / gain;
            st_.sigma_x = v > 0.0 ? std::sqrt(v / (2.0 * cfg_.lambda)) : 1.0;
        }
        sigma_lo_ = st_.sigma_x / cfg_.sigma_x_range;
        sigma_hi_ = st_.sigma_x * cfg_.sigma_x_range;
    }

    void HyGampSolver::forward(const RVec &x, RVec &z) const
    {
        const std::size_t N = st_.N, n0 = st_.n0, Mr = st_.Mr;
        work_a_.resize(N);
        work_b_.resize(n0);
        for (std::size_t m = 0; m < Mr; ++m)
        {
            for (std::size_t j = 0; j < N; ++j)
                work_a_[j] = cplx(c_ * x[m * N + j], c_ * x[(Mr + m) * N + j]);
            cb_.op().apply(work_a_, work_b_, work_c_);
            for (std::size_t t = 0; t < n0; ++t)
            {
                z[m * n0 + t] = work_b_[t].real();
                z[(Mr + m) * n0 + t] = work_b_[t].imag();
            }
        }
    }

    void HyGampSolver::adjoint(const RVec &s, RVec &out) const
    {
        const std::size_t N = st_.N, n0 = st_.n0, Mr = st_.Mr;
        work_b_.resize(n0);
        work_a_.resize(N);
        for (std::size_t m = 0; m < Mr; ++m)
        {
            for (std::size_t t = 0; t < n0; ++t)
                work_b_[t] = cplx(s[m * n0 + t], s[(Mr + m) * n0 + t]);
            cb_.op().apply_adjoint(work_b_, work_a_, work_c_);
            for (std::size_t j = 0; j < N; ++j)
            {
                out[m * N + j] = c_ * work_a_[j].real();
                out[(Mr + m) * N + j] = c_ * work_a_[j].imag();
            }
        }
    }

    // With u = a + i b and squared weights R = (Re A)^2, I = (Im A)^2:
    //   Re-part variance = R a + I b = Re(R u) + Im(I u)
    //   Im-part variance = I a + R b = Re(I u) + Im(R u)
    // The same identity holds for the transposed products.
    void HyGampSolver::forward_variance(const RVec &v, RVec &out) const
    {
        const std::size_t N = st_.N, n0 = st_.n0, Mr = st_.Mr;
        const double c2 = c_ * c_;
        if (cfg_.uniform_variance)
        {
            const double avg = 0.5 * c2 * (cb_.mean_re_squared() + cb_.mean_im_squared());
            for (std::size_t m = 0; m < Mr; ++m)
            {
                double sum = 0.0;
                for (std::size_t j = 0; j < N; ++j)
                    sum += v[m * N + j] + v[(Mr + m) * N + j];
                std::fill_n(out.begin() + m * n0, n0, avg * sum);
                std::fill_n(out.begin() + (Mr + m) * n0, n0, avg * sum);
            }
            return;
        }
        CVec spec(N), pr(n0), pi(n0);
        for (std::size_t m = 0; m < Mr; ++m)
        {
            work_a_.resize(N);
            for (std::size_t j = 0; j < N; ++j)
                work_a_[j] = cplx(v[m * N + j], v[(Mr + m) * N + j]);
            cb_.re_squared().transform_input(work_a_, spec);
            cb_.re_squared().apply_spectrum(spec, pr, work_c_);
            cb_.im_squared().apply_spectrum(spec, pi, work_c_);
            for (std::size_t t = 0; t < n0; ++t)
            {
                out[m * n0 + t] = c2 * (pr[t].real() + pi[t].imag());
                out[(Mr + m) * n0 + t] = c2 * (pi[t].real() + pr[t].imag());
            }
        }
    }

    void HyGampSolver::adjoint_variance(const RVec &v, RVec &out) const
    {
        const std::size_t N = st_.N, n0 = st_.n0, Mr = st_.Mr;
        const double c2 = c_ * c_;
        if (cfg_.uniform_variance)
        {
            const double avg = 0.5 * c2 * (cb_.mean_re_squared() + cb_.mean_im_squared());
            for (std::size_t m = 0; m < Mr; ++m)
            {
                double sum = 0.0;
                for (std::size_t t = 0; t < n0; ++t)
                    sum += v[m * n0 + t] + v[(Mr + m) * n0 + t];
                std::fill_n(out.begin() + m * N, N, avg * sum);
                std::fill_n(out.begin() + (Mr + m) * N, N, avg * sum);
            }
            return;
        }
        CVec spec(N), pr(N), pi(N);
        work_b_.resize(n0);
        for (std::size_t m = 0; m < Mr; ++m)
        {
            for (std::size_t t = 0; t < n0; ++t)
                work_b_[t] = cplx(v[m * n0 + t], v[(Mr + m) * n0 + t]);
            cb_.re_squared().transform_measurement(work_b_, spec);
            cb_.re_squared().apply_adjoint_spectrum(spec, pr, work_c_);
            cb_.im_squared().apply_adjoint_spectrum(spec, pi, work_c_);
            for (std::size_t j = 0; j < N; ++j)
            {
                out[m * N + j] = c2 * (pr[j].real() + pi[j].imag());
                out[(Mr + m) * N + j] = c2 * (pi[j].real() + pr[j].imag());
            }
        }
    }

    void HyGampSolver::update_llrs()
    {
        const std::size_t N = st_.N, Q = 2 * st_.Mr;
        for (std::size_t i = 0; i < st_.components(); ++i)
        {
            pairs_[i] = half_line_pair(st_.r[i], st_.mu_r[i], st_.sigma_x);
            st_.llr_out[i] = log_add_exp(pairs_[i].ell_plus, pairs_[i].ell_minus);
        }

        RVec total(N, 0.0);
        for (std::size_t q = 0; q < Q; ++q)
            for (std::size_t j = 0; j < N; ++j)
                total[j] += st_.llr_out[q * N + j];
        for (std::size_t q = 0; q < Q; ++q)
            for (std::size_t j = 0; j < N; ++j)
            {
                const std::size_t i = q * N + j;
                st_.llr_in[i] = logit_lambda_ + (total[j] - st_.llr_out[i]);
                st_.rho[i] = logistic(st_.llr_in[i]);
            }
    }

    RVec HyGampSolver::llr_sums() const
    {
        const std::size_t N = st_.N, Q = 2 * st_.Mr;
        RVec total(N, 0.0);
        for (std::size_t q = 0; q < Q; ++q)
            for (std::size_t j = 0; j < N; ++j)
                total[j] += st_.llr_out[q * N + j];
        return total;
    }

    double HyGampSolver::residual_norm() const
    {
        double acc = 0.0;
        for (std::size_t i = 0; i < y_.size(); ++i)
            acc += (y_[i] - st_.z[i]) * (y_[i] - st_.z[i]);
        return std::sqrt(acc);
    }

    bool HyGampSolver::step()
    {
        const std::size_t K = st_.components(), M = st_.measurements();
        const double floor = cfg_.variance_floor;
        const double beta = st_.t == 0 ? 1.0 : cfg_.damping;
        const bool learn = st_.t >= cfg_.em_warmup;

        // Denoiser on the half-line terms cached by the previous LLR pass, which saw the
        // same r, mu_r and sigma_x. The same posteriors feed the sigma_x E-step.
        double dx2 = 0.0, x2 = 0.0, em_num = 0.0, em_den = 0.0;
        for (std::size_t i = 0; i < K; ++i)
        {
            const auto post = posterior_from_pair(pairs_[i], st_.llr_in[i], floor);
            const double xn = beta * post.mean + (1.0 - beta) * st_.x[i];
            const double vn = beta * post.variance + (1.0 - beta) * st_.mu_x[i];
            dx2 += (xn - st_.x[i]) * (xn - st_.x[i]);
            x2 += xn * xn;
            st_.x[i] = xn;
            st_.mu_x[i] = std::max(vn, floor);
            em_num += post.abs_mean_active;
            em_den += st_.rho[i];
        }

        if (cfg_.learn_sigma_x && learn)
        {
            if (em_den > 0.0)
                st_.sigma_x = std::clamp(em_num / em_den, sigma_lo_, sigma_hi_);
            for (unsigned k = 1; k < cfg_.em_inner_iters; ++k)
                st_.sigma_x = em_sigma_x_step(st_, st_.sigma_x, sigma_lo_, sigma_hi_).sigma;
        }

        forward(st_.x, st_.z);
        forward_variance(st_.mu_x, st_.mu_p);
        for (std::size_t i = 0; i < M; ++i)
        {
            st_.mu_p[i] = std::max(st_.mu_p[i], floor);
            st_.p[i] = st_.z[i] - st_.mu_p[i] * st_.s[i];
            const auto out = output_update(y_[i], st_.p[i], st_.mu_p[i], st_.sigma_w2);
            st_.z0[i] = out.z0;
            st_.mu_z[i] = out.mu_z;
            // (z0 - p) / mu_p and (1 - mu_z / mu_p) / mu_p, simplified
            const double inv = 1.0 / (st_.mu_p[i] + st_.sigma_w2);
            st_.s[i] = beta * (y_[i] - st_.p[i]) * inv + (1.0 - beta) * st_.s[i];
            st_.mu_s[i] = std::max(beta * inv + (1.0 - beta) * st_.mu_s[i], floor);
        }

        RVec tmp(K);
        adjoint_variance(st_.mu_s, tmp);
        for (std::size_t i = 0; i < K; ++i)
            st_.mu_r[i] = std::max(1.0 / std::max(tmp[i], floor), floor);
        adjoint(st_.s, tmp);
        for (std::size_t i = 0; i < K; ++i)
        {
            st_.r[i] = st_.x[i] + st_.mu_r[i] * tmp[i];
            if (!std::isfinite(st_.r[i]) || !std::isfinite(st_.x[i]))
                throw std::runtime_error("HyGAMP: non-finite state at iteration " + std::to_string(st_.t) +
                                         ", component " + std::to_string(i));
        }

        if (cfg_.learn_sigma_w && learn)
            st_.sigma_w2 = std::max(ml_sigma_w(y_, st_.z, st_.mu_z), floor);

        update_llrs();

        const bool stop = st_.t > 0 && dx2 <= cfg_.xi * x2;
        ++st_.t;
        converged_ = stop;

        if (cfg_.trace)
        {
            const RVec sums = llr_sums();
            double best = -INFINITY;
            for (double v : sums)
                best = std::max(best, v);
            cfg_.trace({st_.t, residual_norm(), 2.0 * st_.sigma_w2, st_.sigma_x,
                        activity_posterior(best, cfg_.lambda)});
        }
        return stop;
    }

    void HyGampSolver::run()
    {
        while (st_.t < cfg_.T_max)
            if (step())
                break;
    }

    std::vector<Index> top_k(const RVec &score, std::size_t k)
    {
        if (k > score.size())
            throw std::invalid_argument("top_k: k exceeds the number of groups");
        std::vector<Index> idx(score.size());
        std::iota(idx.begin(), idx.end(), Index{0});
        std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k), idx.end(),
                          [&](Index a, Index b) { return score[a] > score[b] || (score[a] == score[b] && a < b); });
        idx.resize(k);
        return idx;
    }

    SlotEstimate run_hygamp(const SlotObservation &obs, const Codebook &cb, const HyGampConfig &cfg, std::size_t Ka)
    {
        cfg.validate();
        if (Ka == 0 || Ka > cb.size())
            throw std::invalid_argument("run_hygamp: K_a must lie in [1, 2^J]");

        const double M = 2.0 * static_cast<double>(obs.Y.size());
        double energy = 0.0;
        for (const auto &v : obs.Y)
            energy += std::norm(v);
        double scale = std::sqrt(energy / M);
        if (!(scale > 0.0) || !std::isfinite(scale))
            scale = 1.0;
        const double sqrt_pt = std::sqrt(cb.config().transmit_power);
        const double to_phys = scale / sqrt_pt;

        SlotObservation normalized = obs;
        for (auto &v : normalized.Y)
            v /= scale;

        HyGampConfig inner = cfg;
        inner.sigma_w2 = cfg.sigma_w2 / (scale * scale);
        if (cfg.sigma_x > 0.0)
            inner.sigma_x = cfg.sigma_x / to_phys;
        if (cfg.trace)
            inner.trace = [&](const HyGampIteration &it) {
                cfg.trace({it.t, it.residual_norm * scale, it.sigma_w2 * scale * scale, it.sigma_x * to_phys,
                           it.max_activity});
            };

        HyGampSolver solver(cb, normalized, inner, 1.0 / sqrt_pt);
        solver.run();
        const auto &st = solver.state();

        SlotEstimate est;
        const RVec sums = solver.llr_sums();
        est.activity_posterior = activity_posterior(sums, cfg.lambda);
        est.decoded_indices = top_k(sums, Ka);
        est.channel_estimates.reserve(Ka);
        const std::size_t Q = 2 * st.Mr;
        for (Index j : est.decoded_indices)
        {
            RVec h(Q);
            for (std::size_t q = 0; q < Q; ++q)
                h[q] = st.x[q * st.N + j] * to_phys;
            est.channel_estimates.push_back(std::move(h));
        }
        est.converged = solver.converged();
        est.iterations = st.t;
        est.sigma_x = st.sigma_x * to_phys;
        est.sigma_w2 = 2.0 * st.sigma_w2 * scale * scale;
        return est;
    }
}
