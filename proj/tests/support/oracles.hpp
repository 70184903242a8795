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

// Independent reference implementations used by the unit and acceptance tests.
// Nothing here shares code paths with the FFT operators or the factorized solver.

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "ura/channel.hpp"
#include "ura/codebook.hpp"
#include "ura/denoiser.hpp"
#include "ura/special_functions.hpp"

namespace oracle
{
    /// A(i, j) = g[(i - j) mod N] for i < n0, straight from the definition.
    inline Eigen::MatrixXcd dense_codebook(const ura::Codebook &cb)
    {
        const auto &g = cb.generator();
        const Eigen::Index N = Eigen::Index(g.size()), n0 = Eigen::Index(cb.n0());
        Eigen::MatrixXcd A(n0, N);
        for (Eigen::Index i = 0; i < n0; ++i)
            for (Eigen::Index j = 0; j < N; ++j)
                A(i, j) = g[std::size_t(((i - j) % N + N) % N)];
        return A;
    }

    struct PosteriorMoments
    {
        double mean;
        double variance;
        double llr;
        double abs_mean_active;
    };

    // Integral of f over [a, b], cut into pieces of width ~h with a 61-point
    // Gauss-Kronrod rule on each.
    template <typename F>
    double piecewise_integral(F f, double a, double b, double h)
    {
        if (!(b > a))
            return 0.0;
        const int pieces = std::max(1, int(std::ceil((b - a) / h)));
        const double w = (b - a) / pieces;
        double acc = 0.0;
        for (int k = 0; k < pieces; ++k)
            acc += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a + k * w, a + (k + 1) * w, 0, 0);
        return acc;
    }

    /// Posterior of x under (1 - rho) delta + rho Laplace(sigma) and likelihood
    /// N(r; x, mu) by numerical integration.
    inline PosteriorMoments posterior_quadrature(double r, double mu, double rho, double sigma)
    {
        const double sd = std::sqrt(mu);
        const double lo = r - 40.0 * sd, hi = r + 40.0 * sd;
        const double h = 0.25 * std::min(sd, sigma);
        auto lik = [&](double x) { return std::exp(-(r - x) * (r - x) / (2.0 * mu)) / std::sqrt(2.0 * M_PI * mu); };
        auto lap = [&](double x) { return std::exp(-std::abs(x) / sigma) / (2.0 * sigma); };
        auto integrate = [&](auto g) {
            return piecewise_integral(g, std::min(lo, 0.0), std::min(hi, 0.0), h) +
                   piecewise_integral(g, std::max(lo, 0.0), std::max(hi, 0.0), h);
        };

        const double z_act = integrate([&](double x) { return lap(x) * lik(x); });
        const double z_zero = lik(0.0);
        const double evidence = (1.0 - rho) * z_zero + rho * z_act;
        const double m1 = rho * integrate([&](double x) { return x * lap(x) * lik(x); }) / evidence;
        const double central = rho * integrate([&](double x) { return (x - m1) * (x - m1) * lap(x) * lik(x); });
        PosteriorMoments out{};
        out.mean = m1;
        out.variance = (central + (1.0 - rho) * z_zero * m1 * m1) / evidence;
        out.llr = std::log(z_act) - std::log(z_zero);
        out.abs_mean_active = rho * integrate([&](double x) { return std::abs(x) * lap(x) * lik(x); }) / evidence;
        return out;
    }

    /// Plain dense-matrix HyGAMP on the stacked real model, with no circulant or
    /// per-antenna structure. Components are laid out [Re x; Im x] with x indexed
    /// j * Mr + m; measurements [Re y; Im y] with y indexed t * Mr + m.
    struct DenseGamp
    {
        std::size_t N, Mr, n0;
        Eigen::MatrixXd A, A2;
        Eigen::VectorXd y;
        double lambda, sigma_x, sigma_w2, damping, floor;
        bool learn_x, learn_w;
        unsigned warmup;

        Eigen::VectorXd x, mu_x, r, mu_r, rho, llr_out, llr_in, z, mu_p, p, s, mu_s;
        unsigned t = 0;

        DenseGamp(const Eigen::MatrixXcd &Ac, std::size_t Mr_, const ura::SlotObservation &obs, double lambda_,
                  double sigma_x_, double sigma_w2_complex, double damping_, bool learn_x_, bool learn_w_,
                  unsigned warmup_, double floor_ = 1e-12)
            : N(std::size_t(Ac.cols())), Mr(Mr_), n0(std::size_t(Ac.rows())), lambda(lambda_), sigma_x(sigma_x_),
              sigma_w2(0.5 * sigma_w2_complex), damping(damping_), floor(floor_), learn_x(learn_x_),
              learn_w(learn_w_), warmup(warmup_)
        {
            const Eigen::Index R = Eigen::Index(n0 * Mr), C = Eigen::Index(N * Mr);
            A.setZero(2 * R, 2 * C);
            // [Re y; Im y] = [[Re A (x) I, -Im A (x) I], [Im A (x) I, Re A (x) I]] [Re x; Im x]
            for (std::size_t t_ = 0; t_ < n0; ++t_)
                for (std::size_t j = 0; j < N; ++j)
                    for (std::size_t m = 0; m < Mr; ++m)
                    {
                        const auto a = Ac(Eigen::Index(t_), Eigen::Index(j));
                        const Eigen::Index row = Eigen::Index(t_ * Mr + m), col = Eigen::Index(j * Mr + m);
                        A(row, col) = a.real();
                        A(row, C + col) = -a.imag();
                        A(R + row, col) = a.imag();
                        A(R + row, C + col) = a.real();
                    }
            A2 = A.array().square().matrix();
            const auto yv = obs.real_view();
            y = Eigen::Map<const Eigen::VectorXd>(yv.data(), Eigen::Index(yv.size()));

            const Eigen::Index K = 2 * C, M = 2 * R;
            x.setZero(K);
            mu_x.setZero(K);
            r.setZero(K);
            mu_r.setOnes(K);
            const double logit = std::log(lambda / (1.0 - lambda));
            llr_in.setConstant(K, logit);
            rho.setConstant(K, lambda);
            llr_out.setZero(K);
            z.setZero(M);
            mu_p.setZero(M);
            p.setZero(M);
            s.setZero(M);
            mu_s.setZero(M);
        }

        // Group of component k: both the Re and Im entries of (j, m) for all m.
        std::size_t group(Eigen::Index k) const { return (std::size_t(k) % (N * Mr)) / Mr; }

        void step()
        {
            const double beta = t == 0 ? 1.0 : damping;
            const bool learn = t >= warmup;
            const Eigen::Index K = x.size(), M = y.size();

            double num = 0.0, den = 0.0;
            for (Eigen::Index k = 0; k < K; ++k)
            {
                const auto post = ura::laplace_posterior(r(k), mu_r(k), rho(k), sigma_x, floor);
                x(k) = beta * post.mean + (1.0 - beta) * x(k);
                mu_x(k) = std::max(beta * post.variance + (1.0 - beta) * mu_x(k), floor);
                num += post.abs_mean_active;
                den += rho(k);
            }
            if (learn_x && learn && den > 0.0)
                sigma_x = num / den;

            z = A * x;
            mu_p = (A2 * mu_x).cwiseMax(floor);
            p = z - mu_p.cwiseProduct(s);
            Eigen::VectorXd mu_z(M);
            for (Eigen::Index i = 0; i < M; ++i)
            {
                const auto o = ura::output_update(y(i), p(i), mu_p(i), sigma_w2);
                mu_z(i) = o.mu_z;
                // s = (z0 - p) / mu_p, mu_s = (1 - mu_z / mu_p) / mu_p
                const double s_new = (o.z0 - p(i)) / mu_p(i);
                const double mus_new = (1.0 - o.mu_z / mu_p(i)) / mu_p(i);
                s(i) = beta * s_new + (1.0 - beta) * s(i);
                mu_s(i) = std::max(beta * mus_new + (1.0 - beta) * mu_s(i), floor);
            }
            const Eigen::VectorXd prec = A2.transpose() * mu_s;
            for (Eigen::Index k = 0; k < K; ++k)
                mu_r(k) = std::max(1.0 / std::max(prec(k), floor), floor);
            r = x + mu_r.cwiseProduct(A.transpose() * s);

            if (learn_w && learn)
            {
                double acc = 0.0;
                for (Eigen::Index i = 0; i < M; ++i)
                    acc += (y(i) - z(i)) * (y(i) - z(i)) + mu_z(i);
                sigma_w2 = std::max(acc / double(M), floor);
            }

            std::vector<double> total(N, 0.0);
            for (Eigen::Index k = 0; k < K; ++k)
            {
                llr_out(k) = ura::llr_component(r(k), mu_r(k), sigma_x);
                total[group(k)] += llr_out(k);
            }
            const double logit = std::log(lambda / (1.0 - lambda));
            for (Eigen::Index k = 0; k < K; ++k)
            {
                llr_in(k) = logit + total[group(k)] - llr_out(k);
                rho(k) = 1.0 / (1.0 + std::exp(-llr_in(k)));
            }
            ++t;
        }

        // Library component index (q * N + j) for oracle component k.
        std::size_t library_component(Eigen::Index k) const
        {
            const std::size_t C = N * Mr, kk = std::size_t(k);
            const std::size_t part = kk / C, rem = kk % C, j = rem / Mr, m = rem % Mr;
            return (part * Mr + m) * N + j;
        }

        // Library measurement index ((part * Mr + m) * n0 + t) for oracle measurement i.
        std::size_t library_measurement(Eigen::Index i) const
        {
            const std::size_t R = n0 * Mr, ii = std::size_t(i);
            const std::size_t part = ii / R, rem = ii % R, t_ = rem / Mr, m = rem % Mr;
            return (part * Mr + m) * n0 + t_;
        }
    };

    /// Exhaustive minimum over all permutations; ties keep the lexicographically first.
    inline std::pair<std::vector<std::size_t>, double> brute_force_min(const Eigen::MatrixXd &cost)
    {
        const std::size_t n = std::size_t(cost.rows());
        std::vector<std::size_t> perm(n), best;
        std::iota(perm.begin(), perm.end(), std::size_t{0});
        double best_cost = std::numeric_limits<double>::infinity();
        do
        {
            double c = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                c += cost(Eigen::Index(i), Eigen::Index(perm[i]));
            if (c < best_cost)
            {
                best_cost = c;
                best = perm;
            }
        } while (std::next_permutation(perm.begin(), perm.end()));
        return {best, best_cost};
    }

    /// Relative error ||a - b|| / ||b|| with an absolute guard for zero references.
    inline double rel_err(const Eigen::VectorXd &a, const Eigen::VectorXd &b)
    {
        const double nb = b.norm();
        return (a - b).norm() / std::max(nb, 1e-300);
    }
}
