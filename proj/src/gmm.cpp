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

#include "ura/gmm.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ura/special_functions.hpp"

namespace ura
{
    void GmmConfig::validate() const
    {
        if (!(tol > 0.0))
            throw std::invalid_argument("gmm: tol must be positive");
        if (max_iters < 1)
            throw std::invalid_argument("gmm: max_iters must be at least 1");
        if (!(cov_floor_rel > 0.0))
            throw std::invalid_argument("gmm: cov_floor_rel must be positive");
    }

    std::vector<std::size_t> kmeans_pp_seeds(const Eigen::MatrixXd &points, std::size_t K, Rng &rng)
    {
        const std::size_t N = static_cast<std::size_t>(points.rows());
        if (K == 0 || K > N)
            throw std::invalid_argument("kmeans++: need 1 <= K <= number of points");
        std::vector<std::size_t> seeds;
        seeds.push_back(std::uniform_int_distribution<std::size_t>(0, N - 1)(rng));
        RVec d2(N, std::numeric_limits<double>::infinity());
        while (seeds.size() < K)
        {
            const auto c = points.row(Eigen::Index(seeds.back()));
            double total = 0.0;
            for (std::size_t n = 0; n < N; ++n)
            {
                d2[n] = std::min(d2[n], (points.row(Eigen::Index(n)) - c).squaredNorm());
                total += d2[n];
            }
            std::size_t pick = 0;
            if (total > 0.0)
            {
                double u = std::uniform_real_distribution<double>(0.0, total)(rng);
                pick = N - 1;
                for (std::size_t n = 0; n < N; ++n)
                {
                    if (u < d2[n])
                    {
                        pick = n;
                        break;
                    }
                    u -= d2[n];
                }
                // rounding can land on an already chosen point
                while (d2[pick] == 0.0 && pick > 0)
                    --pick;
            }
            else
                pick = std::uniform_int_distribution<std::size_t>(0, N - 1)(rng);
            seeds.push_back(pick);
        }
        return seeds;
    }

    double gmm_e_step(const Eigen::MatrixXd &points, const RVec &weights, const std::vector<Eigen::VectorXd> &means,
                      const std::vector<Eigen::MatrixXd> &covariances, Eigen::MatrixXd &membership)
    {
        const Eigen::Index N = points.rows(), D = points.cols();
        const std::size_t K = weights.size();
        membership.resize(N, Eigen::Index(K));
        for (std::size_t k = 0; k < K; ++k)
        {
            const Eigen::LLT<Eigen::MatrixXd> llt(covariances[k]);
            if (llt.info() != Eigen::Success)
                throw std::runtime_error("gmm: covariance is not positive definite");
            const Eigen::MatrixXd L = llt.matrixL();
            const double log_det = 2.0 * L.diagonal().array().log().sum();
            const double base = std::log(weights[k]) - 0.5 * log_det - double(D) * kLogSqrt2Pi;
            Eigen::MatrixXd diff = (points.rowwise() - means[k].transpose()).transpose();
            L.triangularView<Eigen::Lower>().solveInPlace(diff);
            membership.col(Eigen::Index(k)) = (base - 0.5 * diff.colwise().squaredNorm().array()).transpose();
        }
        double llf = 0.0;
        for (Eigen::Index n = 0; n < N; ++n)
        {
            const double mx = membership.row(n).maxCoeff();
            const double lse = mx + std::log((membership.row(n).array() - mx).exp().sum());
            membership.row(n) = (membership.row(n).array() - lse).exp();
            llf += lse;
        }
        return llf;
    }

    namespace
    {
        double penalty(const std::vector<Eigen::MatrixXd> &cov, double floor, double N)
        {
            double tr = 0.0;
            for (const auto &S : cov)
                tr += Eigen::LLT<Eigen::MatrixXd>(S).solve(Eigen::MatrixXd::Identity(S.rows(), S.cols())).trace();
            return 0.5 * floor * N * tr;
        }
    }

    GmmModel gmm_em(const Eigen::MatrixXd &points, std::size_t K, const GmmConfig &cfg, Rng &rng)
    {
        cfg.validate();
        const Eigen::Index N = points.rows(), D = points.cols();
        if (K == 0 || K > std::size_t(N))
            throw std::invalid_argument("gmm: need 1 <= K <= number of points");
        if (D == 0 || !points.allFinite())
            throw std::invalid_argument("gmm: points must be finite and nonempty");

        const Eigen::RowVectorXd mean = points.colwise().mean();
        const Eigen::VectorXd var = (points.rowwise() - mean).array().square().colwise().mean().transpose();
        double avg_var = var.mean();
        if (!(avg_var > 0.0))
            avg_var = 1.0;

        GmmModel m;
        m.cov_floor = cfg.cov_floor_rel * avg_var;
        const Eigen::MatrixXd init_cov =
            (var.array() + m.cov_floor).matrix().asDiagonal() * Eigen::MatrixXd::Identity(D, D);

        for (std::size_t s : kmeans_pp_seeds(points, K, rng))
        {
            m.means.push_back(points.row(Eigen::Index(s)).transpose());
            m.covariances.push_back(init_cov);
        }
        m.weights.assign(K, 1.0 / double(K));

        const double Nd = double(N);
        double prev = -std::numeric_limits<double>::infinity();
        for (unsigned it = 0; it < cfg.max_iters; ++it)
        {
            const double llf = gmm_e_step(points, m.weights, m.means, m.covariances, m.membership);
            const double obj = llf - penalty(m.covariances, m.cov_floor, Nd);
            m.objective.push_back(obj);
            m.iterations = it + 1;
            if (it > 0 && std::abs(obj - prev) < cfg.tol * std::abs(obj))
            {
                m.converged = true;
                break;
            }
            prev = obj;

            // M-step
            bool reseeded = false;
            for (std::size_t k = 0; k < K; ++k)
            {
                const auto r = m.membership.col(Eigen::Index(k));
                const double Nk = r.sum();
                if (Nk < cfg.collapse_weight)
                {
                    // Restart the component on the point farthest from every mean.
                    Eigen::Index far = 0;
                    double best = -1.0;
                    for (Eigen::Index n = 0; n < N; ++n)
                    {
                        double d = std::numeric_limits<double>::infinity();
                        for (const auto &mu : m.means)
                            d = std::min(d, (points.row(n).transpose() - mu).squaredNorm());
                        if (d > best)
                        {
                            best = d;
                            far = n;
                        }
                    }
                    m.means[k] = points.row(far).transpose();
                    m.covariances[k] = init_cov;
                    m.weights[k] = 1.0 / double(K);
                    ++m.reseeds;
                    reseeded = true;
                    continue;
                }
                m.weights[k] = Nk / Nd;
                m.means[k] = (points.transpose() * r) / Nk;
                const Eigen::MatrixXd diff = points.rowwise() - m.means[k].transpose();
                const double extra = m.cov_floor * Nd / Nk;
                if (cfg.diagonal)
                {
                    Eigen::VectorXd d = (diff.array().square().colwise() * r.array()).colwise().sum().transpose() / Nk;
                    m.covariances[k] = (d.array() + extra).matrix().asDiagonal() * Eigen::MatrixXd::Identity(D, D);
                }
                else
                {
                    Eigen::MatrixXd S = diff.transpose() * (diff.array().colwise() * r.array()).matrix() / Nk;
                    S = 0.5 * (S + S.transpose());
                    S.diagonal().array() += extra;
                    m.covariances[k] = std::move(S);
                }
            }
            if (reseeded)
            {
                double total = 0.0;
                for (double w : m.weights)
                    total += w;
                for (double &w : m.weights)
                    w /= total;
                prev = -std::numeric_limits<double>::infinity();
            }
        }
        m.log_likelihood = gmm_e_step(points, m.weights, m.means, m.covariances, m.membership);
        return m;
    }
}
