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
#include <vector>

#include <Eigen/Core>

#include "ura/types.hpp"

namespace ura
{
    struct GmmConfig
    {
        double tol = 1e-8;          // stop when |dLLF| < tol |LLF|
        unsigned max_iters = 200;
        bool diagonal = false;      // diagonal covariances instead of full
        double cov_floor_rel = 1e-6; // relative to the average per-dimension variance
        double collapse_weight = 1e-6;

        void validate() const;
    };

    /// Gaussian mixture fitted by EM. `points` holds one observation per row.
    struct GmmModel
    {
        RVec weights;
        std::vector<Eigen::VectorXd> means;
        std::vector<Eigen::MatrixXd> covariances;
        Eigen::MatrixXd membership; // N x K, rows sum to one

        // Objective per E-step: log-likelihood minus the covariance penalty
        // (cov_floor * N / 2) sum_k tr(Sigma_k^-1). Nondecreasing between reseeds.
        RVec objective;
        double log_likelihood = 0.0; // unpenalized, at the final parameters
        double cov_floor = 0.0;
        unsigned iterations = 0;
        unsigned reseeds = 0;
        bool converged = false;
    };

    /// k-means++ seeding: the first centre is uniform, later ones are drawn with
    /// probability proportional to the squared distance to the nearest chosen centre.
    std::vector<std::size_t> kmeans_pp_seeds(const Eigen::MatrixXd &points, std::size_t K, Rng &rng);

    /// EM for a K-component mixture. The M-step adds cov_floor * N / N_k to every
    /// covariance diagonal, which is the exact maximizer of the penalized objective and
    /// keeps all eigenvalues >= cov_floor.
    GmmModel gmm_em(const Eigen::MatrixXd &points, std::size_t K, const GmmConfig &cfg, Rng &rng);

    /// Log-likelihood of the data and the N x K responsibilities under given parameters.
    double gmm_e_step(const Eigen::MatrixXd &points, const RVec &weights, const std::vector<Eigen::VectorXd> &means,
                      const std::vector<Eigen::MatrixXd> &covariances, Eigen::MatrixXd &membership);
}
