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

#include <span>

#include "ura/types.hpp"

// Scalar building blocks of the group-sparse message passing decoder: the
// Bernoulli-Laplacian denoiser, the per-component activity LLR, the Gaussian
// output channel and the hyperparameter estimators.
namespace ura
{
    inline constexpr double kDefaultVarianceFloor = 1e-12;

    /// Intermediate quantities of the Bernoulli-Laplacian denoiser, evaluated as
    /// written (nu terms via erfcx). nu_plus/nu_minus overflow to +inf once the
    /// corresponding threshold drops below about -37.
    struct DenoiserIntermediates
    {
        double theta;
        double alpha_minus;
        double alpha_plus;
        double gamma_minus;
        double gamma_plus;
        double nu_plus;
        double nu_minus;
    };

    DenoiserIntermediates denoiser_intermediates(double r, double mu_r, double rho, double sigma_x);

    /// Posterior of x under prior (1 - rho) delta(x) + rho Laplace(x; sigma_x) and
    /// likelihood N(r; x, mu_r).
    ///
    /// Everything is computed from the three mixture weights nu+, nu-, theta in the
    /// log domain, so no term overflows even when |gamma|/sqrt(mu_r) is large.
    struct LaplacePosterior
    {
        double mean;
        double variance;         // floored at variance_floor
        double llr;              // log p(r | active) / p(r | inactive)
        double active_prob;      // P(x != 0 | r)
        double abs_mean_active;  // E[|x| 1{x != 0} | r]
    };

    LaplacePosterior laplace_posterior(double r, double mu_r, double rho, double sigma_x,
                                       double variance_floor = kDefaultVarianceFloor);

    /// Same as laplace_posterior without input validation; for inner loops that have
    /// already checked their state.
    LaplacePosterior laplace_posterior_unchecked(double r, double mu_r, double rho, double sigma_x,
                                                 double variance_floor);

    /// The two half-line (x > 0, x < 0) components of the active posterior. Depends on
    /// (r, mu_r, sigma_x) only, so one evaluation serves both the LLR and the denoiser.
    struct HalfLinePair
    {
        double ell_plus;   // log(sqrt(2 pi mu_r) nu+ / (2 sigma_x))
        double ell_minus;
        double mean_plus;  // conditional mean on x > 0
        double mean_minus; // conditional mean on x < 0
        double var_plus;
        double var_minus;
    };

    HalfLinePair half_line_pair(double r, double mu_r, double sigma_x);

    /// Posterior given the half-line summary and the prior log-odds log(rho / (1 - rho)).
    LaplacePosterior posterior_from_pair(const HalfLinePair &h, double prior_llr, double variance_floor);

    struct ScalarMoments
    {
        double mean;
        double variance;
    };

    ScalarMoments denoise(double r, double mu_r, double rho, double sigma_x,
                          double variance_floor = kDefaultVarianceFloor);

    /// Per-component activity LLR log(sqrt(2 pi mu_r)/(2 sigma_x) (nu+ + nu-)).
    double llr_component(double r, double mu_r, double sigma_x);
    double llr_component_unchecked(double r, double mu_r, double sigma_x);

    struct OutputEstimate
    {
        double z0;
        double mu_z;
    };

    /// Posterior mean and variance of z given y = z + N(0, sigma_w2) and z ~ N(p, mu_p).
    OutputEstimate output_update(double y, double p, double mu_p, double sigma_w2);

    /// P(eps_j = 1 | y) = lambda / (lambda + (1 - lambda) exp(-llr_sum)).
    double activity_posterior(double llr_sum, double lambda);
    RVec activity_posterior(std::span<const double> llr_sums, double lambda);

    /// ML noise variance (1/M) sum_i (y_i - z_i)^2 + mu_z_i.
    double ml_sigma_w(std::span<const double> y, std::span<const double> z, std::span<const double> mu_z);

    /// psi and kappa of the sigma_x EM update, both multiplied by exp(r^2 / (2 mu_r)).
    /// The ratio rho * kappa / (2 sigma psi) is the posterior mean of |x| 1{x != 0}.
    struct LaplaceEmTerms
    {
        double psi;
        double kappa;
    };

    LaplaceEmTerms laplace_em_terms(double r, double mu_r, double rho, double sigma_x);

    struct SigmaUpdate
    {
        double sigma;
        bool degenerate = false; // sum of rho was zero; sigma returned unchanged
    };

    /// One EM step for the Laplacian scale:
    /// sigma_{d+1} = (sum rho)^-1 sum rho kappa / (2 sigma_d psi), clamped to [lo, hi].
    SigmaUpdate em_sigma_x_step(std::span<const double> r, std::span<const double> mu_r,
                                std::span<const double> rho, double sigma_x, double lo, double hi);
}
