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

#include "ura/denoiser.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "ura/special_functions.hpp"

namespace ura
{
    namespace
    {
        void require_finite(double v, const char *what)
        {
            if (!std::isfinite(v))
                throw std::invalid_argument(std::string("denoiser: nonfinite ") + what);
        }

        void check_inputs(double r, double mu_r, double sigma_x)
        {
            require_finite(r, "r");
            require_finite(mu_r, "mu_r");
            require_finite(sigma_x, "sigma_x");
            if (!(mu_r > 0.0))
                throw std::invalid_argument("denoiser: mu_r must be positive");
            if (!(sigma_x > 0.0))
                throw std::invalid_argument("denoiser: sigma_x must be positive");
        }

    }

    HalfLinePair half_line_pair(double r, double mu_r, double sigma_x)
    {
        const double sqrt_mu = std::sqrt(mu_r);
        const double shift = mu_r / sigma_x;
        // plus side: x ~ N(gamma+, mu_r) on x > 0, gamma+ = r - mu_r/sigma
        // minus side: x ~ N(gamma-, mu_r) on x < 0, gamma- = r + mu_r/sigma
        const TailStats plus = upper_tail((shift - r) / sqrt_mu);
        const TailStats minus = upper_tail((r + shift) / sqrt_mu);
        // log(sqrt(2 pi mu) nu / (2 sigma)) = log(sqrt(mu) R(t) / (2 sigma))
        const double base = 0.5 * std::log(mu_r) - std::log(2.0 * sigma_x);
        return {base + plus.log_mills,  base + minus.log_mills,  sqrt_mu * plus.excess,
                -sqrt_mu * minus.excess, mu_r * plus.variance, mu_r * minus.variance};
    }

    LaplacePosterior posterior_from_pair(const HalfLinePair &h, double prior_llr, double variance_floor)
    {
        LaplacePosterior out{};
        out.llr = log_add_exp(h.ell_plus, h.ell_minus);
        if (prior_llr == -INFINITY)
        {
            out.mean = 0.0;
            out.variance = variance_floor;
            return out;
        }

        // Mixture weights relative to the spike: nu+/theta, nu-/theta and 1, with
        // log(nu/theta) = ell + log(rho / (1 - rho)).
        const double lp = h.ell_plus, lm = h.ell_minus, lz = -prior_llr;
        const double top = std::max({lp, lm, lz});
        const double w_plus = std::exp(lp - top);
        const double w_minus = std::exp(lm - top);
        const double w_zero = std::exp(lz - top);
        const double inv = 1.0 / (w_plus + w_minus + w_zero);
        const double p_plus = w_plus * inv;
        const double p_minus = w_minus * inv;
        const double p_zero = w_zero * inv;

        out.mean = p_plus * h.mean_plus + p_minus * h.mean_minus;
        const double dp = h.mean_plus - out.mean;
        const double dm = h.mean_minus - out.mean;
        const double var =
            p_plus * (h.var_plus + dp * dp) + p_minus * (h.var_minus + dm * dm) + p_zero * out.mean * out.mean;
        out.variance = std::max(var, variance_floor);
        out.active_prob = p_plus + p_minus;
        out.abs_mean_active = p_plus * h.mean_plus - p_minus * h.mean_minus;
        return out;
    }

    DenoiserIntermediates denoiser_intermediates(double r, double mu_r, double rho, double sigma_x)
    {
        check_inputs(r, mu_r, sigma_x);
        DenoiserIntermediates d{};
        d.theta = 2.0 * sigma_x * (1.0 - rho) / (rho * std::sqrt(2.0 * std::numbers::pi * mu_r));
        d.alpha_minus = -r / sigma_x - mu_r / (2.0 * sigma_x * sigma_x);
        d.alpha_plus = r / sigma_x - mu_r / (2.0 * sigma_x * sigma_x);
        d.gamma_minus = r + mu_r / sigma_x;
        d.gamma_plus = r - mu_r / sigma_x;
        const double s = std::sqrt(2.0 * mu_r);
        // Q(x) e^{x^2/2} = erfcx(x / sqrt2) / 2
        d.nu_plus = 0.5 * erfcx(-d.gamma_plus / s);
        d.nu_minus = 0.5 * erfcx(d.gamma_minus / s);
        return d;
    }

    LaplacePosterior laplace_posterior(double r, double mu_r, double rho, double sigma_x, double variance_floor)
    {
        check_inputs(r, mu_r, sigma_x);
        require_finite(rho, "rho");
        if (rho < 0.0 || rho > 1.0)
            throw std::invalid_argument("denoiser: rho must lie in [0, 1]");
        return laplace_posterior_unchecked(r, mu_r, rho, sigma_x, variance_floor);
    }

    LaplacePosterior laplace_posterior_unchecked(double r, double mu_r, double rho, double sigma_x,
                                                 double variance_floor)
    {
        const double prior_llr = rho == 0.0 ? -INFINITY : std::log(rho) - std::log1p(-rho);
        return posterior_from_pair(half_line_pair(r, mu_r, sigma_x), prior_llr, variance_floor);
    }

    ScalarMoments denoise(double r, double mu_r, double rho, double sigma_x, double variance_floor)
    {
        const auto p = laplace_posterior(r, mu_r, rho, sigma_x, variance_floor);
        return {p.mean, p.variance};
    }

    double llr_component(double r, double mu_r, double sigma_x)
    {
        check_inputs(r, mu_r, sigma_x);
        return llr_component_unchecked(r, mu_r, sigma_x);
    }

    double llr_component_unchecked(double r, double mu_r, double sigma_x)
    {
        const auto h = half_line_pair(r, mu_r, sigma_x);
        return log_add_exp(h.ell_plus, h.ell_minus);
    }

    OutputEstimate output_update(double y, double p, double mu_p, double sigma_w2)
    {
        const double denom = mu_p + sigma_w2;
        if (!(denom > 0.0))
            return {y, 0.0};
        return {(mu_p * y + sigma_w2 * p) / denom, mu_p * sigma_w2 / denom};
    }

    double activity_posterior(double llr_sum, double lambda)
    {
        // lambda / (lambda + (1 - lambda) e^{-s}) = logistic(s + logit(lambda))
        return logistic(llr_sum + std::log(lambda) - std::log1p(-lambda));
    }

    RVec activity_posterior(std::span<const double> llr_sums, double lambda)
    {
        RVec out(llr_sums.size());
        std::transform(llr_sums.begin(), llr_sums.end(), out.begin(),
                       [lambda](double s) { return activity_posterior(s, lambda); });
        return out;
    }

    double ml_sigma_w(std::span<const double> y, std::span<const double> z, std::span<const double> mu_z)
    {
        if (y.empty())
            throw std::invalid_argument("ml_sigma_w: empty input");
        if (z.size() != y.size() || mu_z.size() != y.size())
            throw std::invalid_argument("ml_sigma_w: length mismatch");
        double acc = 0.0;
        for (std::size_t i = 0; i < y.size(); ++i)
        {
            const double e = y[i] - z[i];
            acc += e * e + mu_z[i];
        }
        return acc / static_cast<double>(y.size());
    }

    LaplaceEmTerms laplace_em_terms(double r, double mu_r, double rho, double sigma_x)
    {
        const auto d = denoiser_intermediates(r, mu_r, rho, sigma_x);
        const double root = std::sqrt(2.0 * std::numbers::pi * mu_r);
        LaplaceEmTerms t{};
        t.psi = rho / (2.0 * sigma_x) * (d.nu_plus + d.nu_minus) + (1.0 - rho) / root;
        t.kappa = d.gamma_plus * d.nu_plus - d.gamma_minus * d.nu_minus + 2.0 * mu_r / root;
        return t;
    }

    SigmaUpdate em_sigma_x_step(std::span<const double> r, std::span<const double> mu_r,
                                std::span<const double> rho, double sigma_x, double lo, double hi)
    {
        if (r.size() != mu_r.size() || r.size() != rho.size())
            throw std::invalid_argument("em_sigma_x_step: length mismatch");
        if (!(sigma_x > 0.0))
            throw std::invalid_argument("em_sigma_x_step: sigma_x must be positive");

        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < r.size(); ++i)
        {
            if (rho[i] <= 0.0)
                continue;
            num += laplace_posterior(r[i], mu_r[i], std::min(rho[i], 1.0), sigma_x).abs_mean_active;
            den += rho[i];
        }
        if (!(den > 0.0))
            return {sigma_x, true};
        return {std::clamp(num / den, lo, hi), false};
    }
}
