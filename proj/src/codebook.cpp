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

#include "ura/codebook.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace ura
{
    void CodebookConfig::validate() const
    {
        if (J == 0)
            throw std::invalid_argument("Codebook: J must be positive");
        if (J > max_J)
            throw std::invalid_argument("Codebook: J = " + std::to_string(J) + " exceeds the limit " +
                                        std::to_string(max_J));
        if (n0 == 0)
            throw std::invalid_argument("Codebook: n0 must be positive");
        if (n0 > (std::size_t{1} << J))
            throw std::invalid_argument("Codebook: n0 must not exceed 2^J");
        if (!(transmit_power > 0.0) || !std::isfinite(transmit_power))
            throw std::invalid_argument("Codebook: transmit power must be positive");
    }

    PartialCirculant::PartialCirculant(CVec generator, std::size_t rows, std::shared_ptr<const FftPlan> plan)
        : generator_(std::move(generator)), rows_(rows), plan_(std::move(plan))
    {
        const std::size_t n = generator_.size();
        if (!plan_ || plan_->size() != n)
            throw std::invalid_argument("PartialCirculant: plan length mismatch");
        if (rows_ == 0 || rows_ > n)
            throw std::invalid_argument("PartialCirculant: invalid row count");
        spectrum_ = generator_;
        plan_->forward(spectrum_.data());
        const double inv_n = 1.0 / static_cast<double>(n);
        for (auto &s : spectrum_)
            s *= inv_n;
    }

    void PartialCirculant::transform_input(std::span<const cplx> v, CVec &work) const
    {
        if (v.size() != cols())
            throw std::invalid_argument("PartialCirculant: input length must equal column count");
        work.assign(v.begin(), v.end());
        plan_->forward(work.data());
    }

    void PartialCirculant::transform_measurement(std::span<const cplx> u, CVec &work) const
    {
        if (u.size() != rows_)
            throw std::invalid_argument("PartialCirculant: input length must equal row count");
        work.assign(cols(), cplx{});
        std::copy(u.begin(), u.end(), work.begin());
        plan_->forward(work.data());
    }

    void PartialCirculant::apply_spectrum(std::span<const cplx> v_hat, std::span<cplx> out, CVec &work) const
    {
        const std::size_t n = cols();
        work.resize(n);
        for (std::size_t k = 0; k < n; ++k)
            work[k] = v_hat[k] * spectrum_[k];
        plan_->inverse(work.data());
        std::copy_n(work.begin(), rows_, out.begin());
    }

    void PartialCirculant::apply_adjoint_spectrum(std::span<const cplx> u_hat, std::span<cplx> out, CVec &work) const
    {
        const std::size_t n = cols();
        work.resize(n);
        for (std::size_t k = 0; k < n; ++k)
            work[k] = u_hat[k] * std::conj(spectrum_[k]);
        plan_->inverse(work.data());
        std::copy_n(work.begin(), n, out.begin());
    }

    void PartialCirculant::apply(std::span<const cplx> v, std::span<cplx> out, CVec &work) const
    {
        if (out.size() < rows_)
            throw std::invalid_argument("PartialCirculant: output too short");
        transform_input(v, work);
        const std::size_t n = cols();
        for (std::size_t k = 0; k < n; ++k)
            work[k] *= spectrum_[k];
        plan_->inverse(work.data());
        std::copy_n(work.begin(), rows_, out.begin());
    }

    void PartialCirculant::apply_adjoint(std::span<const cplx> u, std::span<cplx> out, CVec &work) const
    {
        if (out.size() < cols())
            throw std::invalid_argument("PartialCirculant: output too short");
        transform_measurement(u, work);
        const std::size_t n = cols();
        for (std::size_t k = 0; k < n; ++k)
            work[k] *= std::conj(spectrum_[k]);
        plan_->inverse(work.data());
        std::copy_n(work.begin(), n, out.begin());
    }

    Codebook::Codebook(const CodebookConfig &cfg) : cfg_(cfg)
    {
        cfg_.validate();
        const std::size_t n = std::size_t{1} << cfg_.J;

        Rng rng(cfg_.seed);
        CVec g(n);
        for (auto &x : g)
            x = complex_normal(rng, cfg_.transmit_power);

        CVec re_sq(n), im_sq(n);
        double sum_re = 0.0, sum_im = 0.0;
        for (std::size_t k = 0; k < n; ++k)
        {
            re_sq[k] = g[k].real() * g[k].real();
            im_sq[k] = g[k].imag() * g[k].imag();
            sum_re += re_sq[k].real();
            sum_im += im_sq[k].real();
        }
        mean_re_sq_ = sum_re / static_cast<double>(n);
        mean_im_sq_ = sum_im / static_cast<double>(n);

        auto plan = std::make_shared<const FftPlan>(n);
        op_ = PartialCirculant(std::move(g), cfg_.n0, plan);
        re_sq_ = PartialCirculant(std::move(re_sq), cfg_.n0, plan);
        im_sq_ = PartialCirculant(std::move(im_sq), cfg_.n0, plan);
    }

    CVec Codebook::generator_fft() const
    {
        CVec out = generator();
        op_.plan().forward(out.data());
        return out;
    }

    CVec Codebook::column(std::size_t j) const
    {
        const std::size_t n = size();
        if (j >= n)
            throw std::out_of_range("Codebook::column: index " + std::to_string(j) + " out of range");
        const auto &g = generator();
        CVec col(n0());
        for (std::size_t i = 0; i < n0(); ++i)
            col[i] = g[(i + n - j) % n];
        return col;
    }

    CVec Codebook::matvec(std::span<const cplx> v) const
    {
        if (v.size() != size())
            throw std::invalid_argument("Codebook::matvec: expected a vector of length 2^J");
        CVec out(n0()), work;
        op_.apply(v, out, work);
        return out;
    }

    CVec Codebook::adjoint_matvec(std::span<const cplx> u) const
    {
        if (u.size() != n0())
            throw std::invalid_argument("Codebook::adjoint_matvec: expected a vector of length n0");
        CVec out(size()), work;
        op_.apply_adjoint(u, out, work);
        return out;
    }
}
