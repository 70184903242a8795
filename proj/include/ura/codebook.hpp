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
#include <cstdint>
#include <memory>
#include <span>

#include "ura/fft.hpp"
#include "ura/types.hpp"

namespace ura
{
    struct CodebookConfig
    {
        unsigned J = 10;              // bits per slot; the codebook has 2^J columns
        std::size_t n0 = 256;         // channel uses per slot (rows)
        double transmit_power = 1.0;  // Pt in watts, per-entry variance of the generator
        std::uint64_t seed = 1;
        unsigned max_J = 24;          // memory guard

        void validate() const;
    };

    /// The first `rows` rows of an n x n circulant C[i][j] = g[(i - j) mod n].
    ///
    /// Products with the operator and its adjoint cost one length-n FFT pair. The
    /// `*_spectrum` variants take an input that is already transformed so a single
    /// forward FFT can feed several operators that share a length.
    class PartialCirculant
    {
    public:
        PartialCirculant() = default;
        PartialCirculant(CVec generator, std::size_t rows, std::shared_ptr<const FftPlan> plan);

        std::size_t rows() const { return rows_; }
        std::size_t cols() const { return generator_.size(); }
        const CVec &generator() const { return generator_; }
        const FftPlan &plan() const { return *plan_; }

        /// out[0..rows) = C v. `work` is resized to cols().
        void apply(std::span<const cplx> v, std::span<cplx> out, CVec &work) const;
        /// out[0..cols) = C^H [u; 0].
        void apply_adjoint(std::span<const cplx> u, std::span<cplx> out, CVec &work) const;

        /// Forward DFT of v (length cols) into work.
        void transform_input(std::span<const cplx> v, CVec &work) const;
        /// Forward DFT of the zero-padded length-rows vector u into work.
        void transform_measurement(std::span<const cplx> u, CVec &work) const;
        void apply_spectrum(std::span<const cplx> v_hat, std::span<cplx> out, CVec &work) const;
        void apply_adjoint_spectrum(std::span<const cplx> u_hat, std::span<cplx> out, CVec &work) const;

    private:
        CVec generator_;
        CVec spectrum_; // DFT(generator) / n, so the unnormalized inverse needs no rescale
        std::size_t rows_ = 0;
        std::shared_ptr<const FftPlan> plan_;
    };

    /// Common complex Gaussian codebook with circulant structure. Column j is rows
    /// 0..n0-1 of the generator cyclically shifted by j. Immutable after construction.
    class Codebook
    {
    public:
        explicit Codebook(const CodebookConfig &cfg);

        const CodebookConfig &config() const { return cfg_; }
        std::size_t n0() const { return cfg_.n0; }
        std::size_t size() const { return op_.cols(); }
        const CVec &generator() const { return op_.generator(); }
        CVec generator_fft() const;

        CVec column(std::size_t j) const;
        CVec matvec(std::span<const cplx> v) const;
        CVec adjoint_matvec(std::span<const cplx> u) const;

        /// Codebook as a linear operator.
        const PartialCirculant &op() const { return op_; }
        /// Entrywise (Re A)^2 and (Im A)^2; both are partial circulants of the same shape.
        const PartialCirculant &re_squared() const { return re_sq_; }
        const PartialCirculant &im_squared() const { return im_sq_; }
        /// Sample averages of (Re g)^2 and (Im g)^2 over the generator.
        double mean_re_squared() const { return mean_re_sq_; }
        double mean_im_squared() const { return mean_im_sq_; }

    private:
        CodebookConfig cfg_;
        PartialCirculant op_;
        PartialCirculant re_sq_;
        PartialCirculant im_sq_;
        double mean_re_sq_ = 0.0;
        double mean_im_sq_ = 0.0;
    };

    inline Codebook build_codebook(const CodebookConfig &cfg) { return Codebook(cfg); }
}
