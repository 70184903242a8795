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
#include <memory>

#include "ura/types.hpp"

namespace ura
{
    /// In-place length-n complex DFT pair backed by FFTW. Plans are created once and
    /// executed on caller buffers, so a single FftPlan may be shared between threads.
    /// The inverse is unnormalized (matches FFTW's convention).
    class FftPlan
    {
    public:
        explicit FftPlan(std::size_t n);
        ~FftPlan();
        FftPlan(const FftPlan &) = delete;
        FftPlan &operator=(const FftPlan &) = delete;

        std::size_t size() const { return n_; }
        void forward(cplx *data) const;
        void inverse(cplx *data) const;

    private:
        std::size_t n_;
        void *fwd_ = nullptr;
        void *inv_ = nullptr;
    };
}
