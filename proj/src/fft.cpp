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

#include "ura/fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <stdexcept>

namespace ura
{
    namespace
    {
        // fftw planner calls are not thread-safe
        std::mutex &planner_mutex()
        {
            static std::mutex m;
            return m;
        }
    }

    FftPlan::FftPlan(std::size_t n) : n_(n)
    {
        if (n == 0)
            throw std::invalid_argument("FftPlan: length must be positive");
        std::lock_guard lock(planner_mutex());
        auto *buf = fftw_alloc_complex(n);
        const int len = static_cast<int>(n);
        const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
        fwd_ = fftw_plan_dft_1d(len, buf, buf, FFTW_FORWARD, flags);
        inv_ = fftw_plan_dft_1d(len, buf, buf, FFTW_BACKWARD, flags);
        fftw_free(buf);
        if (!fwd_ || !inv_)
            throw std::runtime_error("FftPlan: FFTW planning failed");
    }

    FftPlan::~FftPlan()
    {
        std::lock_guard lock(planner_mutex());
        if (fwd_)
            fftw_destroy_plan(static_cast<fftw_plan>(fwd_));
        if (inv_)
            fftw_destroy_plan(static_cast<fftw_plan>(inv_));
    }

    void FftPlan::forward(cplx *data) const
    {
        auto *p = reinterpret_cast<fftw_complex *>(data);
        fftw_execute_dft(static_cast<fftw_plan>(fwd_), p, p);
    }

    void FftPlan::inverse(cplx *data) const
    {
        auto *p = reinterpret_cast<fftw_complex *>(data);
        fftw_execute_dft(static_cast<fftw_plan>(inv_), p, p);
    }
}
