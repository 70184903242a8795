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

#include "ura/stitching.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace ura
{
    double estimate_large_scale(std::span<const double> h, std::size_t Mr)
    {
        if (Mr == 0)
            throw std::invalid_argument("estimate_large_scale: Mr must be positive");
        double acc = 0.0;
        for (double v : h)
            acc += v * v;
        return acc / static_cast<double>(Mr);
    }

    ChannelPointSet build_point_set(std::span<const SlotEstimate> slots, double gain_floor)
    {
        ChannelPointSet set;
        set.L = slots.size();
        if (set.L == 0)
            throw std::invalid_argument("build_point_set: no slots");
        set.Ka = slots[0].channel_estimates.size();
        if (set.Ka == 0)
            throw std::invalid_argument("build_point_set: empty slot");
        const std::size_t D = slots[0].channel_estimates[0].size();
        if (D == 0 || D % 2 != 0)
            throw std::invalid_argument("build_point_set: channel length must be 2 Mr");

        const std::size_t total = set.L * set.Ka;
        set.points.resize(Eigen::Index(total), Eigen::Index(D));
        set.gain.resize(total);
        set.degenerate.assign(total, 0);
        for (std::size_t l = 0; l < set.L; ++l)
        {
            if (slots[l].channel_estimates.size() != set.Ka)
                throw std::invalid_argument("build_point_set: slot " + std::to_string(l) + " has a different K_a");
            for (std::size_t k = 0; k < set.Ka; ++k)
            {
                const auto &h = slots[l].channel_estimates[k];
                if (h.size() != D)
                    throw std::invalid_argument("build_point_set: inconsistent channel length");
                const std::size_t n = l * set.Ka + k;
                const double g = estimate_large_scale(h, D / 2);
                set.gain[n] = g;
                double scale = 1.0;
                if (g > gain_floor)
                    scale = 1.0 / std::sqrt(g);
                else
                    set.degenerate[n] = 1;
                for (std::size_t d = 0; d < D; ++d)
                    set.points(Eigen::Index(n), Eigen::Index(d)) = h[d] * scale;
            }
        }
        return set;
    }

    Assignment assign_slot(const Eigen::MatrixXd &block, double p_floor)
    {
        const Eigen::MatrixXd cost = -(block.array().max(p_floor)).log().matrix();
        return hungarian(cost);
    }

    AssignmentResult constrained_assign(const Eigen::MatrixXd &P, std::size_t L, std::size_t Ka, double p_floor)
    {
        if (Ka == 0 || L == 0)
            throw std::invalid_argument("constrained_assign: L and K_a must be positive");
        if (std::size_t(P.rows()) != L * Ka || std::size_t(P.cols()) != Ka)
            throw std::invalid_argument("constrained_assign: P must be (L*K_a) x K_a");
        for (Eigen::Index n = 0; n < P.rows(); ++n)
        {
            const auto row = P.row(n);
            if (!row.allFinite() || row.minCoeff() < -1e-6 || std::abs(row.sum() - 1.0) > 1e-6)
                throw std::invalid_argument("constrained_assign: row " + std::to_string(n) +
                                            " of P is not a probability vector");
        }

        AssignmentResult out;
        for (std::size_t l = 0; l < L; ++l)
        {
            const Eigen::MatrixXd block = P.block(Eigen::Index(l * Ka), 0, Eigen::Index(Ka), Eigen::Index(Ka));
            const auto a = assign_slot(block, p_floor);
            out.cluster.push_back(a.perm);
            out.objective.push_back(-a.cost);
        }
        return out;
    }

    std::vector<ChunkIndexSeq> stitch(const AssignmentResult &assignments,
                                      const std::vector<std::vector<Index>> &slot_indices)
    {
        const std::size_t L = assignments.cluster.size();
        if (slot_indices.size() != L)
            throw std::invalid_argument("stitch: slot count mismatch");
        const std::size_t Ka = L ? assignments.cluster[0].size() : 0;
        std::vector<ChunkIndexSeq> out(Ka);
        for (auto &seq : out)
            seq.indices.resize(L);
        for (std::size_t l = 0; l < L; ++l)
        {
            if (assignments.cluster[l].size() != Ka || slot_indices[l].size() != Ka)
                throw std::invalid_argument("stitch: slot " + std::to_string(l) + " does not have K_a entries");
            for (std::size_t k = 0; k < Ka; ++k)
                out[assignments.cluster[l][k]].indices[l] = slot_indices[l][k];
        }
        return out;
    }
}
