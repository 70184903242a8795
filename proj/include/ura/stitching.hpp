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
#include <span>
#include <vector>

#include <Eigen/Core>

#include "ura/encoder.hpp"
#include "ura/gmm.hpp"
#include "ura/hygamp.hpp"
#include "ura/hungarian.hpp"
#include "ura/types.hpp"

namespace ura
{
    inline constexpr double kMembershipFloor = 1e-300;

    /// g = ||h||^2 / Mr for a real-stacked channel [Re h; Im h].
    double estimate_large_scale(std::span<const double> h, std::size_t Mr);

    /// The L * K_a decoded channels, slot-major: point n belongs to slot n / K_a and is
    /// rank n % K_a in that slot's decode list.
    struct ChannelPointSet
    {
        Eigen::MatrixXd points; // one normalized channel per row
        std::size_t L = 0;
        std::size_t Ka = 0;
        RVec gain;
        std::vector<char> degenerate; // gain below the floor, left unscaled

        std::size_t slot_of(std::size_t n) const { return n / Ka; }
        std::size_t within_slot_rank(std::size_t n) const { return n % Ka; }
    };

    ChannelPointSet build_point_set(std::span<const SlotEstimate> slots, double gain_floor = 1e-300);

    struct AssignmentResult
    {
        // cluster[l][k] is the cluster that receives decode rank k of slot l
        std::vector<std::vector<std::size_t>> cluster;
        RVec objective; // sum_k log P(k, cluster[l][k]) per slot
    };

    /// Maximum-posterior permutation for one K_a x K_a membership block.
    Assignment assign_slot(const Eigen::MatrixXd &block, double p_floor = kMembershipFloor);

    /// Splits P (L*K_a x K_a) into consecutive per-slot blocks and assigns each.
    AssignmentResult constrained_assign(const Eigen::MatrixXd &P, std::size_t L, std::size_t Ka,
                                        double p_floor = kMembershipFloor);

    /// Cluster c collects, slot by slot, the decoded index whose rank was assigned to c.
    std::vector<ChunkIndexSeq> stitch(const AssignmentResult &assignments,
                                      const std::vector<std::vector<Index>> &slot_indices);
}
