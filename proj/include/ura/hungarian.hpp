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

namespace ura
{
    struct Assignment
    {
        std::vector<std::size_t> perm; // row k is assigned to column perm[k]
        double cost = 0.0;
    };

    /// Minimum-cost perfect assignment for a square cost matrix in O(n^3).
    ///
    /// Among all optimal permutations the lexicographically smallest is returned, so
    /// ties resolve the same way on every platform.
    Assignment hungarian(const Eigen::MatrixXd &cost);

    /// Exhaustive search over all n! permutations with the same tie rule. Only for small n.
    Assignment brute_force_assignment(const Eigen::MatrixXd &cost);
}
