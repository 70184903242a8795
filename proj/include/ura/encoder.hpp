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

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ura/types.hpp"

namespace ura
{
    /// A B-bit message, one bit per byte (0 or 1).
    struct Message
    {
        std::vector<std::uint8_t> bits;

        std::size_t size() const { return bits.size(); }
        auto operator<=>(const Message &) const = default;
    };

    /// Codebook column index chosen in each slot, in slot order.
    struct ChunkIndexSeq
    {
        std::vector<Index> indices;

        auto operator<=>(const ChunkIndexSeq &) const = default;
    };

    /// Splits a message into L chunks of J = B/L bits. Each chunk is read big-endian,
    /// i.e. bit l*J is the most significant bit of chunk l.
    ChunkIndexSeq partition_message(const Message &m, unsigned L);

    /// Inverse of partition_message.
    Message assemble_message(const ChunkIndexSeq &seq, unsigned J);

    Message random_message(unsigned B, Rng &rng);

    struct SlotSupport
    {
        std::vector<Index> indices;     // one per active user, in user order
        std::vector<Index> collisions;  // distinct values chosen by two or more users, ascending
        std::size_t colliding_pairs = 0; // sum over values of C(multiplicity, 2)
    };

    SlotSupport slot_support(std::span<const ChunkIndexSeq> seqs, std::size_t slot);
}
