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

#include "ura/encoder.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace ura
{
    ChunkIndexSeq partition_message(const Message &m, unsigned L)
    {
        const std::size_t B = m.size();
        if (L == 0 || B % L != 0)
            throw std::invalid_argument("partition_message: message length " + std::to_string(B) +
                                        " is not divisible by L = " + std::to_string(L));
        const std::size_t J = B / L;
        if (J == 0 || J > 32)
            throw std::invalid_argument("partition_message: chunk size must be in [1, 32] bits");

        ChunkIndexSeq seq;
        seq.indices.resize(L);
        for (std::size_t l = 0; l < L; ++l)
        {
            Index v = 0;
            for (std::size_t b = 0; b < J; ++b)
                v = (v << 1) | (m.bits[l * J + b] & 1u);
            seq.indices[l] = v;
        }
        return seq;
    }

    Message assemble_message(const ChunkIndexSeq &seq, unsigned J)
    {
        if (J == 0 || J > 32)
            throw std::invalid_argument("assemble_message: chunk size must be in [1, 32] bits");
        const std::uint64_t limit = std::uint64_t{1} << J;
        Message m;
        m.bits.resize(seq.indices.size() * J);
        for (std::size_t l = 0; l < seq.indices.size(); ++l)
        {
            const Index v = seq.indices[l];
            if (v >= limit)
                throw std::out_of_range("assemble_message: index " + std::to_string(v) + " does not fit in " +
                                        std::to_string(J) + " bits");
            for (std::size_t b = 0; b < J; ++b)
                m.bits[l * J + b] = static_cast<std::uint8_t>((v >> (J - 1 - b)) & 1u);
        }
        return m;
    }

    Message random_message(unsigned B, Rng &rng)
    {
        Message m;
        m.bits.resize(B);
        std::uint64_t word = 0;
        for (unsigned b = 0; b < B; ++b)
        {
            if (b % 64 == 0)
                word = rng();
            m.bits[b] = static_cast<std::uint8_t>((word >> (b % 64)) & 1u);
        }
        return m;
    }

    SlotSupport slot_support(std::span<const ChunkIndexSeq> seqs, std::size_t slot)
    {
        SlotSupport s;
        s.indices.reserve(seqs.size());
        for (const auto &q : seqs)
        {
            if (slot >= q.indices.size())
                throw std::out_of_range("slot_support: slot index out of range");
            s.indices.push_back(q.indices[slot]);
        }

        auto sorted = s.indices;
        std::sort(sorted.begin(), sorted.end());
        for (std::size_t i = 0; i < sorted.size();)
        {
            std::size_t k = i;
            while (k < sorted.size() && sorted[k] == sorted[i])
                ++k;
            const std::size_t mult = k - i;
            if (mult >= 2)
            {
                s.collisions.push_back(sorted[i]);
                s.colliding_pairs += mult * (mult - 1) / 2;
            }
            i = k;
        }
        return s;
    }
}
