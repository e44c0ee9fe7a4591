// Copyright 2026 The mbqc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MBQC_RNG_H
#define MBQC_RNG_H

#include <array>
#include <cstdint>
#include <limits>

namespace mbqc {

/// Philox4x32-10 block function (Salmon et al., SC'11).
std::array<uint32_t, 4> philox4x32(std::array<uint32_t, 4> counter, std::array<uint32_t, 2> key);

/// Counter-based random stream.
///
/// A stream is identified by (key, family, index). Word 0 of the Philox
/// counter is the block index inside the stream, word 1 the low half of the
/// trajectory index, word 2 its high half and word 3 the family. Distinct
/// (family, index) pairs therefore draw from disjoint counter ranges, so
/// streams never overlap. This layout is part of the output format: changing
/// it changes every seeded result.
class Rng {
   public:
    using result_type = uint32_t;

    explicit Rng(uint64_t seed, uint32_t family = 0, uint64_t index = 0);

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<uint32_t>::max(); }

    result_type operator()();
    uint64_t next_u64();
    /// Uniform double in [0, 1) with 53 random bits.
    double uniform();
    bool coin() { return ((*this)() & 1) != 0; }
    /// Uniform integer in [0, bound).
    uint64_t below(uint64_t bound);
    bool bernoulli(double p) { return uniform() < p; }

   private:
    void refill();

    std::array<uint32_t, 2> key_;
    std::array<uint32_t, 4> counter_;
    std::array<uint32_t, 4> buffer_{};
    int used_ = 4;
};

/// Stream for trajectory `trajectory` of the experiment namespace `shard`
/// under `master` seed. Runs index trajectories globally so that aggregate
/// results do not depend on how trajectories are split across workers.
Rng seed_derive(uint64_t master, uint32_t shard, uint64_t trajectory);

/// 64-bit digest identifying a derived stream (its first output word pair).
uint64_t stream_seed(uint64_t master, uint32_t shard, uint64_t trajectory);

}  // namespace mbqc

#endif
