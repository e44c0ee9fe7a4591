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

#include "mbqc/bell_diagonal.h"

namespace mbqc {

namespace {

// Nonzero entries {k, i, j} (all of weight 1) of the oracle-generated maps;
// see data/golden_maps.txt.
struct Entry {
    int k, i, j;
};

constexpr Entry kBbpssw[] = {{0, 0, 0}, {0, 1, 1}, {1, 0, 1}, {1, 1, 0}, {2, 2, 2}, {2, 3, 3}, {3, 2, 3}, {3, 3, 2}};
constexpr Entry kDejmps[] = {{0, 0, 0}, {0, 3, 3}, {1, 0, 3}, {1, 3, 0}, {2, 1, 1}, {2, 2, 2}, {3, 1, 2}, {3, 2, 1}};
constexpr Entry kSwap[] = {{0, 0, 0}, {0, 1, 1}, {0, 2, 2}, {0, 3, 3}, {1, 0, 1}, {1, 1, 0},
                           {1, 2, 3}, {1, 3, 2}, {2, 0, 2}, {2, 1, 3}, {2, 2, 0}, {2, 3, 1},
                           {3, 0, 3}, {3, 1, 2}, {3, 2, 1}, {3, 3, 0}};

template <size_t N>
PairMap build(const Entry (&entries)[N]) {
    PairMap w{};
    for (const Entry &e : entries) w[e.k][e.i][e.j] = 1.0;
    return w;
}

}  // namespace

const PairMap &recurrence_map(RecurrenceVariant v) {
    static const PairMap bbpssw = build(kBbpssw);
    static const PairMap dejmps = build(kDejmps);
    return v == RecurrenceVariant::BBPSSW ? bbpssw : dejmps;
}

const PairMap &swap_map() {
    static const PairMap w = build(kSwap);
    return w;
}

}  // namespace mbqc
