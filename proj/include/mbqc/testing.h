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

#ifndef MBQC_TESTING_H
#define MBQC_TESTING_H

#include <span>

#include "mbqc/dense.h"
#include "mbqc/pauli.h"
#include "mbqc/resources.h"
#include "mbqc/rng.h"
#include "mbqc/tableau.h"

namespace mbqc {

/// Random generators shared by the test suites and the oracle checker.

PauliString random_pauli(size_t n, Rng &rng, bool hermitian = true);
/// Non-identity Hermitian Pauli.
PauliString random_nontrivial_pauli(size_t n, Rng &rng);
Circuit random_circuit(size_t n, size_t depth, Rng &rng);
StabilizerState random_state(size_t n, Rng &rng);

struct DenseTeleportBranch {
    std::vector<BellOutcome> outcomes;
    double probability = 0;
    /// Same qubit order as teleport_in: unmeasured host qubits, then outputs.
    dense::DensityMatrix state;
};

/// Density-matrix version of teleport_in without noise, enumerating every
/// outcome tuple with nonzero probability.
std::vector<DenseTeleportBranch> dense_teleport(const ResourceSpec &r, const StabilizerState &host,
                                                std::span<const size_t> host_qubits);

/// Applies `frame` to qubits offset.. of a dense state.
void dense_apply_frame(dense::DensityMatrix &d, const PauliString &frame, size_t offset);

}  // namespace mbqc

#endif
