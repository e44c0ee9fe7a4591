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

#include "mbqc/testing.h"

#include <algorithm>
#include <stdexcept>

namespace mbqc {

PauliString random_pauli(size_t n, Rng &rng, bool hermitian) {
    PauliString p(n);
    for (size_t q = 0; q < n; ++q) p.set(q, static_cast<Pauli1>(rng.below(4)));
    uint8_t phase = static_cast<uint8_t>(rng.below(4));
    if (hermitian) phase &= 2;
    p.set_phase(phase);
    return p;
}

PauliString random_nontrivial_pauli(size_t n, Rng &rng) {
    while (true) {
        PauliString p = random_pauli(n, rng);
        if (!p.is_identity_up_to_phase()) return p;
    }
}

Circuit random_circuit(size_t n, size_t depth, Rng &rng) {
    static const GateKind singles[] = {GateKind::H,          GateKind::S, GateKind::S_DAG, GateKind::SQRT_X,
                                       GateKind::SQRT_X_DAG, GateKind::X, GateKind::Y,     GateKind::Z};
    static const GateKind pairs[] = {GateKind::CNOT, GateKind::CZ, GateKind::SWAP};
    Circuit c;
    c.num_qubits = n;
    for (size_t d = 0; d < depth; ++d) {
        if (n >= 2 && rng.coin()) {
            size_t a = rng.below(n);
            size_t b = (a + 1 + rng.below(n - 1)) % n;
            c.add(pairs[rng.below(3)], a, b);
        } else {
            c.add(singles[rng.below(8)], rng.below(n));
        }
    }
    return c;
}

StabilizerState random_state(size_t n, Rng &rng) {
    StabilizerState s(n);
    s.apply(random_circuit(n, 6 * n + 4, rng).to_clifford());
    return s;
}

std::vector<DenseTeleportBranch> dense_teleport(const ResourceSpec &r, const StabilizerState &host,
                                                std::span<const size_t> host_qubits) {
    if (host_qubits.size() != r.num_inputs()) throw std::invalid_argument("wiring does not match the resource inputs");
    size_t nh = host.num_qubits();
    dense::DensityMatrix start = dense::DensityMatrix::from_state(host).tensor(dense::DensityMatrix::from_state(r.state()));
    std::vector<size_t> alive(start.n);
    for (size_t q = 0; q < alive.size(); ++q) alive[q] = q;

    std::vector<DenseTeleportBranch> out;
    DenseTeleportBranch current;
    current.probability = 1;
    current.state = std::move(start);
    auto recurse = [&](auto &self, DenseTeleportBranch branch, std::vector<size_t> ids, size_t k) -> void {
        if (k == host_qubits.size()) {
            out.push_back(std::move(branch));
            return;
        }
        auto pos = [&](size_t id) { return static_cast<size_t>(std::find(ids.begin(), ids.end(), id) - ids.begin()); };
        size_t a = pos(host_qubits[k]), b = pos(nh + k);
        auto branches = dense::bell_measure(branch.state, a, b);
        std::vector<size_t> rest;
        for (size_t id : ids) {
            if (id != host_qubits[k] && id != nh + k) rest.push_back(id);
        }
        for (int i = 0; i < 4; ++i) {
            if (branches[i].probability < 1e-14) continue;
            DenseTeleportBranch next;
            next.outcomes = branch.outcomes;
            next.outcomes.push_back(BellOutcome::from_index(i));
            next.probability = branch.probability * branches[i].probability;
            next.state = std::move(branches[i].state);
            self(self, std::move(next), rest, k + 1);
        }
    };
    recurse(recurse, std::move(current), alive, 0);
    return out;
}

void dense_apply_frame(dense::DensityMatrix &d, const PauliString &frame, size_t offset) {
    PauliString full(d.n);
    for (size_t q = 0; q < frame.num_qubits(); ++q) full.set(offset + q, frame.get(q));
    dense::apply_unitary(d, dense::pauli_matrix(full));
}

}  // namespace mbqc
