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

#ifndef MBQC_TABLEAU_H
#define MBQC_TABLEAU_H

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mbqc/pauli.h"
#include "mbqc/rng.h"

namespace mbqc {

/// Index of a Bell state |phi_i> = (I (x) sigma_i)|phi+>, ordered I, Z, X, Y
/// so that i = 2*x + z and the group law on Paulis is XOR on the index.
inline constexpr int bell_index(Pauli1 p) { return 2 * (pauli_x(p) ? 1 : 0) + (pauli_z(p) ? 1 : 0); }
inline constexpr Pauli1 bell_pauli(int index) { return make_pauli1((index & 2) != 0, (index & 1) != 0); }

/// Outcome of a Bell measurement. b_x records a -1 eigenvalue of X_a X_b and
/// b_z a -1 eigenvalue of Z_a Z_b. The observed state is (I (x) sigma_i)|phi+>
/// with sigma_i = bell_pauli(index()).
struct BellOutcome {
    bool b_x = false;
    bool b_z = false;

    int index() const { return 2 * (b_z ? 1 : 0) + (b_x ? 1 : 0); }
    Pauli1 pauli() const { return bell_pauli(index()); }
    static BellOutcome from_index(int i) { return BellOutcome{(i & 1) != 0, (i & 2) != 0}; }
    bool operator==(const BellOutcome &) const = default;
};

struct MeasureResult {
    int outcome;  // +1 or -1
    bool deterministic;
};

/// Pure stabilizer state in destabilizer-tableau form.
///
/// Row k of the stabilizer list anticommutes only with destabilizer k; all
/// other stabilizer/destabilizer pairs commute.
class StabilizerState {
   public:
    StabilizerState() = default;
    /// |0...0>.
    explicit StabilizerState(size_t num_qubits);

    /// Builds the state stabilized by the given independent, commuting,
    /// Hermitian generators; destabilizers are completed by symplectic
    /// Gram-Schmidt.
    static StabilizerState from_generators(std::vector<PauliString> generators);

    size_t num_qubits() const { return stabilizers_.size(); }
    const std::vector<PauliString> &stabilizers() const { return stabilizers_; }
    const std::vector<PauliString> &destabilizers() const { return destabilizers_; }

    void apply(const CliffordMap &c, std::span<const size_t> targets);
    void apply(const CliffordMap &c);
    void apply_gate(const Gate &g);
    void apply_pauli(const PauliString &p);
    void apply_pauli(size_t qubit, Pauli1 p);

    /// Returns +1/-1 if P (Hermitian) has a definite value, std::nullopt if
    /// the outcome is random. Does not change the state.
    std::optional<int> peek(const PauliString &p) const;

    /// Measures P. When `forced` is set and the outcome is random, the state
    /// is projected onto that eigenvalue; forcing an impossible deterministic
    /// outcome throws std::domain_error.
    MeasureResult measure(const PauliString &p, Rng &rng, std::optional<int> forced = std::nullopt);

    /// Measures X_a X_b then Z_a Z_b and removes a and b; the remaining
    /// qubits keep their relative order. `probability` receives the chance
    /// of the returned outcome.
    BellOutcome bell_measure(size_t a, size_t b, Rng &rng, std::optional<BellOutcome> forced = std::nullopt,
                             double *probability = nullptr);

    /// Removes qubits that are unentangled with the rest (as a set). Throws
    /// std::domain_error if they are entangled with the remainder.
    void remove_qubits(std::vector<size_t> qubits);

    /// Appends `other` as qubits num_qubits() .. num_qubits()+other.n-1.
    StabilizerState tensor(const StabilizerState &other) const;

    /// Checks the tableau invariants; returns an empty string when they hold.
    std::string check_invariants() const;

    /// Canonical reduced row-echelon generator list, useful for equality.
    std::vector<PauliString> canonical_stabilizers() const;
    bool same_state(const StabilizerState &other) const;

   private:
    std::vector<PauliString> stabilizers_;
    std::vector<PauliString> destabilizers_;
};

MeasureResult measure_pauli(StabilizerState &s, const PauliString &p, Rng &rng);
BellOutcome bell_measure(StabilizerState &s, size_t a, size_t b, Rng &rng);

/// Solves for a subset of `rows` whose product has the given letters
/// (ignoring phase). Returns the selection mask, or std::nullopt when the
/// letters are outside the span.
std::optional<std::vector<bool>> express_in_span(const std::vector<PauliString> &rows, const PauliString &target);

/// Graph with optional single-qubit Clifford tags per vertex.
struct GraphSpec {
    size_t num_vertices = 0;
    std::vector<std::pair<size_t, size_t>> edges;
    /// Index into single_qubit_cliffords(); 0 is the identity.
    std::vector<int> lc_tags;

    /// Throws std::invalid_argument on self-loops, duplicates or bad indices.
    void validate() const;
    bool has_edge(size_t a, size_t b) const;
    std::vector<size_t> neighbors(size_t v) const;

    /// Text form "n; a-b, c-d; lc: v=tag, ..." (the edge and lc sections may
    /// be empty or omitted).
    static GraphSpec parse(std::string_view text);
    std::string str() const;
};

/// The 24 single-qubit Cliffords modulo phase, index 0 the identity,
/// enumerated breadth-first over words in H and S.
const std::vector<CliffordMap> &single_qubit_cliffords();
int single_qubit_clifford_index(const CliffordMap &c);

StabilizerState graph_state(const GraphSpec &g);

/// Local-Clifford reduction of a stabilizer state to graph form: returns the
/// graph G and per-qubit Clifford tags with  state = (prod_v C_v) |G>.
GraphSpec to_graph_form(const StabilizerState &s);

/// All graphs reachable from `g` by local complementations (edge sets as
/// sorted pair lists). Only intended for small vertex counts.
std::vector<std::vector<std::pair<size_t, size_t>>> local_complement_orbit(const GraphSpec &g, size_t limit = 1 << 16);
GraphSpec local_complement(const GraphSpec &g, size_t v);

constexpr size_t kDenseQubitLimit = 12;

using Amplitudes = std::vector<std::complex<double>>;

/// Dense amplitude vector. Qubit 0 is the most significant index bit. The
/// global phase is fixed so that the first nonzero amplitude is real and
/// positive.
Amplitudes to_dense(const StabilizerState &s);

}  // namespace mbqc

#endif
