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

#ifndef MBQC_PAULI_H
#define MBQC_PAULI_H

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mbqc {

/// Single-qubit Pauli letter. The numeric value packs (x, z) as x | (z << 1)
/// so that I=0, X=1, Z=2, Y=3.
enum class Pauli1 : uint8_t { I = 0, X = 1, Z = 2, Y = 3 };

inline constexpr bool pauli_x(Pauli1 p) { return (static_cast<uint8_t>(p) & 1) != 0; }
inline constexpr bool pauli_z(Pauli1 p) { return (static_cast<uint8_t>(p) & 2) != 0; }
inline constexpr Pauli1 make_pauli1(bool x, bool z) {
    return static_cast<Pauli1>(static_cast<uint8_t>(x) | (static_cast<uint8_t>(z) << 1));
}
char pauli_char(Pauli1 p);

/// A phased n-qubit Pauli operator  i^phase * (s_0 (x) s_1 (x) ... ), where
/// each s_k is I, X, Y or Z chosen by the bit pair (x_k, z_k). Note that Y is
/// stored as x=z=1 with no implicit phase.
///
/// Bits are packed 64 per word; products and symplectic inner products run
/// word-parallel.
class PauliString {
   public:
    PauliString() = default;
    explicit PauliString(size_t num_qubits);

    /// Parses "+XYZ", "-iZZ", "iX", "XZ". Qubit 0 is the leftmost letter.
    static PauliString parse(std::string_view text);
    static PauliString single(size_t num_qubits, size_t qubit, Pauli1 p);

    size_t num_qubits() const { return n_; }
    uint8_t phase() const { return phase_; }
    void set_phase(uint8_t phase) { phase_ = phase & 3; }

    bool x(size_t q) const { return (xs_[q >> 6] >> (q & 63)) & 1; }
    bool z(size_t q) const { return (zs_[q >> 6] >> (q & 63)) & 1; }
    void set_x(size_t q, bool v);
    void set_z(size_t q, bool v);
    Pauli1 get(size_t q) const { return make_pauli1(x(q), z(q)); }
    void set(size_t q, Pauli1 p) {
        set_x(q, pauli_x(p));
        set_z(q, pauli_z(p));
    }

    bool is_identity_up_to_phase() const;
    size_t weight() const;
    /// True when the operator is Hermitian (phase 0 or 2).
    bool is_hermitian() const { return (phase_ & 1) == 0; }
    /// Sign of a Hermitian operator: +1 for phase 0, -1 for phase 2.
    int sign() const { return phase_ == 0 ? 1 : -1; }

    /// Returns the operator restricted to the given qubits (phase is kept).
    PauliString restricted(std::span<const size_t> qubits) const;
    /// Writes `sub` (letters only) onto the listed qubits.
    void assign_letters(std::span<const size_t> qubits, const PauliString &sub);
    /// Letters with the listed qubits deleted; phase kept.
    PauliString removed(std::span<const size_t> qubits) const;
    /// Tensor product this (x) other.
    PauliString tensor(const PauliString &other) const;

    /// this <- this * rhs, tracking the phase modulo 4.
    PauliString &operator*=(const PauliString &rhs);
    bool operator==(const PauliString &other) const = default;
    /// Letter equality, ignoring the phase.
    bool same_letters(const PauliString &other) const { return xs_ == other.xs_ && zs_ == other.zs_ && n_ == other.n_; }

    std::string str() const;

    std::span<const uint64_t> x_words() const { return xs_; }
    std::span<const uint64_t> z_words() const { return zs_; }

   private:
    size_t n_ = 0;
    std::vector<uint64_t> xs_;
    std::vector<uint64_t> zs_;
    uint8_t phase_ = 0;
};

PauliString multiply(const PauliString &p, const PauliString &q);
bool commutes(const PauliString &p, const PauliString &q);

/// A Clifford unitary C described by the images C X_k C^dag and C Z_k C^dag
/// of the single-qubit generators.
class CliffordMap {
   public:
    CliffordMap() = default;
    static CliffordMap identity(size_t num_qubits);
    /// Builds the map from explicit generator images; validates the
    /// commutation relations.
    static CliffordMap from_images(std::vector<PauliString> x_images, std::vector<PauliString> z_images);

    static CliffordMap hadamard(size_t n, size_t q);
    static CliffordMap phase(size_t n, size_t q);
    static CliffordMap phase_dag(size_t n, size_t q);
    static CliffordMap sqrt_x(size_t n, size_t q);
    static CliffordMap sqrt_x_dag(size_t n, size_t q);
    static CliffordMap pauli(size_t n, size_t q, Pauli1 p);
    static CliffordMap cnot(size_t n, size_t control, size_t target);
    static CliffordMap cz(size_t n, size_t a, size_t b);
    static CliffordMap swap(size_t n, size_t a, size_t b);

    size_t num_qubits() const { return x_images_.size(); }
    const PauliString &x_image(size_t q) const { return x_images_[q]; }
    const PauliString &z_image(size_t q) const { return z_images_[q]; }

    /// C P C^dag.
    PauliString conjugate(const PauliString &p) const;
    /// (this o first): applies `first`, then this.
    CliffordMap after(const CliffordMap &first) const;
    CliffordMap inverse() const;

    bool operator==(const CliffordMap &other) const = default;

   private:
    std::vector<PauliString> x_images_;
    std::vector<PauliString> z_images_;
};

PauliString conjugate(const CliffordMap &c, const PauliString &p);

/// Elementary Clifford gates; a Circuit is the gate-list view used where a
/// dense unitary is also needed.
enum class GateKind : uint8_t { H, S, S_DAG, SQRT_X, SQRT_X_DAG, X, Y, Z, CNOT, CZ, SWAP };

struct Gate {
    GateKind kind;
    size_t q0;
    size_t q1 = 0;
};

struct Circuit {
    size_t num_qubits = 0;
    std::vector<Gate> gates;

    Circuit &add(GateKind kind, size_t q0, size_t q1 = 0) {
        gates.push_back({kind, q0, q1});
        return *this;
    }
    CliffordMap to_clifford() const;
};

bool is_two_qubit(GateKind kind);
CliffordMap gate_map(size_t n, const Gate &g);

}  // namespace mbqc

#endif
