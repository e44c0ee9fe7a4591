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

#include "mbqc/pauli.h"

#include <bit>
#include <stdexcept>

namespace mbqc {

namespace {

size_t num_words(size_t n) { return (n + 63) >> 6; }

void check_same_size(const PauliString &p, const PauliString &q) {
    if (p.num_qubits() != q.num_qubits()) {
        throw std::invalid_argument(
            "Pauli length mismatch: " + std::to_string(p.num_qubits()) + " vs " + std::to_string(q.num_qubits()));
    }
}

}  // namespace

char pauli_char(Pauli1 p) {
    switch (p) {
        case Pauli1::I:
            return 'I';
        case Pauli1::X:
            return 'X';
        case Pauli1::Y:
            return 'Y';
        case Pauli1::Z:
            return 'Z';
    }
    return '?';
}

PauliString::PauliString(size_t num_qubits) : n_(num_qubits), xs_(num_words(num_qubits)), zs_(num_words(num_qubits)) {}

PauliString PauliString::parse(std::string_view text) {
    uint8_t phase = 0;
    if (!text.empty() && (text[0] == '+' || text[0] == '-')) {
        if (text[0] == '-') phase = 2;
        text.remove_prefix(1);
    }
    if (!text.empty() && text[0] == 'i') {
        phase = (phase + 1) & 3;
        text.remove_prefix(1);
    }
    PauliString result(text.size());
    for (size_t k = 0; k < text.size(); ++k) {
        switch (text[k]) {
            case 'I':
            case '_':
                break;
            case 'X':
                result.set(k, Pauli1::X);
                break;
            case 'Y':
                result.set(k, Pauli1::Y);
                break;
            case 'Z':
                result.set(k, Pauli1::Z);
                break;
            default:
                throw std::invalid_argument("Bad Pauli character '" + std::string(1, text[k]) + "'");
        }
    }
    result.phase_ = phase;
    return result;
}

PauliString PauliString::single(size_t num_qubits, size_t qubit, Pauli1 p) {
    PauliString result(num_qubits);
    result.set(qubit, p);
    return result;
}

void PauliString::set_x(size_t q, bool v) {
    uint64_t bit = uint64_t{1} << (q & 63);
    if (v) {
        xs_[q >> 6] |= bit;
    } else {
        xs_[q >> 6] &= ~bit;
    }
}

void PauliString::set_z(size_t q, bool v) {
    uint64_t bit = uint64_t{1} << (q & 63);
    if (v) {
        zs_[q >> 6] |= bit;
    } else {
        zs_[q >> 6] &= ~bit;
    }
}

bool PauliString::is_identity_up_to_phase() const {
    for (size_t w = 0; w < xs_.size(); ++w) {
        if (xs_[w] | zs_[w]) return false;
    }
    return true;
}

size_t PauliString::weight() const {
    size_t total = 0;
    for (size_t w = 0; w < xs_.size(); ++w) total += std::popcount(xs_[w] | zs_[w]);
    return total;
}

PauliString PauliString::restricted(std::span<const size_t> qubits) const {
    PauliString result(qubits.size());
    for (size_t k = 0; k < qubits.size(); ++k) result.set(k, get(qubits[k]));
    result.phase_ = phase_;
    return result;
}

void PauliString::assign_letters(std::span<const size_t> qubits, const PauliString &sub) {
    for (size_t k = 0; k < qubits.size(); ++k) set(qubits[k], sub.get(k));
}

PauliString PauliString::removed(std::span<const size_t> qubits) const {
    std::vector<bool> drop(n_, false);
    for (size_t q : qubits) drop.at(q) = true;
    PauliString result(n_ - qubits.size());
    size_t j = 0;
    for (size_t q = 0; q < n_; ++q) {
        if (!drop[q]) result.set(j++, get(q));
    }
    result.phase_ = phase_;
    return result;
}

PauliString PauliString::tensor(const PauliString &other) const {
    PauliString result(n_ + other.n_);
    for (size_t q = 0; q < n_; ++q) result.set(q, get(q));
    for (size_t q = 0; q < other.n_; ++q) result.set(n_ + q, other.get(q));
    result.phase_ = (phase_ + other.phase_) & 3;
    return result;
}

PauliString &PauliString::operator*=(const PauliString &rhs) {
    check_same_size(*this, rhs);
    // Per qubit, a*b = i^g (a xor b) with g = +1 for XY, YZ, ZX and
    // g = -1 for YX, ZY, XZ.
    int acc = phase_ + rhs.phase_;
    for (size_t w = 0; w < xs_.size(); ++w) {
        uint64_t x1 = xs_[w], z1 = zs_[w], x2 = rhs.xs_[w], z2 = rhs.zs_[w];
        uint64_t a_x = x1 & ~z1, a_y = x1 & z1, a_z = ~x1 & z1;
        uint64_t b_x = x2 & ~z2, b_y = x2 & z2, b_z = ~x2 & z2;
        uint64_t plus = (a_x & b_y) | (a_y & b_z) | (a_z & b_x);
        uint64_t minus = (a_y & b_x) | (a_z & b_y) | (a_x & b_z);
        acc += std::popcount(plus) - std::popcount(minus);
        xs_[w] = x1 ^ x2;
        zs_[w] = z1 ^ z2;
    }
    phase_ = static_cast<uint8_t>(((acc % 4) + 4) % 4);
    return *this;
}

std::string PauliString::str() const {
    static const char *prefixes[4] = {"+", "i", "-", "-i"};
    std::string out = prefixes[phase_];
    for (size_t q = 0; q < n_; ++q) out += pauli_char(get(q));
    return out;
}

PauliString multiply(const PauliString &p, const PauliString &q) {
    PauliString result = p;
    result *= q;
    return result;
}

bool commutes(const PauliString &p, const PauliString &q) {
    check_same_size(p, q);
    auto px = p.x_words(), pz = p.z_words(), qx = q.x_words(), qz = q.z_words();
    uint64_t parity = 0;
    for (size_t w = 0; w < px.size(); ++w) parity ^= (px[w] & qz[w]) ^ (pz[w] & qx[w]);
    return (std::popcount(parity) & 1) == 0;
}

CliffordMap CliffordMap::identity(size_t n) {
    CliffordMap c;
    for (size_t q = 0; q < n; ++q) {
        c.x_images_.push_back(PauliString::single(n, q, Pauli1::X));
        c.z_images_.push_back(PauliString::single(n, q, Pauli1::Z));
    }
    return c;
}

CliffordMap CliffordMap::from_images(std::vector<PauliString> x_images, std::vector<PauliString> z_images) {
    size_t n = x_images.size();
    if (z_images.size() != n) throw std::invalid_argument("CliffordMap needs as many X images as Z images");
    for (size_t k = 0; k < n; ++k) {
        if (x_images[k].num_qubits() != n || z_images[k].num_qubits() != n) {
            throw std::invalid_argument("CliffordMap image has the wrong qubit count");
        }
        if (!x_images[k].is_hermitian() || !z_images[k].is_hermitian()) {
            throw std::invalid_argument("CliffordMap images must be Hermitian");
        }
    }
    for (size_t a = 0; a < n; ++a) {
        for (size_t b = 0; b < n; ++b) {
            if (!commutes(x_images[a], x_images[b]) || !commutes(z_images[a], z_images[b]) ||
                commutes(x_images[a], z_images[b]) != (a != b)) {
                throw std::invalid_argument("CliffordMap images violate the commutation relations");
            }
        }
    }
    CliffordMap c;
    c.x_images_ = std::move(x_images);
    c.z_images_ = std::move(z_images);
    return c;
}

namespace {

CliffordMap single_qubit_map(size_t n, size_t q, const char *x_to, const char *z_to) {
    CliffordMap c = CliffordMap::identity(n);
    PauliString xi = PauliString::parse(x_to), zi = PauliString::parse(z_to);
    std::vector<PauliString> xs, zs;
    for (size_t k = 0; k < n; ++k) {
        xs.push_back(c.x_image(k));
        zs.push_back(c.z_image(k));
    }
    PauliString px(n), pz(n);
    px.set(q, xi.get(0));
    px.set_phase(xi.phase());
    pz.set(q, zi.get(0));
    pz.set_phase(zi.phase());
    xs[q] = px;
    zs[q] = pz;
    return CliffordMap::from_images(std::move(xs), std::move(zs));
}

}  // namespace

CliffordMap CliffordMap::hadamard(size_t n, size_t q) { return single_qubit_map(n, q, "Z", "X"); }
CliffordMap CliffordMap::phase(size_t n, size_t q) { return single_qubit_map(n, q, "Y", "Z"); }
CliffordMap CliffordMap::phase_dag(size_t n, size_t q) { return single_qubit_map(n, q, "-Y", "Z"); }
CliffordMap CliffordMap::sqrt_x(size_t n, size_t q) { return single_qubit_map(n, q, "X", "-Y"); }
CliffordMap CliffordMap::sqrt_x_dag(size_t n, size_t q) { return single_qubit_map(n, q, "X", "Y"); }

CliffordMap CliffordMap::pauli(size_t n, size_t q, Pauli1 p) {
    // Conjugating by a Pauli negates the generators it anticommutes with.
    const char *x_to = (p == Pauli1::Z || p == Pauli1::Y) ? "-X" : "X";
    const char *z_to = (p == Pauli1::X || p == Pauli1::Y) ? "-Z" : "Z";
    return single_qubit_map(n, q, x_to, z_to);
}

CliffordMap CliffordMap::cnot(size_t n, size_t control, size_t target) {
    if (control == target) throw std::invalid_argument("CNOT control equals target");
    CliffordMap c = identity(n);
    c.x_images_[control].set_x(target, true);
    c.z_images_[target].set_z(control, true);
    return c;
}

CliffordMap CliffordMap::cz(size_t n, size_t a, size_t b) {
    if (a == b) throw std::invalid_argument("CZ on a single qubit");
    CliffordMap c = identity(n);
    c.x_images_[a].set_z(b, true);
    c.x_images_[b].set_z(a, true);
    return c;
}

CliffordMap CliffordMap::swap(size_t n, size_t a, size_t b) {
    CliffordMap c = identity(n);
    std::swap(c.x_images_[a], c.x_images_[b]);
    std::swap(c.z_images_[a], c.z_images_[b]);
    return c;
}

PauliString CliffordMap::conjugate(const PauliString &p) const {
    size_t n = num_qubits();
    if (p.num_qubits() != n) throw std::invalid_argument("Clifford/Pauli size mismatch");
    // P = i^(phase + #Y) prod_k X_k^x Z_k^z, with X before Z on each qubit.
    PauliString result(n);
    int phase = p.phase();
    for (size_t k = 0; k < n; ++k) {
        bool x = p.x(k), z = p.z(k);
        if (x && z) phase += 1;
        if (x) result *= x_images_[k];
        if (z) result *= z_images_[k];
    }
    result.set_phase(static_cast<uint8_t>((result.phase() + phase) & 3));
    return result;
}

CliffordMap CliffordMap::after(const CliffordMap &first) const {
    if (first.num_qubits() != num_qubits()) throw std::invalid_argument("Clifford composition size mismatch");
    CliffordMap c;
    for (size_t k = 0; k < num_qubits(); ++k) {
        c.x_images_.push_back(conjugate(first.x_images_[k]));
        c.z_images_.push_back(conjugate(first.z_images_[k]));
    }
    return c;
}

CliffordMap CliffordMap::inverse() const {
    size_t n = num_qubits();
    CliffordMap inv;
    auto preimage = [&](const PauliString &target) {
        // Expand target in the symplectic basis {C X_k, C Z_k}: the
        // coefficient of C X_k is <target, C Z_k> and vice versa.
        PauliString pre(n);
        PauliString rebuilt(n);
        int phase = 0;
        for (size_t k = 0; k < n; ++k) {
            bool a = !commutes(target, z_images_[k]);
            bool b = !commutes(target, x_images_[k]);
            pre.set(k, make_pauli1(a, b));
            if (a && b) phase += 3;  // X Z = -i Y
            if (a) rebuilt *= x_images_[k];
            if (b) rebuilt *= z_images_[k];
        }
        // target = i^d * rebuilt, and rebuilt = C(X^a Z^b) = C(i^-#Y * pre).
        int d = (target.phase() - rebuilt.phase() + 4) & 3;
        pre.set_phase(static_cast<uint8_t>((d + phase) & 3));
        return pre;
    };
    for (size_t k = 0; k < n; ++k) {
        inv.x_images_.push_back(preimage(PauliString::single(n, k, Pauli1::X)));
        inv.z_images_.push_back(preimage(PauliString::single(n, k, Pauli1::Z)));
    }
    return inv;
}

PauliString conjugate(const CliffordMap &c, const PauliString &p) { return c.conjugate(p); }

bool is_two_qubit(GateKind kind) { return kind == GateKind::CNOT || kind == GateKind::CZ || kind == GateKind::SWAP; }

CliffordMap gate_map(size_t n, const Gate &g) {
    switch (g.kind) {
        case GateKind::H:
            return CliffordMap::hadamard(n, g.q0);
        case GateKind::S:
            return CliffordMap::phase(n, g.q0);
        case GateKind::S_DAG:
            return CliffordMap::phase_dag(n, g.q0);
        case GateKind::SQRT_X:
            return CliffordMap::sqrt_x(n, g.q0);
        case GateKind::SQRT_X_DAG:
            return CliffordMap::sqrt_x_dag(n, g.q0);
        case GateKind::X:
            return CliffordMap::pauli(n, g.q0, Pauli1::X);
        case GateKind::Y:
            return CliffordMap::pauli(n, g.q0, Pauli1::Y);
        case GateKind::Z:
            return CliffordMap::pauli(n, g.q0, Pauli1::Z);
        case GateKind::CNOT:
            return CliffordMap::cnot(n, g.q0, g.q1);
        case GateKind::CZ:
            return CliffordMap::cz(n, g.q0, g.q1);
        case GateKind::SWAP:
            return CliffordMap::swap(n, g.q0, g.q1);
    }
    throw std::invalid_argument("Unknown gate");
}

CliffordMap Circuit::to_clifford() const {
    CliffordMap c = CliffordMap::identity(num_qubits);
    for (const Gate &g : gates) c = gate_map(num_qubits, g).after(c);
    return c;
}

}  // namespace mbqc
