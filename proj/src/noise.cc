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

#include "mbqc/noise.h"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace mbqc {

void check_probability(double p, const char *what) {
    if (!(p >= 0.0 && p <= 1.0)) {
        std::ostringstream msg;
        msg << what << " must be a probability in [0, 1], got " << p;
        throw std::invalid_argument(msg.str());
    }
}

int PauliChannel::pauli_slot(Pauli1 p) {
    switch (p) {
        case Pauli1::I:
            return 0;
        case Pauli1::X:
            return 1;
        case Pauli1::Y:
            return 2;
        case Pauli1::Z:
            return 3;
    }
    return 0;
}

PauliChannel PauliChannel::depolarizing(double p) {
    check_probability(p, "depolarizing parameter");
    double e = (1 - p) / 4;
    return PauliChannel{{p + e, e, e, e}};
}

PauliChannel PauliChannel::dephasing(double q) {
    check_probability(q, "dephasing parameter");
    double p = q + (1 - q) / 2;
    return PauliChannel{{p, 0, 0, 1 - p}};
}

void PauliChannel::validate() const {
    double total = 0;
    for (double x : probs) {
        if (!(x >= 0)) throw std::invalid_argument("negative Pauli channel probability");
        total += x;
    }
    if (std::abs(total - 1) > 1e-12) throw std::invalid_argument("Pauli channel probabilities do not sum to 1");
}

Pauli1 PauliChannel::sample(Rng &rng) const {
    double u = rng.uniform();
    static const Pauli1 order[4] = {Pauli1::I, Pauli1::X, Pauli1::Y, Pauli1::Z};
    for (int k = 0; k < 3; ++k) {
        if (u < probs[k]) return order[k];
        u -= probs[k];
    }
    return Pauli1::Z;
}

PauliChannel PauliChannel::then(const PauliChannel &next) const {
    static const Pauli1 order[4] = {Pauli1::I, Pauli1::X, Pauli1::Y, Pauli1::Z};
    PauliChannel out{{0, 0, 0, 0}};
    for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) {
            auto prod = static_cast<Pauli1>(static_cast<uint8_t>(order[a]) ^ static_cast<uint8_t>(order[b]));
            out.probs[pauli_slot(prod)] += probs[a] * next.probs[b];
        }
    }
    return out;
}

void NoiseModel::validate() const {
    check_probability(p_resource, "p_resource");
    check_probability(q_meas, "q_meas");
    check_probability(q_channel, "q_channel");
}

NoiseModel NoiseModel::normalized() const {
    validate();
    return NoiseModel{q_meas * q_meas * p_resource, 1.0, q_channel};
}

std::string NoiseModel::str() const {
    std::ostringstream out;
    out << "p=" << p_resource << " q=" << q_meas << " q_channel=" << q_channel;
    return out.str();
}

Pauli1 depolarize_sample(double p, Rng &rng) {
    check_probability(p, "depolarizing parameter");
    if (p == 1.0) return Pauli1::I;
    if (rng.uniform() < p) return Pauli1::I;
    return static_cast<Pauli1>(rng.below(4));
}

Pauli1 depolarize(StabilizerState &s, size_t qubit, double p, Rng &rng) {
    Pauli1 e = depolarize_sample(p, rng);
    s.apply_pauli(qubit, e);
    return e;
}

BellOutcome noisy_bell_measure(StabilizerState &s, size_t a, size_t b, double q, Rng &rng) {
    depolarize(s, a, q, rng);
    depolarize(s, b, q, rng);
    return s.bell_measure(a, b, rng);
}

StabilizerState noisy_state(const StabilizerState &ideal, double p, Rng &rng) {
    StabilizerState s = ideal;
    for (size_t q = 0; q < s.num_qubits(); ++q) depolarize(s, q, p, rng);
    return s;
}

double compose_noise(double p1, double p2) {
    check_probability(p1, "p1");
    check_probability(p2, "p2");
    return p1 * p2;
}

dense::Matrix pauli_transfer_matrix(const PauliChannel &c) {
    static const Pauli1 basis[4] = {Pauli1::I, Pauli1::X, Pauli1::Y, Pauli1::Z};
    dense::Matrix ptm(4, 4);
    for (int j = 0; j < 4; ++j) {
        dense::DensityMatrix d;
        d.n = 1;
        d.rho = dense::pauli_matrix(PauliString::single(1, 0, basis[j]));
        dense::apply_pauli_channel(d, 0, c.probs);
        for (int i = 0; i < 4; ++i) {
            ptm(i, j) = (dense::pauli_matrix(PauliString::single(1, 0, basis[i])) * d.rho).trace() / 2.0;
        }
    }
    return ptm;
}

NoiseMoveCertificate move_noise_across_bell(const dense::DensityMatrix &rho, size_t a, size_t b,
                                            const PauliChannel &channel, double tol) {
    dense::DensityMatrix on_a = rho, on_b = rho;
    dense::apply_pauli_channel(on_a, a, channel.probs);
    dense::apply_pauli_channel(on_b, b, channel.probs);
    auto left = dense::bell_measure(on_a, a, b);
    auto right = dense::bell_measure(on_b, a, b);
    NoiseMoveCertificate cert;
    for (int i = 0; i < 4; ++i) {
        // Compare unnormalized conditional states so that zero-probability
        // branches need no special casing.
        double diff = std::abs(left[i].probability - right[i].probability);
        if (left[i].probability > tol && right[i].probability > tol) {
            diff = std::max(diff, dense::max_abs_diff(left[i].probability * left[i].state.rho,
                                                      right[i].probability * right[i].state.rho));
        }
        if (diff > cert.max_difference) {
            cert.max_difference = diff;
            if (diff > tol) cert.worst_outcome = i;
        }
    }
    cert.equal = cert.max_difference <= tol;
    return cert;
}

}  // namespace mbqc
