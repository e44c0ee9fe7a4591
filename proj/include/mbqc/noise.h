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

#ifndef MBQC_NOISE_H
#define MBQC_NOISE_H

#include <array>
#include <string>

#include "mbqc/dense.h"
#include "mbqc/pauli.h"
#include "mbqc/rng.h"
#include "mbqc/tableau.h"

namespace mbqc {

/// Throws std::invalid_argument unless 0 <= p <= 1.
void check_probability(double p, const char *what);

/// Single-qubit Pauli-diagonal channel; probabilities ordered I, X, Y, Z.
struct PauliChannel {
    std::array<double, 4> probs{1, 0, 0, 0};

    /// E(p): keeps the qubit with probability p, fully depolarizes it
    /// otherwise.
    static PauliChannel depolarizing(double p);
    /// Dephasing M(q) in the form {I: p, Z: 1-p} with p = q + (1-q)/2.
    static PauliChannel dephasing(double q);

    void validate() const;
    Pauli1 sample(Rng &rng) const;
    /// Channel applying `this` then `next` (Pauli channels commute).
    PauliChannel then(const PauliChannel &next) const;
    double prob(Pauli1 p) const { return probs[pauli_slot(p)]; }
    static int pauli_slot(Pauli1 p);
};

/// Error model parameters: p for resource particles, q for each qubit
/// entering a Bell measurement, and q_channel for transmission or storage.
struct NoiseModel {
    double p_resource = 1;
    double q_meas = 1;
    double q_channel = 1;

    void validate() const;
    bool is_ideal() const { return p_resource == 1 && q_meas == 1 && q_channel == 1; }
    /// Folds the measurement noise into the resource parameter: the
    /// equivalent model has q_meas = 1 and p_resource = q^2 p.
    NoiseModel normalized() const;
    std::string str() const;
};

/// Samples the Pauli inserted by E(p).
Pauli1 depolarize_sample(double p, Rng &rng);
/// Applies an E(p) sample to the given qubit; returns the inserted Pauli.
Pauli1 depolarize(StabilizerState &s, size_t qubit, double p, Rng &rng);

/// E_a(q) E_b(q) followed by a perfect Bell measurement of (a, b).
BellOutcome noisy_bell_measure(StabilizerState &s, size_t a, size_t b, double q, Rng &rng);

/// One trajectory of E(p) on every qubit of `ideal`.
StabilizerState noisy_state(const StabilizerState &ideal, double p, Rng &rng);

/// E(p1) E(p2) = E(p1 p2).
double compose_noise(double p1, double p2);

/// Pauli transfer matrix (basis I, X, Y, Z) of a single-qubit channel
/// given as a function on 2x2 density matrices.
dense::Matrix pauli_transfer_matrix(const PauliChannel &c);

/// Outcome of comparing P_ab E_a rho with P_ab E_b rho.
struct NoiseMoveCertificate {
    bool equal = true;
    double max_difference = 0;
    /// Outcome index of the worst mismatch, -1 when equal.
    int worst_outcome = -1;
};

NoiseMoveCertificate move_noise_across_bell(const dense::DensityMatrix &rho, size_t a, size_t b,
                                            const PauliChannel &channel, double tol = 1e-12);

}  // namespace mbqc

#endif
