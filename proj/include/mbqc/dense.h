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

#ifndef MBQC_DENSE_H
#define MBQC_DENSE_H

#include <Eigen/Dense>
#include <array>
#include <vector>

#include "mbqc/pauli.h"
#include "mbqc/tableau.h"

namespace mbqc::dense {

/// Brute-force state-vector and density-matrix engine used as the oracle
/// for everything the stabilizer engine does. Qubit 0 is the most
/// significant index bit. All entry points refuse more than
/// kDenseQubitLimit qubits.

using Ket = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;

/// Probabilities of I, X, Y, Z.
using PauliProbs = std::array<double, 4>;

struct DensityMatrix {
    size_t n = 0;
    Matrix rho;

    static DensityMatrix from_ket(const Ket &psi);
    static DensityMatrix from_state(const StabilizerState &s);
    static DensityMatrix maximally_mixed(size_t n);

    double trace() const { return rho.trace().real(); }
    /// Empty string when Hermitian, unit trace and positive semidefinite.
    std::string check_valid(double tol = 1e-10) const;
    DensityMatrix tensor(const DensityMatrix &other) const;
};

void check_size(size_t n);

Ket to_ket(const Amplitudes &a);
Ket ket_from_state(const StabilizerState &s);
Ket basis_ket(size_t n, size_t index);
Ket phi_plus();

Matrix pauli_matrix(const PauliString &p);
Matrix gate_matrix(size_t n, const Gate &g);
Matrix circuit_matrix(const Circuit &c);
/// A unitary implementing the Clifford map (global phase arbitrary).
Matrix clifford_matrix(const CliffordMap &c);

void apply_unitary(DensityMatrix &d, const Matrix &u);
void apply_pauli_channel(DensityMatrix &d, size_t qubit, const PauliProbs &probs);
/// rho -> p rho + (1-p) Tr_q(rho) (x) I/2 on the given qubit.
void depolarize(DensityMatrix &d, size_t qubit, double p);

double expectation(const DensityMatrix &d, const PauliString &p);
/// <psi| rho |psi>.
double fidelity(const DensityMatrix &d, const Ket &psi);

struct Branch {
    double probability = 0;
    DensityMatrix state;  // normalized; empty when probability is zero
};

/// Outcome +1 then -1.
std::array<Branch, 2> measure(const DensityMatrix &d, const PauliString &p);
/// Bell measurement on (a, b) indexed by BellOutcome::index(); the two
/// measured qubits are traced out of the conditional states.
std::array<Branch, 4> bell_measure(const DensityMatrix &d, size_t a, size_t b);

DensityMatrix partial_trace(const DensityMatrix &d, std::vector<size_t> removed);
/// Moves the listed qubits to the front in the given order, keeping the
/// others in relative order after them.
DensityMatrix permute_front(const DensityMatrix &d, const std::vector<size_t> &front);

double max_abs_diff(const Matrix &a, const Matrix &b);

}  // namespace mbqc::dense

#endif
