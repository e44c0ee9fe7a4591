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

#ifndef MBQC_BELL_DIAGONAL_H
#define MBQC_BELL_DIAGONAL_H

#include <array>
#include <iosfwd>
#include <string>
#include <string_view>

#include "mbqc/dense.h"
#include "mbqc/noise.h"

namespace mbqc {

/// Two-qubit state sum_i c[i] |phi_i><phi_i| with |phi_i> = (I (x) sigma_i)|phi+>
/// and the index order I, Z, X, Y (index = 2*x + z), so c[0] is the fidelity.
struct BellDiagonalState {
    std::array<double, 4> c{1, 0, 0, 0};

    double fidelity() const { return c[0]; }
    void validate(double tol = 1e-12) const;
    BellDiagonalState normalized() const;

    static BellDiagonalState perfect() { return {}; }
    static BellDiagonalState werner(double fidelity);
    /// Werner state of the pair E(p)|phi+>.
    static BellDiagonalState from_depolarizing(double p);

    dense::DensityMatrix to_density_matrix() const;
    /// Bell-basis diagonal of an arbitrary two-qubit density matrix.
    static BellDiagonalState from_density_matrix(const dense::DensityMatrix &d);
};

/// F = (3p + 1) / 4.
double fidelity_from_depolarizing(double p);
double depolarizing_from_fidelity(double f);

enum class RecurrenceVariant { BBPSSW, DEJMPS };
RecurrenceVariant parse_variant(std::string_view name);
const char *variant_name(RecurrenceVariant v);

/// Weight table T[k][i][j]: contribution of the input pair (i, j) to the kept
/// output Bell state k. Success probability is the sum over k.
using PairMap = std::array<std::array<std::array<double, 4>, 4>, 4>;

struct RecurrenceResult {
    BellDiagonalState state;
    double p_success = 0;
};

/// One 2->1 round. BBPSSW twirls both inputs to Werner form first; DEJMPS
/// applies the local pre-rotations. Bilateral CNOT from pair 1 onto pair 2,
/// Z measurement of pair 2 on both sides, keep on equal outcomes.
RecurrenceResult recurrence_step(const BellDiagonalState &r1, const BellDiagonalState &r2, RecurrenceVariant v);
/// Entanglement swapping with the Bell-outcome byproduct corrected.
BellDiagonalState swap_pairs(const BellDiagonalState &r1, const BellDiagonalState &r2);

enum class Side { A, B };
BellDiagonalState apply_depolarizing(const BellDiagonalState &r, Side side, double p);
BellDiagonalState apply_channel(const BellDiagonalState &r, Side side, const PauliChannel &c);

/// max(0, 1 - S(c)) with S the Shannon entropy of the coefficients in bits.
double entropy_yield(const BellDiagonalState &r);

/// Frozen tables (generated by the dense oracle below and embedded).
const PairMap &recurrence_map(RecurrenceVariant v);
const PairMap &swap_map();

/// Dense-oracle generation of the tables from the 4-qubit protocol circuits.
PairMap generate_recurrence_map(RecurrenceVariant v);
PairMap generate_swap_map();

/// Direct 4-qubit density-matrix simulation, independent of the tables.
RecurrenceResult dense_recurrence(const BellDiagonalState &r1, const BellDiagonalState &r2, RecurrenceVariant v);
BellDiagonalState dense_swap(const BellDiagonalState &r1, const BellDiagonalState &r2);

/// Golden-map text file ("mbqc-golden-maps 1" header, one nonzero entry per
/// line: map name, k, i, j, weight).
void write_golden_maps(std::ostream &out, const PairMap &bbpssw, const PairMap &dejmps, const PairMap &swap);
struct GoldenMaps {
    PairMap bbpssw{}, dejmps{}, swap{};
};
GoldenMaps read_golden_maps(std::istream &in);
std::string default_golden_path();

}  // namespace mbqc

#endif
