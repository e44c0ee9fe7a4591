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

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace mbqc {

namespace {

dense::Ket bell_ket(int i) {
    PauliString twist(2);
    twist.set(1, bell_pauli(i));
    return dense::pauli_matrix(twist) * dense::phi_plus();
}

dense::Ket kron(const dense::Ket &a, const dense::Ket &b) {
    dense::Ket out(a.size() * b.size());
    for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a[i] * b;
    return out;
}

// Qubits: 0 = A1, 1 = B1, 2 = A2, 3 = B2.
Circuit recurrence_circuit(RecurrenceVariant v) {
    Circuit c;
    c.num_qubits = 4;
    if (v == RecurrenceVariant::DEJMPS) {
        c.add(GateKind::SQRT_X, 0).add(GateKind::SQRT_X, 2);
        c.add(GateKind::SQRT_X_DAG, 1).add(GateKind::SQRT_X_DAG, 3);
    }
    c.add(GateKind::CNOT, 0, 2).add(GateKind::CNOT, 1, 3);
    return c;
}

// Runs the recurrence circuit on a 4-qubit density matrix and returns the
// unnormalized kept state of pair 1.
dense::DensityMatrix recurrence_kept(const dense::DensityMatrix &in, RecurrenceVariant v) {
    dense::DensityMatrix d = in;
    dense::apply_unitary(d, dense::circuit_matrix(recurrence_circuit(v)));
    dense::Matrix zz = dense::pauli_matrix(PauliString::parse("IIZZ"));
    dense::Matrix keep = (dense::Matrix::Identity(16, 16) + zz) / 2.0;
    d.rho = keep * d.rho * keep;
    return dense::partial_trace(d, {2, 3});
}

BellDiagonalState bell_coefficients_checked(const dense::DensityMatrix &d) {
    BellDiagonalState r = BellDiagonalState::from_density_matrix(d);
    if (dense::max_abs_diff(r.to_density_matrix().rho * 1.0, d.rho) > 1e-12) {
        throw std::logic_error("oracle output is not Bell diagonal");
    }
    return r;
}

}  // namespace

void BellDiagonalState::validate(double tol) const {
    double total = 0;
    for (double x : c) {
        if (x < -tol) throw std::invalid_argument("negative Bell-diagonal coefficient");
        total += x;
    }
    if (std::abs(total - 1) > tol) throw std::invalid_argument("Bell-diagonal coefficients do not sum to 1");
}

BellDiagonalState BellDiagonalState::normalized() const {
    double total = c[0] + c[1] + c[2] + c[3];
    if (total <= 0) throw std::invalid_argument("cannot normalize a zero state");
    BellDiagonalState r;
    for (int i = 0; i < 4; ++i) r.c[i] = c[i] / total;
    return r;
}

BellDiagonalState BellDiagonalState::werner(double f) {
    check_probability(f, "fidelity");
    double e = (1 - f) / 3;
    return BellDiagonalState{{f, e, e, e}};
}

BellDiagonalState BellDiagonalState::from_depolarizing(double p) { return werner(fidelity_from_depolarizing(p)); }

dense::DensityMatrix BellDiagonalState::to_density_matrix() const {
    dense::DensityMatrix d;
    d.n = 2;
    d.rho = dense::Matrix::Zero(4, 4);
    for (int i = 0; i < 4; ++i) {
        dense::Ket k = bell_ket(i);
        d.rho += c[i] * k * k.adjoint();
    }
    return d;
}

BellDiagonalState BellDiagonalState::from_density_matrix(const dense::DensityMatrix &d) {
    if (d.n != 2) throw std::invalid_argument("Bell-diagonal projection needs a two-qubit state");
    BellDiagonalState r;
    for (int i = 0; i < 4; ++i) r.c[i] = dense::fidelity(d, bell_ket(i));
    return r;
}

double fidelity_from_depolarizing(double p) {
    check_probability(p, "depolarizing parameter");
    return (3 * p + 1) / 4;
}

double depolarizing_from_fidelity(double f) {
    check_probability(f, "fidelity");
    return (4 * f - 1) / 3;
}

RecurrenceVariant parse_variant(std::string_view name) {
    if (name == "bbpssw" || name == "BBPSSW") return RecurrenceVariant::BBPSSW;
    if (name == "dejmps" || name == "DEJMPS") return RecurrenceVariant::DEJMPS;
    throw std::invalid_argument("unknown recurrence variant '" + std::string(name) + "'");
}

const char *variant_name(RecurrenceVariant v) { return v == RecurrenceVariant::BBPSSW ? "bbpssw" : "dejmps"; }

RecurrenceResult recurrence_step(const BellDiagonalState &r1, const BellDiagonalState &r2, RecurrenceVariant v) {
    r1.validate(1e-9);
    r2.validate(1e-9);
    BellDiagonalState a = r1, b = r2;
    if (v == RecurrenceVariant::BBPSSW) {
        a = BellDiagonalState::werner(r1.c[0]);
        b = BellDiagonalState::werner(r2.c[0]);
    }
    const PairMap &w = recurrence_map(v);
    RecurrenceResult out;
    out.state.c = {0, 0, 0, 0};
    for (int k = 0; k < 4; ++k) {
        for (int i = 0; i < 4; ++i) {
            for (int j = 0; j < 4; ++j) out.state.c[k] += w[k][i][j] * a.c[i] * b.c[j];
        }
        out.p_success += out.state.c[k];
    }
    if (out.p_success > 0) out.state = out.state.normalized();
    return out;
}

BellDiagonalState swap_pairs(const BellDiagonalState &r1, const BellDiagonalState &r2) {
    const PairMap &w = swap_map();
    BellDiagonalState out;
    out.c = {0, 0, 0, 0};
    for (int k = 0; k < 4; ++k) {
        for (int i = 0; i < 4; ++i) {
            for (int j = 0; j < 4; ++j) out.c[k] += w[k][i][j] * r1.c[i] * r2.c[j];
        }
    }
    return out;
}

BellDiagonalState apply_channel(const BellDiagonalState &r, Side, const PauliChannel &ch) {
    // A Pauli sigma_k on either qubit maps |phi_i> to |phi_{i xor k}> up to
    // phase, so both sides act identically on the diagonal.
    ch.validate();
    static const Pauli1 letters[4] = {Pauli1::I, Pauli1::X, Pauli1::Y, Pauli1::Z};
    BellDiagonalState out;
    out.c = {0, 0, 0, 0};
    for (int s = 0; s < 4; ++s) {
        int k = bell_index(letters[s]);
        for (int i = 0; i < 4; ++i) out.c[i ^ k] += ch.probs[s] * r.c[i];
    }
    return out;
}

BellDiagonalState apply_depolarizing(const BellDiagonalState &r, Side side, double p) {
    return apply_channel(r, side, PauliChannel::depolarizing(p));
}

double entropy_yield(const BellDiagonalState &r) {
    double s = 0;
    for (double x : r.c) {
        if (x > 0) s -= x * std::log2(x);
    }
    return std::max(0.0, 1 - s);
}

PairMap generate_recurrence_map(RecurrenceVariant v) {
    PairMap w{};
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            auto in = dense::DensityMatrix::from_ket(kron(bell_ket(i), bell_ket(j)));
            BellDiagonalState out = bell_coefficients_checked(recurrence_kept(in, v));
            for (int k = 0; k < 4; ++k) w[k][i][j] = out.c[k];
        }
    }
    return w;
}

PairMap generate_swap_map() {
    PairMap w{};
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            auto in = dense::DensityMatrix::from_ket(kron(bell_ket(i), bell_ket(j)));
            auto branches = dense::bell_measure(in, 1, 2);
            BellDiagonalState total;
            total.c = {0, 0, 0, 0};
            for (int m = 0; m < 4; ++m) {
                if (branches[m].probability < 1e-14) continue;
                dense::DensityMatrix corrected = branches[m].state;
                dense::apply_unitary(corrected, dense::pauli_matrix(PauliString::single(2, 1, bell_pauli(m))));
                BellDiagonalState r = bell_coefficients_checked(corrected);
                for (int k = 0; k < 4; ++k) total.c[k] += branches[m].probability * r.c[k];
            }
            for (int k = 0; k < 4; ++k) w[k][i][j] = total.c[k];
        }
    }
    return w;
}

RecurrenceResult dense_recurrence(const BellDiagonalState &r1, const BellDiagonalState &r2, RecurrenceVariant v) {
    BellDiagonalState a = r1, b = r2;
    if (v == RecurrenceVariant::BBPSSW) {
        a = BellDiagonalState::werner(r1.c[0]);
        b = BellDiagonalState::werner(r2.c[0]);
    }
    dense::DensityMatrix kept = recurrence_kept(a.to_density_matrix().tensor(b.to_density_matrix()), v);
    RecurrenceResult out;
    out.p_success = kept.trace();
    if (out.p_success > 0) {
        kept.rho /= out.p_success;
        out.state = BellDiagonalState::from_density_matrix(kept);
    }
    return out;
}

BellDiagonalState dense_swap(const BellDiagonalState &r1, const BellDiagonalState &r2) {
    auto branches = dense::bell_measure(r1.to_density_matrix().tensor(r2.to_density_matrix()), 1, 2);
    BellDiagonalState total;
    total.c = {0, 0, 0, 0};
    for (int m = 0; m < 4; ++m) {
        if (branches[m].probability < 1e-14) continue;
        dense::DensityMatrix corrected = branches[m].state;
        dense::apply_unitary(corrected, dense::pauli_matrix(PauliString::single(2, 1, bell_pauli(m))));
        BellDiagonalState r = BellDiagonalState::from_density_matrix(corrected);
        for (int k = 0; k < 4; ++k) total.c[k] += branches[m].probability * r.c[k];
    }
    return total;
}

void write_golden_maps(std::ostream &out, const PairMap &bbpssw, const PairMap &dejmps, const PairMap &swap) {
    out << "mbqc-golden-maps 1\n";
    out << "# map k i j weight; Bell index order I Z X Y; absent entries are 0\n";
    auto dump = [&](const char *name, const PairMap &w) {
        for (int k = 0; k < 4; ++k) {
            for (int i = 0; i < 4; ++i) {
                for (int j = 0; j < 4; ++j) {
                    double x = w[k][i][j];
                    if (std::abs(x) < 1e-12) continue;
                    double rounded = std::round(x * 1e9) / 1e9;
                    out << name << " " << k << " " << i << " " << j << " " << rounded << "\n";
                }
            }
        }
    };
    dump("bbpssw", bbpssw);
    dump("dejmps", dejmps);
    dump("swap", swap);
}

GoldenMaps read_golden_maps(std::istream &in) {
    GoldenMaps g;
    std::string line;
    if (!std::getline(in, line) || line != "mbqc-golden-maps 1") throw std::runtime_error("bad golden-map header");
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream fields(line);
        std::string name;
        int k, i, j;
        double x;
        if (!(fields >> name >> k >> i >> j >> x) || k < 0 || k > 3 || i < 0 || i > 3 || j < 0 || j > 3) {
            throw std::runtime_error("bad golden-map line " + std::to_string(lineno));
        }
        PairMap *target = name == "bbpssw" ? &g.bbpssw : name == "dejmps" ? &g.dejmps : name == "swap" ? &g.swap : nullptr;
        if (!target) throw std::runtime_error("unknown golden map '" + name + "'");
        (*target)[k][i][j] = x;
    }
    return g;
}

std::string default_golden_path() { return std::string(MBQC_DATA_DIR) + "/golden_maps.txt"; }

}  // namespace mbqc
