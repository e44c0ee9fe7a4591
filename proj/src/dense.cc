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

#include "mbqc/dense.h"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <bit>
#include <stdexcept>
#include <string>

namespace mbqc::dense {

namespace {

using cd = std::complex<double>;

size_t bit_of(size_t n, size_t q) { return size_t{1} << (n - 1 - q); }

}  // namespace

void check_size(size_t n) {
    if (n > kDenseQubitLimit) {
        throw std::invalid_argument("dense engine is limited to " + std::to_string(kDenseQubitLimit) + " qubits, got " +
                                    std::to_string(n));
    }
}

DensityMatrix DensityMatrix::from_ket(const Ket &psi) {
    DensityMatrix d;
    d.n = static_cast<size_t>(std::countr_zero(static_cast<size_t>(psi.size())));
    check_size(d.n);
    d.rho = psi * psi.adjoint();
    return d;
}

DensityMatrix DensityMatrix::from_state(const StabilizerState &s) { return from_ket(ket_from_state(s)); }

DensityMatrix DensityMatrix::maximally_mixed(size_t n) {
    check_size(n);
    DensityMatrix d;
    d.n = n;
    size_t dim = size_t{1} << n;
    d.rho = Matrix::Identity(dim, dim) / static_cast<double>(dim);
    return d;
}

std::string DensityMatrix::check_valid(double tol) const {
    if (std::abs(rho.trace() - cd(1.0)) > tol) return "trace is " + std::to_string(rho.trace().real());
    if (max_abs_diff(rho, rho.adjoint()) > tol) return "not Hermitian";
    Eigen::SelfAdjointEigenSolver<Matrix> solver(rho);
    if (solver.eigenvalues().minCoeff() < -tol) return "negative eigenvalue";
    return "";
}

DensityMatrix DensityMatrix::tensor(const DensityMatrix &other) const {
    check_size(n + other.n);
    DensityMatrix d;
    d.n = n + other.n;
    size_t dim_b = other.rho.rows();
    d.rho = Matrix::Zero(rho.rows() * dim_b, rho.cols() * dim_b);
    for (Eigen::Index i = 0; i < rho.rows(); ++i) {
        for (Eigen::Index j = 0; j < rho.cols(); ++j) {
            d.rho.block(i * dim_b, j * dim_b, dim_b, dim_b) = rho(i, j) * other.rho;
        }
    }
    return d;
}

Ket to_ket(const Amplitudes &a) {
    Ket k(a.size());
    for (size_t i = 0; i < a.size(); ++i) k[i] = a[i];
    return k;
}

Ket ket_from_state(const StabilizerState &s) { return to_ket(to_dense(s)); }

Ket basis_ket(size_t n, size_t index) {
    check_size(n);
    Ket k = Ket::Zero(size_t{1} << n);
    k[index] = 1.0;
    return k;
}

Ket phi_plus() {
    Ket k = Ket::Zero(4);
    k[0] = k[3] = 1.0 / std::sqrt(2.0);
    return k;
}

namespace {

// P|j> = val[j] |row[j]>.
void pauli_columns(const PauliString &p, std::vector<size_t> &row, std::vector<cd> &val) {
    size_t n = p.num_qubits();
    check_size(n);
    size_t dim = size_t{1} << n;
    size_t xmask = 0, zmask = 0;
    int ys = 0;
    for (size_t q = 0; q < n; ++q) {
        if (p.x(q)) xmask |= bit_of(n, q);
        if (p.z(q)) zmask |= bit_of(n, q);
        if (p.x(q) && p.z(q)) ++ys;
    }
    static const cd powers[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    cd base = powers[(p.phase() + ys) & 3];
    row.resize(dim);
    val.resize(dim);
    for (size_t i = 0; i < dim; ++i) {
        row[i] = i ^ xmask;
        val[i] = (std::popcount(i & zmask) & 1) ? -base : base;
    }
}

}  // namespace

Matrix pauli_matrix(const PauliString &p) {
    std::vector<size_t> row;
    std::vector<cd> val;
    pauli_columns(p, row, val);
    Matrix m = Matrix::Zero(row.size(), row.size());
    for (size_t i = 0; i < row.size(); ++i) m(row[i], i) = val[i];
    return m;
}

namespace {

Matrix single_gate(GateKind kind) {
    const double r = 1.0 / std::sqrt(2.0);
    const cd i(0, 1);
    Matrix m(2, 2);
    switch (kind) {
        case GateKind::H:
            m << r, r, r, -r;
            break;
        case GateKind::S:
            m << 1, 0, 0, i;
            break;
        case GateKind::S_DAG:
            m << 1, 0, 0, -i;
            break;
        case GateKind::SQRT_X:
            m << (1.0 + i) / 2.0, (1.0 - i) / 2.0, (1.0 - i) / 2.0, (1.0 + i) / 2.0;
            break;
        case GateKind::SQRT_X_DAG:
            m << (1.0 - i) / 2.0, (1.0 + i) / 2.0, (1.0 + i) / 2.0, (1.0 - i) / 2.0;
            break;
        case GateKind::X:
            m << 0, 1, 1, 0;
            break;
        case GateKind::Y:
            m << 0, -i, i, 0;
            break;
        case GateKind::Z:
            m << 1, 0, 0, -1;
            break;
        default:
            throw std::invalid_argument("not a single-qubit gate");
    }
    return m;
}

}  // namespace

Matrix gate_matrix(size_t n, const Gate &g) {
    check_size(n);
    size_t dim = size_t{1} << n;
    Matrix u = Matrix::Zero(dim, dim);
    if (!is_two_qubit(g.kind)) {
        Matrix m = single_gate(g.kind);
        size_t b = bit_of(n, g.q0);
        for (size_t col = 0; col < dim; ++col) {
            size_t in = (col & b) ? 1 : 0;
            for (size_t out = 0; out < 2; ++out) {
                size_t row = out ? (col | b) : (col & ~b);
                u(row, col) += m(out, in);
            }
        }
        return u;
    }
    size_t b0 = bit_of(n, g.q0), b1 = bit_of(n, g.q1);
    for (size_t col = 0; col < dim; ++col) {
        bool v0 = col & b0, v1 = col & b1;
        switch (g.kind) {
            case GateKind::CNOT:
                u(v0 ? col ^ b1 : col, col) = 1;
                break;
            case GateKind::CZ:
                u(col, col) = (v0 && v1) ? -1 : 1;
                break;
            case GateKind::SWAP: {
                size_t row = col & ~(b0 | b1);
                if (v0) row |= b1;
                if (v1) row |= b0;
                u(row, col) = 1;
                break;
            }
            default:
                break;
        }
    }
    return u;
}

Matrix circuit_matrix(const Circuit &c) {
    size_t dim = size_t{1} << c.num_qubits;
    Matrix u = Matrix::Identity(dim, dim);
    for (const Gate &g : c.gates) u = gate_matrix(c.num_qubits, g) * u;
    return u;
}

Matrix clifford_matrix(const CliffordMap &c) {
    size_t n = c.num_qubits();
    check_size(n);
    // U|0> is stabilized by C(Z_k); U|x> = C(X^x) U|0>.
    std::vector<PauliString> gens;
    for (size_t k = 0; k < n; ++k) gens.push_back(c.z_image(k));
    Ket zero = ket_from_state(StabilizerState::from_generators(gens));
    size_t dim = size_t{1} << n;
    Matrix u(dim, dim);
    for (size_t col = 0; col < dim; ++col) {
        PauliString xs(n);
        for (size_t q = 0; q < n; ++q) {
            if (col & bit_of(n, q)) xs.set(q, Pauli1::X);
        }
        u.col(col) = pauli_matrix(c.conjugate(xs)) * zero;
    }
    return u;
}

void apply_unitary(DensityMatrix &d, const Matrix &u) { d.rho = u * d.rho * u.adjoint(); }

void apply_pauli_channel(DensityMatrix &d, size_t qubit, const PauliProbs &probs) {
    Matrix out = probs[0] * d.rho;
    static const Pauli1 letters[3] = {Pauli1::X, Pauli1::Y, Pauli1::Z};
    std::vector<size_t> row;
    std::vector<cd> val;
    size_t dim = d.rho.rows();
    for (int k = 0; k < 3; ++k) {
        if (probs[k + 1] == 0) continue;
        pauli_columns(PauliString::single(d.n, qubit, letters[k]), row, val);
        for (size_t j = 0; j < dim; ++j) {
            cd cj = probs[k + 1] * std::conj(val[j]);
            for (size_t i = 0; i < dim; ++i) out(row[i], row[j]) += val[i] * cj * d.rho(i, j);
        }
    }
    d.rho = out;
}

void depolarize(DensityMatrix &d, size_t qubit, double p) {
    double e = (1 - p) / 4;
    apply_pauli_channel(d, qubit, {p + e, e, e, e});
}

double expectation(const DensityMatrix &d, const PauliString &p) { return (d.rho * pauli_matrix(p)).trace().real(); }

double fidelity(const DensityMatrix &d, const Ket &psi) { return (psi.adjoint() * d.rho * psi)(0, 0).real(); }

std::array<Branch, 2> measure(const DensityMatrix &d, const PauliString &p) {
    size_t dim = d.rho.rows();
    std::vector<size_t> row;
    std::vector<cd> val;
    pauli_columns(p, row, val);
    Matrix left(dim, dim), both(dim, dim);
    for (size_t j = 0; j < dim; ++j) left.row(row[j]) = val[j] * d.rho.row(j);
    Matrix right(dim, dim);
    for (size_t j = 0; j < dim; ++j) right.col(row[j]) = std::conj(val[j]) * d.rho.col(j);
    for (size_t j = 0; j < dim; ++j) both.col(row[j]) = std::conj(val[j]) * left.col(j);
    std::array<Branch, 2> out;
    for (int k = 0; k < 2; ++k) {
        double s = k == 0 ? 1.0 : -1.0;
        Matrix post = (d.rho + s * left + s * right + both) / 4.0;
        double prob = post.trace().real();
        out[k].probability = prob;
        if (prob > 1e-14) {
            out[k].state.n = d.n;
            out[k].state.rho = post / prob;
        }
    }
    return out;
}

std::array<Branch, 4> bell_measure(const DensityMatrix &d, size_t a, size_t b) {
    size_t n = d.n;
    PauliString xx(n), zz(n);
    xx.set(a, Pauli1::X);
    xx.set(b, Pauli1::X);
    zz.set(a, Pauli1::Z);
    zz.set(b, Pauli1::Z);
    std::array<Branch, 4> out;
    auto first = measure(d, xx);
    for (int bx = 0; bx < 2; ++bx) {
        if (first[bx].probability <= 1e-14) continue;
        auto second = measure(first[bx].state, zz);
        for (int bz = 0; bz < 2; ++bz) {
            int idx = BellOutcome{bx == 1, bz == 1}.index();
            out[idx].probability = first[bx].probability * second[bz].probability;
            if (second[bz].probability > 1e-14) out[idx].state = partial_trace(second[bz].state, {a, b});
        }
    }
    return out;
}

DensityMatrix permute_front(const DensityMatrix &d, const std::vector<size_t> &front) {
    size_t n = d.n;
    std::vector<size_t> order = front;
    for (size_t q = 0; q < n; ++q) {
        if (std::find(front.begin(), front.end(), q) == front.end()) order.push_back(q);
    }
    if (order.size() != n) throw std::invalid_argument("bad permutation");
    size_t dim = size_t{1} << n;
    std::vector<size_t> map(dim);
    for (size_t i = 0; i < dim; ++i) {
        size_t j = 0;
        for (size_t k = 0; k < n; ++k) {
            if (i & bit_of(n, order[k])) j |= bit_of(n, k);
        }
        map[i] = j;
    }
    DensityMatrix out;
    out.n = n;
    out.rho = Matrix(dim, dim);
    for (size_t i = 0; i < dim; ++i) {
        for (size_t j = 0; j < dim; ++j) out.rho(map[i], map[j]) = d.rho(i, j);
    }
    return out;
}

DensityMatrix partial_trace(const DensityMatrix &d, std::vector<size_t> removed) {
    std::sort(removed.begin(), removed.end());
    size_t n = d.n, r = removed.size();
    std::vector<size_t> kept;
    for (size_t q = 0; q < n; ++q) {
        if (!std::binary_search(removed.begin(), removed.end(), q)) kept.push_back(q);
    }
    DensityMatrix p = permute_front(d, kept);
    size_t dk = size_t{1} << kept.size(), dr = size_t{1} << r;
    DensityMatrix out;
    out.n = kept.size();
    out.rho = Matrix::Zero(dk, dk);
    for (size_t i = 0; i < dk; ++i) {
        for (size_t j = 0; j < dk; ++j) {
            cd acc = 0;
            for (size_t t = 0; t < dr; ++t) acc += p.rho(i * dr + t, j * dr + t);
            out.rho(i, j) = acc;
        }
    }
    return out;
}

double max_abs_diff(const Matrix &a, const Matrix &b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) return 1e300;
    if (a.size() == 0) return 0;
    return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace mbqc::dense
