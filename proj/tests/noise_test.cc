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

#include <gtest/gtest.h>

#include <cmath>

#include "mbqc/bell_diagonal.h"
#include "mbqc/testing.h"

using namespace mbqc;

namespace {

dense::DensityMatrix random_density(size_t n, Rng &rng) {
    size_t dim = size_t{1} << n;
    dense::Matrix g(dim, dim);
    for (size_t i = 0; i < dim; ++i) {
        for (size_t j = 0; j < dim; ++j) g(i, j) = {rng.uniform() - 0.5, rng.uniform() - 0.5};
    }
    dense::DensityMatrix d;
    d.n = n;
    d.rho = g * g.adjoint();
    d.rho /= d.rho.trace();
    return d;
}

// rho -> p rho + (1 - p) Tr_q(rho) (x) I/2, written out directly.
dense::DensityMatrix depolarize_by_definition(const dense::DensityMatrix &d, size_t q, double p) {
    dense::DensityMatrix traced = dense::partial_trace(d, {q});
    dense::DensityMatrix half = dense::DensityMatrix::maximally_mixed(1);
    dense::DensityMatrix mixed = traced.tensor(half);
    // mixed has the fresh qubit last; move it back to position q.
    dense::DensityMatrix back = mixed;
    if (q != d.n - 1) {
        std::vector<size_t> front;
        for (size_t k = 0; k < d.n; ++k) front.push_back(k < q ? k : (k == q ? d.n - 1 : k - 1));
        back = dense::permute_front(mixed, front);
    }
    dense::DensityMatrix out = d;
    out.rho = p * d.rho + (1 - p) * back.rho;
    return out;
}

PauliChannel random_channel(Rng &rng) {
    PauliChannel c;
    double total = 0;
    for (double &x : c.probs) total += (x = rng.uniform());
    for (double &x : c.probs) x /= total;
    return c;
}

}  // namespace

TEST(Depolarize, ChannelExpansionMatchesDefinition) {
    Rng rng(1);
    for (double p : {0.0, 0.3, 0.8, 1.0}) {
        for (int trial = 0; trial < 5; ++trial) {
            dense::DensityMatrix d = random_density(3, rng);
            size_t q = rng.below(3);
            dense::DensityMatrix expanded = d;
            dense::depolarize(expanded, q, p);
            EXPECT_LT(dense::max_abs_diff(expanded.rho, depolarize_by_definition(d, q, p).rho), 1e-12);
        }
    }
    auto c = PauliChannel::depolarizing(0.8);
    EXPECT_NEAR(c.probs[0], 0.85, 1e-15);
    for (int k = 1; k < 4; ++k) EXPECT_NEAR(c.probs[k], 0.05, 1e-15);
}

TEST(Depolarize, SamplingFrequencies) {
    Rng rng(2);
    for (int i = 0; i < 1000; ++i) EXPECT_EQ(depolarize_sample(1.0, rng), Pauli1::I);
    for (double p : {0.0, 0.8}) {
        auto expected = PauliChannel::depolarizing(p);
        int counts[4] = {0};
        const int n = 100000;
        for (int i = 0; i < n; ++i) counts[PauliChannel::pauli_slot(depolarize_sample(p, rng))]++;
        for (int k = 0; k < 4; ++k) {
            double mu = n * expected.probs[k];
            EXPECT_NEAR(counts[k], mu, 5 * std::sqrt(mu * (1 - expected.probs[k])));
        }
    }
    EXPECT_THROW(depolarize_sample(1.2, rng), std::invalid_argument);
    EXPECT_THROW(depolarize_sample(-0.1, rng), std::invalid_argument);
}

TEST(Depolarize, SampledAverageReproducesExactChannel) {
    Rng rng(3);
    for (int trial = 0; trial < 3; ++trial) {
        dense::DensityMatrix d = random_density(2, rng);
        double p = 0.2 + 0.6 * rng.uniform();
        const int n = 100000;
        int counts[4][4] = {{0}};
        for (int i = 0; i < n; ++i) {
            int a = static_cast<int>(depolarize_sample(p, rng));
            int b = static_cast<int>(depolarize_sample(p, rng));
            counts[a][b]++;
        }
        dense::Matrix avg = dense::Matrix::Zero(4, 4);
        for (int a = 0; a < 4; ++a) {
            for (int b = 0; b < 4; ++b) {
                PauliString ps(2);
                ps.set(0, static_cast<Pauli1>(a));
                ps.set(1, static_cast<Pauli1>(b));
                dense::Matrix m = dense::pauli_matrix(ps);
                avg += (static_cast<double>(counts[a][b]) / n) * (m * d.rho * m.adjoint());
            }
        }
        dense::DensityMatrix exact = d;
        dense::depolarize(exact, 0, p);
        dense::depolarize(exact, 1, p);
        // Each entry is an average of bounded terms (|entry| <= 1).
        EXPECT_LT(dense::max_abs_diff(avg, exact.rho), 3 * 2 / std::sqrt(static_cast<double>(n)));
    }
}

TEST(NoisyBellMeasure, Examples) {
    Rng rng(4);
    auto bell = [] { return StabilizerState::from_generators({PauliString::parse("XX"), PauliString::parse("ZZ")}); };
    for (int i = 0; i < 200; ++i) {
        StabilizerState s = bell();
        EXPECT_EQ(noisy_bell_measure(s, 0, 1, 1.0, rng).index(), 0);
    }
    for (double q : {0.0, 0.9}) {
        dense::DensityMatrix d = dense::DensityMatrix::from_ket(dense::phi_plus());
        dense::depolarize(d, 0, q);
        dense::depolarize(d, 1, q);
        auto exact = dense::bell_measure(d, 0, 1);
        int counts[4] = {0};
        const int n = 40000;
        for (int i = 0; i < n; ++i) {
            StabilizerState s = bell();
            counts[noisy_bell_measure(s, 0, 1, q, rng).index()]++;
        }
        for (int k = 0; k < 4; ++k) {
            double mu = n * exact[k].probability;
            EXPECT_NEAR(counts[k], mu, 5 * std::sqrt(mu * (1 - exact[k].probability)) + 1);
        }
        if (q == 0.0) {
            for (int k = 0; k < 4; ++k) EXPECT_NEAR(exact[k].probability, 0.25, 1e-12);
        }
    }
}

TEST(NoisyState, GhzEnsembleFidelity) {
    StabilizerState ghz = StabilizerState::from_generators(
        {PauliString::parse("XXX"), PauliString::parse("ZZI"), PauliString::parse("IZZ")});
    dense::Ket psi = dense::ket_from_state(ghz);
    double p = 0.85;
    auto channel = PauliChannel::depolarizing(p);
    // Exact average over the 4^3 insertions.
    double exact = 0;
    dense::Matrix avg0 = dense::Matrix::Zero(8, 8);
    for (int e = 0; e < 64; ++e) {
        PauliString ps(3);
        double prob = 1;
        for (int q = 0; q < 3; ++q) {
            auto letter = static_cast<Pauli1>((e >> (2 * q)) & 3);
            ps.set(q, letter);
            prob *= channel.prob(letter);
        }
        dense::Ket moved = dense::pauli_matrix(ps) * psi;
        exact += prob * std::norm(psi.dot(moved));
        avg0 += (1.0 / 64) * moved * moved.adjoint();
    }
    EXPECT_LT(dense::max_abs_diff(avg0, dense::Matrix::Identity(8, 8) / 8.0), 1e-12);

    Rng rng(5);
    const int n = 40000;
    double hits = 0;
    for (int i = 0; i < n; ++i) {
        StabilizerState s = noisy_state(ghz, p, rng);
        hits += std::norm(psi.dot(dense::ket_from_state(s)));
    }
    double sigma = std::sqrt(exact * (1 - exact) / n);
    EXPECT_NEAR(hits / n, exact, 4 * sigma);

    StabilizerState ideal = noisy_state(ghz, 1.0, rng);
    EXPECT_TRUE(ideal.same_state(ghz));
}

TEST(ComposeNoise, ExamplesAndTransferMatrices) {
    EXPECT_DOUBLE_EQ(compose_noise(1, 0.37), 0.37);
    EXPECT_NEAR(compose_noise(0.9, 0.9), 0.81, 1e-15);
    dense::Matrix lhs = pauli_transfer_matrix(PauliChannel::depolarizing(0.7)) *
                        pauli_transfer_matrix(PauliChannel::depolarizing(0.6));
    EXPECT_LT(dense::max_abs_diff(lhs, pauli_transfer_matrix(PauliChannel::depolarizing(compose_noise(0.7, 0.6)))),
              1e-12);
    Rng rng(6);
    for (int trial = 0; trial < 50; ++trial) {
        PauliChannel a = random_channel(rng), b = random_channel(rng);
        EXPECT_LT(dense::max_abs_diff(pauli_transfer_matrix(b) * pauli_transfer_matrix(a),
                                      pauli_transfer_matrix(a.then(b))),
                  1e-12);
        double p1 = rng.uniform(), p2 = rng.uniform();
        EXPECT_LT(dense::max_abs_diff(pauli_transfer_matrix(PauliChannel::depolarizing(p1)) *
                                          pauli_transfer_matrix(PauliChannel::depolarizing(p2)),
                                      pauli_transfer_matrix(PauliChannel::depolarizing(compose_noise(p1, p2)))),
                  1e-12);
    }
    EXPECT_THROW(compose_noise(1.5, 0.5), std::invalid_argument);
}

TEST(NoiseModel, NormalizationFoldsMeasurementNoise) {
    NoiseModel m{0.9, 0.95, 0.99};
    NoiseModel n = m.normalized();
    EXPECT_NEAR(n.p_resource, 0.95 * 0.95 * 0.9, 1e-15);
    EXPECT_EQ(n.q_meas, 1.0);
    EXPECT_EQ(n.q_channel, 0.99);
    EXPECT_THROW((NoiseModel{95, 1, 1}.validate()), std::invalid_argument);
}

TEST(Dephasing, Reparametrization) {
    auto c = PauliChannel::dephasing(0.6);
    EXPECT_NEAR(c.probs[0], 0.8, 1e-15);
    EXPECT_NEAR(c.probs[3], 0.2, 1e-15);
    EXPECT_EQ(c.probs[1], 0.0);
}

TEST(MoveNoise, HoldsForRandomStatesAndChannels) {
    Rng rng(7);
    for (int trial = 0; trial < 100; ++trial) {
        dense::DensityMatrix d = random_density(3, rng);
        size_t a = rng.below(3), b = (a + 1 + rng.below(2)) % 3;
        PauliChannel c = trial % 2 ? random_channel(rng) : PauliChannel::depolarizing(rng.uniform());
        auto cert = move_noise_across_bell(d, a, b, c);
        EXPECT_TRUE(cert.equal) << cert.max_difference;
    }
    EXPECT_TRUE(move_noise_across_bell(dense::DensityMatrix::from_state(random_state(3, rng)), 0, 2,
                                       PauliChannel::depolarizing(0.8))
                    .equal);
    EXPECT_TRUE(move_noise_across_bell(random_density(3, rng), 0, 1, PauliChannel::depolarizing(1.0)).equal);
}

TEST(MoveNoise, FailsForNonPauliOperation) {
    // A non-Pauli local unitary does not move across the measurement.
    Rng rng(8);
    dense::DensityMatrix d = random_density(3, rng);
    dense::DensityMatrix on_a = d, on_b = d;
    auto sh = [](size_t q) {
        Circuit c;
        c.num_qubits = 3;
        c.add(GateKind::H, q).add(GateKind::S, q);
        return dense::circuit_matrix(c);
    };
    dense::apply_unitary(on_a, sh(0));
    dense::apply_unitary(on_b, sh(1));
    auto l = dense::bell_measure(on_a, 0, 1), r = dense::bell_measure(on_b, 0, 1);
    double diff = 0;
    for (int i = 0; i < 4; ++i) {
        diff = std::max(diff, std::abs(l[i].probability - r[i].probability));
        diff = std::max(diff, dense::max_abs_diff(l[i].state.rho, r[i].state.rho));
    }
    EXPECT_GT(diff, 1e-3);
}

TEST(MoveNoise, WernerSwapCrossCheck) {
    BellDiagonalState w = BellDiagonalState::werner(0.85);
    dense::DensityMatrix pairs = w.to_density_matrix().tensor(w.to_density_matrix());
    auto swapped = [&](size_t noisy_qubit) {
        dense::DensityMatrix d = pairs;
        dense::depolarize(d, noisy_qubit, 0.5);
        auto branches = dense::bell_measure(d, 1, 2);
        BellDiagonalState total;
        total.c = {0, 0, 0, 0};
        for (int m = 0; m < 4; ++m) {
            dense::DensityMatrix c = branches[m].state;
            dense::apply_unitary(c, dense::pauli_matrix(PauliString::single(2, 1, bell_pauli(m))));
            auto r = BellDiagonalState::from_density_matrix(c);
            for (int k = 0; k < 4; ++k) total.c[k] += branches[m].probability * r.c[k];
        }
        return total;
    };
    BellDiagonalState left = swapped(1), right = swapped(2);
    BellDiagonalState analytic = swap_pairs(apply_depolarizing(w, Side::B, 0.5), w);
    for (int k = 0; k < 4; ++k) {
        EXPECT_NEAR(left.c[k], right.c[k], 1e-12);
        EXPECT_NEAR(left.c[k], analytic.c[k], 1e-12);
    }
}
