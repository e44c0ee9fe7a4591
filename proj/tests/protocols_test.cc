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

#include "mbqc/protocols.h"

#include <gtest/gtest.h>

#include <cmath>
#include <complex>

#include "mbqc/testing.h"

namespace mbqc {
namespace {

constexpr double kThreeSigma = 3.0;

// |F_mc - F| within 3 sigma of the binomial error at the exact value.
void expect_within(double measured, double exact, uint64_t trials, const std::string &what) {
    double sigma = std::sqrt(std::max(exact * (1 - exact), 1e-12) / double(trials));
    EXPECT_LE(std::abs(measured - exact), kThreeSigma * sigma + 1e-12)
        << what << ": measured " << measured << " exact " << exact << " trials " << trials;
}

BellDiagonalState random_bell_diagonal(Rng &rng) {
    BellDiagonalState s;
    double total = 0;
    for (double &c : s.c) {
        c = -std::log(1 - rng.uniform());
        total += c;
    }
    for (double &c : s.c) c /= total;
    // Lean towards useful inputs.
    s.c[0] = 0.5 + 0.5 * s.c[0];
    return s.normalized();
}

TEST(Stats, WilsonAndMerge) {
    Interval i = wilson_interval(50, 100);
    EXPECT_LT(i.lo, 0.5);
    EXPECT_GT(i.hi, 0.5);
    EXPECT_NEAR(i.hi - 0.5, 0.5 - i.lo, 1e-12);
    Interval none = wilson_interval(0, 0);
    EXPECT_EQ(none.lo, 0);
    EXPECT_EQ(none.hi, 1);
    Interval all = wilson_interval(10, 10);
    EXPECT_LE(all.hi, 1.0);
    EXPECT_GT(all.lo, 0.6);

    ProtocolStats a{10, 7, 5, 20, 7, 0}, b{5, 3, 3, 10, 3, 0}, c{1, 1, 0, 2, 1, 0};
    ProtocolStats ab = a, bc = b;
    ab.merge(b);
    ab.merge(c);
    bc.merge(c);
    ProtocolStats a_bc = a;
    a_bc.merge(bc);
    EXPECT_EQ(ab.samples, a_bc.samples);
    EXPECT_EQ(ab.good, a_bc.good);
    EXPECT_DOUBLE_EQ(ab.yield(), a_bc.yield());
    EXPECT_DOUBLE_EQ(ab.fidelity(), 8.0 / 11.0);
}

TEST(Pairs, BellIndexRoundTrip) {
    for (int i = 0; i < 4; ++i) {
        StabilizerState s = bell_pair_state(i);
        EXPECT_EQ(bell_index_of(s, 0, 1), i);
        dense::DensityMatrix d = dense::DensityMatrix::from_state(s);
        BellDiagonalState b = BellDiagonalState::from_density_matrix(d);
        EXPECT_NEAR(b.c[i], 1.0, 1e-12);
    }
    EXPECT_THROW(bell_index_of(StabilizerState(2), 0, 1), std::domain_error);
}

TEST(Recurrence, OneRoundMatchesMapForWerner) {
    BellDiagonalState w = BellDiagonalState::werner(0.7);
    RecurrenceResult exact = recurrence_step(w, w, RecurrenceVariant::BBPSSW);
    EXPECT_NEAR(exact.state.c[0], 0.735294, 1e-6);
    EXPECT_NEAR(exact.p_success, 0.68, 1e-12);
    for (Engine e : {Engine::Labels, Engine::Stabilizer}) {
        RecurrenceOptions opt;
        opt.rounds = 1;
        opt.variant = RecurrenceVariant::BBPSSW;
        opt.engine = e;
        opt.samples = e == Engine::Labels ? 100000 : 4000;
        opt.seed = 21;
        ProtocolStats s = purify_recurrence(w, NoiseModel{}, opt);
        expect_within(s.fidelity(), exact.state.c[0], s.kept, "fidelity");
        expect_within(s.p_success(), exact.p_success, s.samples, "success");
        EXPECT_NEAR(s.yield(), s.p_success() / 2, 1e-12);
        Interval ci = s.fidelity_interval();
        EXPECT_LE(ci.lo, s.fidelity());
        EXPECT_GE(ci.hi, s.fidelity());
    }
}

TEST(Recurrence, MoreRoundsHigherFidelity) {
    BellDiagonalState w = BellDiagonalState::werner(0.7);
    double prev = 0.7;
    for (size_t m = 1; m <= 6; ++m) {
        RecurrenceResult r = merged_recurrence_analytic(w, m, NoiseModel{}, RecurrenceVariant::DEJMPS);
        EXPECT_GT(r.state.c[0], prev) << m;
        prev = r.state.c[0];
    }
    EXPECT_GT(prev, 0.999);

    RecurrenceOptions opt;
    opt.samples = 20000;
    opt.seed = 22;
    opt.rounds = 1;
    ProtocolStats one = purify_recurrence(w, NoiseModel{}, opt);
    opt.rounds = 2;
    ProtocolStats two = purify_recurrence(w, NoiseModel{}, opt);
    EXPECT_GT(two.fidelity() - one.fidelity(), 3 * std::hypot(one.fidelity_sigma(), two.fidelity_sigma()));
}

TEST(Recurrence, RandomInputsMatchMap) {
    Rng rng(23);
    for (int trial = 0; trial < 20; ++trial) {
        BellDiagonalState in = random_bell_diagonal(rng);
        RecurrenceResult exact = recurrence_step(in, in, RecurrenceVariant::DEJMPS);
        RecurrenceOptions opt;
        opt.rounds = 1;
        opt.samples = 20000;
        opt.seed = 100 + uint64_t(trial);
        opt.engine = trial % 5 == 0 ? Engine::Stabilizer : Engine::Labels;
        if (opt.engine == Engine::Stabilizer) opt.samples = 3000;
        ProtocolStats s = purify_recurrence(in, NoiseModel{}, opt);
        expect_within(s.fidelity(), exact.state.c[0], s.kept, "fidelity " + std::to_string(trial));
        expect_within(s.p_success(), exact.p_success, s.samples, "success " + std::to_string(trial));
    }
}

TEST(Recurrence, NoisyEnginesAgreeWithMovedNoiseModel) {
    BellDiagonalState in = BellDiagonalState::werner(0.8);
    NoiseModel noise{0.97, 0.99, 1};
    for (RecurrenceMode mode : {RecurrenceMode::Merged, RecurrenceMode::Stepwise}) {
        RecurrenceOptions opt;
        opt.rounds = 2;
        opt.mode = mode;
        opt.seed = 24;
        opt.engine = Engine::Stabilizer;
        opt.samples = 3000;
        ProtocolStats stab = purify_recurrence(in, noise, opt);
        opt.engine = Engine::Labels;
        opt.samples = 200000;
        ProtocolStats labels = purify_recurrence(in, noise, opt);
        double sf = std::hypot(stab.fidelity_sigma(), labels.fidelity_sigma());
        EXPECT_LE(std::abs(stab.fidelity() - labels.fidelity()), 3 * sf) << int(mode);
        double ps = std::sqrt(labels.p_success() * (1 - labels.p_success()) / double(stab.samples));
        EXPECT_LE(std::abs(stab.p_success() - labels.p_success()), 3 * ps + 1e-3) << int(mode);
        if (mode == RecurrenceMode::Merged) {
            RecurrenceResult exact = merged_recurrence_analytic(in, 2, noise, RecurrenceVariant::DEJMPS);
            expect_within(labels.fidelity(), exact.state.c[0], labels.kept, "merged fidelity");
            expect_within(labels.p_success(), exact.p_success, labels.samples, "merged success");
        } else {
            // Stepwise: the last round sees pairs that carry one output and
            // one input noise layer per end.
            double p_in = noise.p_resource * noise.q_meas * noise.q_meas;
            BellDiagonalState s = apply_depolarizing(apply_depolarizing(in, Side::A, p_in), Side::B, p_in);
            RecurrenceResult r1 = recurrence_step(s, s, RecurrenceVariant::DEJMPS);
            BellDiagonalState mid = r1.state;
            for (double p : {noise.p_resource, p_in}) mid = apply_depolarizing(apply_depolarizing(mid, Side::A, p), Side::B, p);
            RecurrenceResult r2 = recurrence_step(mid, mid, RecurrenceVariant::DEJMPS);
            BellDiagonalState out =
                apply_depolarizing(apply_depolarizing(r2.state, Side::A, noise.p_resource), Side::B, noise.p_resource);
            expect_within(labels.fidelity(), out.c[0], labels.kept, "stepwise fidelity");
            expect_within(labels.p_success(), r2.p_success, labels.samples, "stepwise success");
        }
    }
}

TEST(Recurrence, MergedSucceedsLessOftenThanOneStepwiseRound) {
    BellDiagonalState in = BellDiagonalState::werner(0.8);
    RecurrenceOptions opt;
    opt.rounds = 3;
    opt.samples = 20000;
    opt.seed = 25;
    ProtocolStats merged = purify_recurrence(in, NoiseModel{}, opt);
    opt.mode = RecurrenceMode::Stepwise;
    ProtocolStats step = purify_recurrence(in, NoiseModel{}, opt);
    EXPECT_LT(merged.p_success(), step.p_success());
    EXPECT_LE(std::abs(merged.fidelity() - step.fidelity()),
              3 * std::hypot(merged.fidelity_sigma(), step.fidelity_sigma()));
}

TEST(Recurrence, RegimeEmptyBelowUniversalBound) {
    double p = 0.75;
    ASSERT_LT(p, std::pow(3.0, -0.25));
    for (size_t m = 1; m <= 4; ++m) {
        for (double f = 0.3; f < 1.0; f += 0.01) {
            RecurrenceResult r =
                merged_recurrence_analytic(BellDiagonalState::werner(f), m, NoiseModel{p, 1, 1}, RecurrenceVariant::DEJMPS);
            EXPECT_LE(r.state.c[0], f) << "m=" << m << " F=" << f;
        }
    }
    RecurrenceOptions opt;
    opt.rounds = 2;
    opt.samples = 50000;
    opt.seed = 26;
    ProtocolStats s = purify_recurrence(BellDiagonalState::werner(0.9), NoiseModel{p, 1, 1}, opt);
    EXPECT_LT(s.fidelity(), 0.9);
}

TEST(Recurrence, ShardingDoesNotChangeCounts) {
    BellDiagonalState in = BellDiagonalState::werner(0.75);
    RecurrenceOptions opt;
    opt.rounds = 2;
    opt.samples = 3000;
    opt.seed = 27;
    ProtocolStats whole = purify_recurrence(in, NoiseModel{0.98, 1, 1}, opt);
    ProtocolStats parts;
    for (uint64_t start : {2000u, 0u, 1000u}) {
        RecurrenceOptions o = opt;
        o.samples = 1000;
        o.first_trajectory = start;
        parts.merge(purify_recurrence(in, NoiseModel{0.98, 1, 1}, o));
    }
    EXPECT_EQ(whole.samples, parts.samples);
    EXPECT_EQ(whole.kept, parts.kept);
    EXPECT_EQ(whole.good, parts.good);
    EXPECT_DOUBLE_EQ(whole.consumed, parts.consumed);
}

// Hashing.

TEST(Hashing, PureInputNeedsNoChecks) {
    HashingEnsemble e{12, BellDiagonalState::perfect()};
    HashingOptions opt;
    opt.checks = 0;
    opt.samples = 200;
    ProtocolStats s = purify_hashing(e, NoiseModel{}, opt);
    EXPECT_EQ(s.good, s.samples);
    EXPECT_DOUBLE_EQ(s.yield(), 1.0);
    HashingCircuit c(12, {});
    EXPECT_NEAR(hashing_block_error(e, NoiseModel{}, c), 0.0, 1e-12);
}

// Physical bilateral gates on 2N qubits (A_i = 2i, B_i = 2i + 1).
void bilateral_rotation(StabilizerState &s, size_t i, uint8_t sel) {
    size_t a = 2 * i, b = 2 * i + 1, n = s.num_qubits();
    auto h = [&] {
        s.apply(CliffordMap::hadamard(n, a));
        s.apply(CliffordMap::hadamard(n, b));
    };
    if (sel == 2) h();
    if (sel == 3) {
        s.apply(CliffordMap::phase(n, a));
        s.apply(CliffordMap::phase_dag(n, b));
        h();
    }
}

TEST(Hashing, ErrorStringsMatchStabilizerSimulation) {
    Rng rng(31);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<HashingCheck> checks = random_hashing_checks(3, 2, rng);
        HashingCircuit circuit(3, checks);
        for (int code = 0; code < 64; ++code) {
            std::vector<int> labels{code & 3, (code >> 2) & 3, (code >> 4) & 3};
            StabilizerState s = bell_pair_state(labels[0]).tensor(bell_pair_state(labels[1])).tensor(bell_pair_state(labels[2]));
            std::vector<bool> present(3, true);
            uint64_t parities = 0;
            for (size_t c = 0; c < checks.size(); ++c) {
                const HashingCheck &h = checks[c];
                size_t t = h.target;
                bilateral_rotation(s, t, h.select[t] == 0 ? 1 : h.select[t]);
                for (size_t i = 0; i < 3; ++i) {
                    if (i == t || !present[i] || h.select[i] == 0) continue;
                    bilateral_rotation(s, i, h.select[i]);
                    s.apply(CliffordMap::cnot(6, 2 * i, 2 * t));
                    s.apply(CliffordMap::cnot(6, 2 * i + 1, 2 * t + 1));
                }
                auto za = s.measure(PauliString::single(6, 2 * t, Pauli1::Z), rng);
                auto zb = s.measure(PauliString::single(6, 2 * t + 1, Pauli1::Z), rng);
                if (za.outcome != zb.outcome) parities |= uint64_t{1} << c;
                present[t] = false;
            }
            EXPECT_EQ(parities, circuit.syndrome(labels));
            std::vector<int> res = circuit.residual(labels);
            ASSERT_EQ(res.size(), 1u);
            size_t r = circuit.remaining()[0];
            EXPECT_EQ(bell_index_of(s, 2 * r, 2 * r + 1), res[0]);
        }
    }
}

TEST(Hashing, DecoderPrefersLikelyThenLightThenFirst) {
    // One check on pair 1 with pair 0 as x source: syndrome 1 means exactly
    // one of x0, x1 is set.
    HashingCheck h{1, {1, 1}};
    HashingCircuit c(2, {h});
    auto g = c.decode(1, BellDiagonalState::werner(0.9));
    ASSERT_TRUE(g.has_value());
    // X (index 2) on pair 0 ties with X on pair 1; lexicographic order picks
    // the string that starts with the identity.
    EXPECT_EQ((*g)[0], 0);
    EXPECT_EQ((*g)[1], 2);
    BellDiagonalState skew{{0.7, 0.05, 0.05, 0.2}};
    auto g2 = c.decode(1, skew);
    ASSERT_TRUE(g2.has_value());
    EXPECT_EQ((*g2)[0], 0);
    EXPECT_EQ((*g2)[1], 3);
    BellDiagonalState only_z{{0.5, 0.5, 0, 0}};
    EXPECT_FALSE(c.decode(1, only_z).has_value());
}

// Brute force over every error string (N = 6).
double brute_block_error(const HashingCircuit &c, const BellDiagonalState &pair) {
    size_t n = c.pairs();
    double ok = 0;
    for (size_t code = 0; code < (size_t{1} << (2 * n)); ++code) {
        std::vector<int> labels(n);
        double p = 1;
        for (size_t i = 0; i < n; ++i) {
            labels[i] = int((code >> (2 * i)) & 3);
            p *= pair.c[labels[i]];
        }
        auto g = c.decode(c.syndrome(labels), pair);
        if (g && c.residual(*g) == c.residual(labels)) ok += p;
    }
    return 1 - ok;
}

TEST(Hashing, ExactErrorMatchesBruteForceAndSampling) {
    Rng rng(32);
    HashingEnsemble e{6, BellDiagonalState{{0.85, 0.05, 0.06, 0.04}}};
    for (size_t k = 0; k <= 3; ++k) {
        HashingCircuit c(6, random_hashing_checks(6, k, rng));
        double exact = hashing_block_error(e, NoiseModel{}, c);
        EXPECT_NEAR(exact, brute_block_error(c, e.pair), 1e-12) << k;
    }
    HashingOptions opt;
    opt.checks = 2;
    opt.samples = 20000;
    opt.seed = 33;
    ProtocolStats s = purify_hashing(e, NoiseModel{}, opt);
    // Average of the exact error over the same random check sets.
    double mean = 0;
    for (uint64_t t = 0; t < 400; ++t) {
        Rng r = seed_derive(opt.seed, opt.family, t);
        HashingCircuit c(6, random_hashing_checks(6, 2, r));
        mean += hashing_block_error(e, NoiseModel{}, c);
    }
    mean /= 400;
    double sigma = std::sqrt(mean * (1 - mean) / double(s.samples)) + 0.01;
    EXPECT_NEAR(1 - s.fidelity(), mean, 3 * sigma);
    EXPECT_DOUBLE_EQ(s.yield(), 4.0 / 6.0);
}

TEST(Hashing, ErrorFallsWithChecksAtSixteenPairs) {
    HashingEnsemble e{16, BellDiagonalState::werner(0.9)};
    Rng rng(34);
    const int sets = 3;
    std::vector<std::vector<HashingCheck>> sequences;
    for (int s = 0; s < sets; ++s) sequences.push_back(random_hashing_checks(16, 8, rng));
    double prev = 2;
    for (size_t k = 0; k <= 8; ++k) {
        double mean = 0;
        for (const auto &seq : sequences) {
            std::vector<HashingCheck> prefix(seq.begin(), seq.begin() + long(k));
            mean += hashing_block_error(e, NoiseModel{}, HashingCircuit(16, prefix));
        }
        mean /= sets;
        if (k == 0) EXPECT_NEAR(mean, 1 - std::pow(0.9, 16), 1e-12);
        EXPECT_LT(mean, prev) << k;
        prev = mean;
    }
}

TEST(Hashing, ResourceNoiseRegime) {
    EXPECT_TRUE(hashing_regime_nonempty(0.95, 0.95));
    EXPECT_FALSE(hashing_regime_nonempty(0.90, 0.90));
    // Boundary from (3 q^2 p^2 + 1)/4 = F_min with q = p.
    double f_min = 0.8107, p_star = std::pow((4 * f_min - 1) / 3, 0.25);
    EXPECT_TRUE(hashing_regime_nonempty(p_star + 0.002, p_star + 0.002));
    EXPECT_FALSE(hashing_regime_nonempty(p_star - 0.002, p_star - 0.002));
}

// Error correction.

StabilizerState ref_pair() { return bell_pair_state(0); }

TEST(Qec, EncodeBasisStates) {
    QecKit kit(CodeSpec::repetition(3));
    Rng rng(41);
    CodeBlock zero = qec_encode(kit, StabilizerState(1), 0, NoiseModel{}, rng);
    apply_frame(zero);
    EXPECT_TRUE(zero.state.same_state(StabilizerState(3)));
    StabilizerState plus(1);
    plus.apply(CliffordMap::hadamard(1, 0));
    CodeBlock ghz = qec_encode(kit, plus, 0, NoiseModel{}, rng);
    apply_frame(ghz);
    dense::Ket expect = dense::Ket::Zero(8);
    expect(0) = expect(7) = 1 / std::sqrt(2.0);
    EXPECT_NEAR(dense::fidelity(dense::DensityMatrix::from_state(ghz.state), expect), 1.0, 1e-12);

    QecKit ring(CodeSpec::ring5());
    for (int t = 0; t < 10; ++t) {
        CodeBlock b = qec_encode(ring, random_state(1, rng), 0, NoiseModel{}, rng);
        apply_frame(b);
        for (const PauliString &g : ring.code.stabilizers) EXPECT_EQ(b.state.peek(g), std::optional<int>(1));
    }
}

// Encodes half of a reference pair, injects `error`, corrects `rounds`
// times and decodes; the frames are applied only at the very end.
StabilizerState round_trip(const QecKit &kit, const PauliString &error, size_t rounds, Rng &rng,
                           std::vector<uint64_t> *syndromes = nullptr) {
    CodeBlock b = qec_encode(kit, ref_pair(), 1, NoiseModel{}, rng);
    b.state.apply_pauli(PauliString(1).tensor(error));
    for (size_t r = 0; r < rounds; ++r) {
        QecStep step = qec_correct(kit, b, NoiseModel{}, rng);
        EXPECT_TRUE(step.correctable);
        if (syndromes) syndromes->push_back(step.syndrome);
        b = step.block;
    }
    DecodedQubit d = qec_decode(kit, b, NoiseModel{}, rng);
    d.state.apply_pauli(d.qubit, d.frame);
    return d.state;
}

TEST(Qec, NoErrorTrivialSyndrome) {
    Rng rng(42);
    for (const CodeSpec &code : {CodeSpec::repetition(3), CodeSpec::ring5()}) {
        QecKit kit(code);
        std::vector<uint64_t> syn;
        StabilizerState out = round_trip(kit, PauliString(code.n), 2, rng, &syn);
        EXPECT_TRUE(out.same_state(ref_pair()));
        for (uint64_t s : syn) EXPECT_EQ(s, 0u);
        EXPECT_TRUE(correction_frame(code, 0).is_identity_up_to_phase());
    }
}

TEST(Qec, RingCorrectsEverySingleError) {
    QecKit kit(CodeSpec::ring5());
    Rng rng(43);
    int fixed = 0;
    for (size_t q = 0; q < 5; ++q) {
        for (Pauli1 p : {Pauli1::X, Pauli1::Y, Pauli1::Z}) {
            PauliString e = PauliString::single(5, q, p);
            std::vector<uint64_t> syn;
            StabilizerState out = round_trip(kit, e, 1, rng, &syn);
            EXPECT_EQ(syn[0], kit.code.syndrome(e));
            if (out.same_state(ref_pair())) ++fixed;
        }
    }
    EXPECT_EQ(fixed, 15);
}

TEST(Qec, RepetitionCorrectsUpToHalfTheFlips) {
    Rng rng(44);
    for (size_t m : {3u, 5u, 7u}) {
        QecKit kit(CodeSpec::repetition(m));
        for (uint64_t mask = 0; mask < (uint64_t{1} << m); ++mask) {
            if (size_t(std::popcount(mask)) > m / 2) continue;
            PauliString e(m);
            for (size_t q = 0; q < m; ++q) {
                if ((mask >> q) & 1) e.set(q, Pauli1::X);
            }
            EXPECT_TRUE(round_trip(kit, e, 1, rng).same_state(ref_pair())) << m << " " << e.str();
        }
    }
}

TEST(Qec, IdentityChannelInDenseOracle) {
    // Every correctable error for repetition(3) (bit flips of weight <= 1
    // times any phase pattern) and every single error for ring5, checked on
    // the dense state of reference + output.
    Rng rng(45);
    dense::Ket phi = dense::phi_plus();
    QecKit rep(CodeSpec::repetition(3));
    for (uint64_t word = 0; word < 64; ++word) {
        PauliString e(3);
        for (size_t q = 0; q < 3; ++q) e.set(q, static_cast<Pauli1>((word >> (2 * q)) & 3));
        size_t flips = 0;
        for (size_t q = 0; q < 3; ++q) flips += e.x(q) ? 1 : 0;
        StabilizerState out = round_trip(rep, e, 1, rng);
        double f = dense::fidelity(dense::DensityMatrix::from_state(out), phi);
        // Phase errors on the bit-flip code act as logical Z.
        size_t phases = 0;
        for (size_t q = 0; q < 3; ++q) phases += e.z(q) ? 1 : 0;
        if (flips <= 1 && phases % 2 == 0) {
            EXPECT_NEAR(f, 1.0, 1e-12) << e.str();
        } else if (flips <= 1) {
            EXPECT_NEAR(f, 0.0, 1e-12) << e.str();
        }
    }
    QecKit ring(CodeSpec::ring5());
    for (size_t q = 0; q < 5; ++q) {
        for (Pauli1 p : {Pauli1::I, Pauli1::X, Pauli1::Y, Pauli1::Z}) {
            StabilizerState out = round_trip(ring, PauliString::single(5, q, p), 2, rng);
            EXPECT_NEAR(dense::fidelity(dense::DensityMatrix::from_state(out), phi), 1.0, 1e-12);
        }
    }
}

TEST(Qec, CombinedResourceGivesIdentity) {
    Rng rng(46);
    for (const CodeSpec &code : {CodeSpec::repetition(3), CodeSpec::ring5()}) {
        ResourceSpec r = encode_decode_combined(code);
        for (int t = 0; t < 20; ++t) {
            std::vector<size_t> w{1};
            TeleportResult res = teleport_in(r, ref_pair(), w, NoiseModel{}, rng);
            uint64_t s = 0;
            for (size_t j = 0; j < res.byproduct.bits.size(); ++j) {
                if (res.byproduct.bits[j]) s |= uint64_t{1} << j;
            }
            EXPECT_EQ(s, 0u);
            res.state.apply_pauli(1, res.byproduct.frame.get(0));
            res.state.apply_pauli(1, decoded_correction(code, s));
            EXPECT_TRUE(res.state.same_state(ref_pair()));
        }
    }
}

TEST(Qec, LogicalErrorFormula) {
    EXPECT_NEAR(ring5_logical_parameter(1.0), 1.0, 1e-15);
    double pt = 0.825;
    double p_no = (3 * pt + 1) / 4, p_yes = 1 - p_no;
    double pl = (4 * (std::pow(p_no, 5) + 5 * std::pow(p_no, 4) * p_yes) - 1) / 3;
    EXPECT_NEAR(ring5_logical_parameter(pt), pl, 1e-15);
    EXPECT_NEAR(ring5_logical_parameter(pt), 0.8249, 1e-4);
    EXPECT_NEAR(logical_error_rate(CodeSpec::ring5(), pt), pl, 1e-15);
    // The full enumeration also counts corrected errors of weight 3 or more.
    PauliChannel exact = logical_channel(CodeSpec::ring5(), PauliChannel::depolarizing(pt));
    EXPECT_GE((4 * exact.probs[0] - 1) / 3, pl - 1e-12);
    double total = 0;
    for (double v : exact.probs) total += v;
    EXPECT_NEAR(total, 1.0, 1e-12);

    for (size_t m : {1u, 3u, 5u, 7u, 9u}) EXPECT_NEAR(repetition_logical_error(m, 0.5), 0.5, 1e-12);
    // Bit-flip code with pure flips: enumeration equals the binomial tail.
    for (size_t m : {3u, 5u}) {
        CodeSpec code = CodeSpec::repetition(m);
        double e = 0.13;
        PauliChannel flips{{1 - e, e, 0, 0}};
        PauliChannel l = logical_channel(code, flips);
        EXPECT_NEAR(l.probs[1], repetition_logical_error(m, e), 1e-12);
    }
    EXPECT_THROW(repetition_logical_error(4, 0.1), std::invalid_argument);
}

TEST(Qec, SmallRotationIsDigitized) {
    CodeSpec code = CodeSpec::ring5();
    dense::Ket logical(2);
    logical << std::complex<double>(0.6, 0), std::complex<double>(0, 0.8);
    dense::Ket in = dense::Ket::Zero(32);
    in(0) = logical(0);
    in(16) = logical(1);
    dense::Ket encoded = dense::clifford_matrix(code.encoder()) * in;
    double theta = 0.3;
    size_t qubit = 2;
    dense::Matrix z = dense::pauli_matrix(PauliString::single(5, qubit, Pauli1::Z));
    dense::Matrix rot = std::cos(theta / 2) * dense::Matrix::Identity(32, 32) -
                        std::complex<double>(0, 1) * std::sin(theta / 2) * z;
    dense::DensityMatrix d = dense::DensityMatrix::from_ket(rot * encoded);
    // Measure the stabilizers one by one and follow every branch.
    std::vector<std::pair<uint64_t, dense::Branch>> branches{{0, dense::Branch{1.0, d}}};
    for (size_t j = 0; j < code.stabilizers.size(); ++j) {
        std::vector<std::pair<uint64_t, dense::Branch>> next;
        for (auto &[s, b] : branches) {
            auto out = dense::measure(b.state, code.stabilizers[j]);
            for (int o = 0; o < 2; ++o) {
                if (out[o].probability < 1e-14) continue;
                next.push_back({s | (uint64_t(o) << j), dense::Branch{b.probability * out[o].probability, out[o].state}});
            }
        }
        branches = std::move(next);
    }
    uint64_t z_syndrome = code.syndrome(PauliString::single(5, qubit, Pauli1::Z));
    ASSERT_EQ(branches.size(), 2u);
    for (auto &[s, b] : branches) {
        double expect = s == 0 ? std::pow(std::cos(theta / 2), 2) : std::pow(std::sin(theta / 2), 2);
        if (s != 0) EXPECT_EQ(s, z_syndrome);
        EXPECT_NEAR(b.probability, expect, 1e-12);
        dense::Matrix fix = dense::pauli_matrix(code.correction(s));
        dense::apply_unitary(b.state, fix);
        EXPECT_NEAR(dense::fidelity(b.state, encoded), 1.0, 1e-12);
    }
}

TEST(Qec, MovedNoiseModelIsExact) {
    NoiseModel noise{0.9, 0.97, 0.95};
    dense::Ket logical(2);
    logical << std::complex<double>(0.8, 0), std::complex<double>(0.36, 0.48);
    for (const CodeSpec &code : {CodeSpec::repetition(3), CodeSpec::ring5()}) {
        QecKit kit(code);
        dense::DensityMatrix physical = dense_decode_output(kit, logical, noise, false);
        dense::DensityMatrix moved = dense_decode_output(kit, logical, noise, true);
        EXPECT_LT(dense::max_abs_diff(physical.rho, moved.rho), 1e-12) << code.name;
        EXPECT_NEAR(physical.trace(), 1.0, 1e-12);
        // Ideal parameters give the input back.
        dense::DensityMatrix ideal = dense_decode_output(kit, logical, NoiseModel{}, false);
        EXPECT_NEAR(dense::fidelity(ideal, logical), 1.0, 1e-12);
    }
}

// Swapping.

TEST(Swap, PerfectPairsStayPerfect) {
    Rng rng(51);
    for (int t = 0; t < 20; ++t) {
        SwapResult r = swap(bell_pair_state(0), bell_pair_state(0), NoiseModel{}, rng);
        r.pair.apply_pauli(1, r.frame);
        EXPECT_EQ(bell_index_of(r.pair, 0, 1), 0);
    }
}

TEST(Swap, WernerPairsMatchMap) {
    BellDiagonalState w = BellDiagonalState::werner(0.9);
    BellDiagonalState exact = swap_pairs(w, w);
    EXPECT_NEAR(exact.c[0], 0.813333, 1e-6);
    Rng rng(52);
    const int n = 40000;
    int good = 0;
    for (int t = 0; t < n; ++t) {
        SwapResult r = swap(bell_pair_state(sample_bell_index(w, rng)), bell_pair_state(sample_bell_index(w, rng)),
                            NoiseModel{}, rng);
        r.pair.apply_pauli(1, r.frame);
        good += bell_index_of(r.pair, 0, 1) == 0 ? 1 : 0;
    }
    expect_within(double(good) / n, exact.c[0], n, "swap fidelity");
}

TEST(Swap, CorrectedBranchesAgreeInDenseOracle) {
    dense::DensityMatrix one = BellDiagonalState::werner(0.8).to_density_matrix();
    dense::DensityMatrix two = BellDiagonalState{{0.7, 0.1, 0.15, 0.05}}.to_density_matrix();
    auto branches = dense::bell_measure(one.tensor(two), 1, 2);
    dense::Matrix first;
    for (int i = 0; i < 4; ++i) {
        ASSERT_GT(branches[i].probability, 0);
        dense::DensityMatrix d = branches[i].state;
        dense::apply_unitary(d, dense::pauli_matrix(PauliString::single(2, 1, BellOutcome::from_index(i).pauli())));
        if (i == 0) {
            first = d.rho;
        } else {
            EXPECT_LT(dense::max_abs_diff(d.rho, first), 1e-12);
        }
    }
    dense::DensityMatrix out{2, first};
    BellDiagonalState got = BellDiagonalState::from_density_matrix(out);
    BellDiagonalState expect = swap_pairs(BellDiagonalState::werner(0.8), BellDiagonalState{{0.7, 0.1, 0.15, 0.05}});
    for (int i = 0; i < 4; ++i) EXPECT_NEAR(got.c[i], expect.c[i], 1e-12);
}

}  // namespace
}  // namespace mbqc
