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

#include "mbqc/netsim.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "mbqc/testing.h"

namespace mbqc {
namespace {

PauliString letters(std::string_view s) { return PauliString::parse(s); }

TEST(Frame, EmptyFrameIsIdentity) {
    PauliFrame f({3, 1});
    EXPECT_TRUE(f.wire(0).is_identity_up_to_phase());
    Rng rng(5, 0, 0);
    StabilizerState s = random_state(4, rng);
    StabilizerState t = s;
    frame_apply(f, 0, t, 1);
    EXPECT_TRUE(t.same_state(s));
    EXPECT_EQ(frame_reinterpret(f, 0, 2, Pauli1::Z, 1), 1);
}

TEST(Frame, PendingXFlipsZReadout) {
    PauliFrame f({2});
    f.record({1, 0, 0, {}, letters("XI")});
    EXPECT_EQ(frame_reinterpret(f, 0, 0, Pauli1::Z, 0), 1);
    EXPECT_EQ(frame_reinterpret(f, 0, 0, Pauli1::X, 0), 0);
    EXPECT_EQ(frame_reinterpret(f, 0, 1, Pauli1::Z, 0), 0);

    // Measuring |0> with the frame applied agrees with the reinterpreted bit.
    StabilizerState s = StabilizerState::from_generators({letters("ZI"), letters("IZ")});
    Rng rng(1, 0, 0);
    StabilizerState applied = s;
    frame_apply(f, 0, applied, 0);
    int bit = applied.measure(letters("ZI"), rng).outcome < 0 ? 1 : 0;
    int raw = s.measure(letters("ZI"), rng).outcome < 0 ? 1 : 0;
    EXPECT_EQ(bit, frame_reinterpret(f, 0, 0, Pauli1::Z, raw));
}

TEST(Frame, ReplayAndComposition) {
    Rng rng(9, 0, 0);
    std::vector<FrameRecord> log;
    for (size_t k = 0; k < 12; ++k) {
        size_t wire = rng.below(2);
        log.push_back({k, wire, k * 3, {int(k % 4)}, random_pauli(wire ? 1 : 3, rng)});
    }
    PauliFrame live({3, 1});
    for (const FrameRecord &r : log) live.record(r);
    PauliFrame replayed = PauliFrame::replay({3, 1}, live.log());
    EXPECT_TRUE(replayed.wire(0).same_letters(live.wire(0)));
    EXPECT_TRUE(replayed.wire(1).same_letters(live.wire(1)));

    PauliFrame a = PauliFrame::replay({3, 1}, {log.begin(), log.begin() + 4});
    PauliFrame b = PauliFrame::replay({3, 1}, {log.begin() + 4, log.begin() + 8});
    PauliFrame c = PauliFrame::replay({3, 1}, {log.begin() + 8, log.end()});
    PauliFrame left = a.then(b).then(c), right = a.then(b.then(c));
    for (size_t w = 0; w < 2; ++w) {
        EXPECT_TRUE(left.wire(w).same_letters(live.wire(w)));
        EXPECT_TRUE(right.wire(w).same_letters(live.wire(w)));
    }
    std::string trace = live.trace();
    EXPECT_EQ(size_t(std::count(trace.begin(), trace.end(), '\n')), log.size());
    EXPECT_NE(trace.find("station=11"), std::string::npos);
}

StabilizerState bell_host() { return bell_pair_state(0); }

TEST(EncodedChain, NoNoiseDeliversTheState) {
    for (const char *code : {"repetition", "ring5"}) {
        ChainConfig cfg;
        cfg.segments = 10;
        cfg.code = code;
        ChainResult r = encoded_chain(cfg, bell_host(), 20, 3);
        EXPECT_EQ(r.stats.good, 20u) << code;
        for (uint64_t n : r.nonzero_syndromes) EXPECT_EQ(n, 0u);
        EXPECT_EQ(r.nonzero_syndromes.size(), 10u);
    }
}

TEST(EncodedChain, DeferredCorrectionMatchesPerStation) {
    ChainConfig cfg;
    cfg.segments = 3;
    cfg.channel = PauliChannel::depolarizing(0.93);
    cfg.station = {0.98, 0.99, 1};
    QecKit kit(catalog_code("ring5"));
    Rng hrng(4, 0, 0);
    StabilizerState host = random_state(1, hrng).tensor(bell_host());
    size_t differ = 0, bad = 0;
    for (uint64_t t = 0; t < 150; ++t) {
        Rng r1 = seed_derive(77, 3, t), r2 = seed_derive(77, 3, t);
        cfg.correct_every_station = false;
        EncodedRun deferred = encoded_trajectory(kit, cfg, host, r1);
        cfg.correct_every_station = true;
        EncodedRun eager = encoded_trajectory(kit, cfg, host, r2);
        if (!deferred.delivered.same_state(eager.delivered)) ++differ;
        if (!deferred.delivered.same_state(host)) ++bad;
        EXPECT_EQ(deferred.syndromes, eager.syndromes);
        PauliFrame again = PauliFrame::replay({5, 1}, deferred.frame.log());
        EXPECT_TRUE(again.wire(1).same_letters(deferred.frame.wire(1)));
    }
    EXPECT_EQ(differ, 0u);
    EXPECT_GT(bad, 0u);  // the noise was visible
}

TEST(EncodedChain, DeferredCorrectionMatchesDensePerTrajectory) {
    ChainConfig cfg;
    cfg.segments = 2;
    cfg.channel = PauliChannel::depolarizing(0.9);
    cfg.station = {0.97, 1, 1};
    QecKit kit(catalog_code("ring5"));
    StabilizerState host = bell_host();
    for (uint64_t t = 0; t < 20; ++t) {
        Rng r1 = seed_derive(8, 3, t), r2 = seed_derive(8, 3, t);
        cfg.correct_every_station = false;
        dense::DensityMatrix a = dense::DensityMatrix::from_state(encoded_trajectory(kit, cfg, host, r1).delivered);
        cfg.correct_every_station = true;
        dense::DensityMatrix b = dense::DensityMatrix::from_state(encoded_trajectory(kit, cfg, host, r2).delivered);
        EXPECT_LT((a.rho - b.rho).norm(), 1e-9) << t;
    }
}

TEST(EncodedChain, AnalyticImprovesAboveRingThreshold) {
    CodeSpec ring = catalog_code("ring5");
    EncodedAnalytic good = encoded_chain_analytic(ring, {0.98, 1, 0.95}, 4);
    EXPECT_GT(good.per_step, 0.98 * 0.98 * 0.95);
    EXPECT_GT(good.encoded, good.unencoded);
    EncodedAnalytic bad = encoded_chain_analytic(ring, {0.9, 1, 0.95}, 4);
    EXPECT_LT(bad.per_step, 0.9 * 0.9 * 0.95);
    EXPECT_LT(bad.encoded, bad.unencoded);
    // Measurement noise folds into the resource parameter.
    EncodedAnalytic folded = encoded_chain_analytic(ring, {0.98, 0.99, 0.95}, 4);
    EncodedAnalytic direct = encoded_chain_analytic(ring, {0.98 * 0.99 * 0.99, 1, 0.95}, 4);
    EXPECT_NEAR(folded.encoded, direct.encoded, 1e-14);
}

// Independent oracle: majority vote fails with the binomial tail, and three
// independent logical Z flips compose as (1 - (1 - 2e)^3) / 2.
double majority_failure(size_t m, double e) {
    double total = 0;
    for (size_t k = m / 2 + 1; k <= m; ++k) {
        double c = std::tgamma(double(m) + 1) / (std::tgamma(double(k) + 1) * std::tgamma(double(m - k) + 1));
        total += c * std::pow(e, double(k)) * std::pow(1 - e, double(m - k));
    }
    return total;
}

TEST(EncodedChain, PhaseFlipRepetitionMatchesBinomial) {
    double last = 1;
    for (size_t m : {3, 5, 7}) {
        ChainConfig cfg;
        cfg.segments = 3;
        cfg.code = "phase_repetition";
        cfg.code_size = m;
        cfg.channel.probs = {0.9, 0, 0, 0.1};
        const uint64_t n = 4000;
        ChainResult r = encoded_chain(cfg, bell_host(), n, 100 + m);
        double eps = majority_failure(m, 0.1);
        double exact = 1 - (1 - std::pow(1 - 2 * eps, 3)) / 2;
        double sigma = std::sqrt(exact * (1 - exact) / double(n));
        EXPECT_NEAR(r.stats.fidelity(), exact, 3 * sigma + 1e-12) << m;
        EXPECT_LT(1 - exact, last);
        last = 1 - exact;
    }
}

// Repeater.

TEST(Repeater, PopulationMatchesBellDiagonalSchedule) {
    ChainConfig cfg;
    cfg.segments = 4;
    cfg.elementary_fidelity = 0.9;
    cfg.rounds = 2;
    ChainResult a = repeater_chain_analytic(cfg);
    ChainResult mc = repeater_chain(cfg, 40000, 12);
    ASSERT_FALSE(a.failed_level);
    ASSERT_FALSE(mc.failed_level);
    ASSERT_EQ(mc.level_fidelity.size(), 3u);
    for (size_t l = 0; l < 3; ++l) EXPECT_NEAR(mc.level_fidelity[l], a.level_fidelity[l], 0.01) << l;
    EXPECT_NEAR(mc.stats.fidelity(), a.level_fidelity.back(), 0.01);
    EXPECT_NEAR(mc.pairs_per_output / a.pairs_per_output, 1, 0.05);
    EXPECT_EQ(mc.station_resource_size, repeater_station(2, RecurrenceVariant::DEJMPS).num_qubits());
    cfg.rounds = 1;
    EXPECT_EQ(repeater_chain_analytic(cfg).station_resource_size,
              repeater_station(1, RecurrenceVariant::DEJMPS).num_qubits());
}

// Independent oracle for the ideal two-level repeater: nested purification
// of Werner pairs with one DEJMPS round per level, written out directly.
TEST(Repeater, IdealAnalyticAgreesWithHandSchedule) {
    ChainConfig cfg;
    cfg.segments = 2;
    cfg.elementary_fidelity = 0.85;
    cfg.rounds = 1;
    ChainResult a = repeater_chain_analytic(cfg);
    auto dejmps = [](std::array<double, 4> c) {
        // Order I, Z, X, Y.
        double A = c[0], B = c[3], C = c[2], D = c[1];
        double n = (A + B) * (A + B) + (C + D) * (C + D);
        return std::array<double, 4>{(A * A + B * B) / n, 2 * A * B / n, (C * C + D * D) / n, 2 * C * D / n};
    };
    double f = 0.85, r = (1 - f) / 3;
    std::array<double, 4> c = dejmps({f, r, r, r});
    ASSERT_NEAR(a.level_fidelity[0], c[0], 1e-12);
    // Swap: index XOR of two independent pairs.
    std::array<double, 4> s{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) s[i ^ j] += c[i] * c[j];
    std::array<double, 4> out = dejmps(s);
    EXPECT_NEAR(a.level_fidelity[1], out[0], 1e-12);
}

TEST(Repeater, NoisyNestingDegradesWithoutTarget) {
    for (size_t levels = 1; levels <= 3; ++levels) {
        ChainConfig cfg;
        cfg.segments = size_t{1} << levels;
        cfg.channel_q = 0.98;
        cfg.station = {0.7, 0.7, 1};
        ChainResult r = repeater_chain_analytic(cfg);
        EXPECT_TRUE(r.failed_level.has_value()) << levels;
    }
}

TEST(Repeater, TargetFidelityHeldAtEveryLevel) {
    ChainConfig cfg;
    cfg.segments = 8;
    cfg.elementary_fidelity = 0.8;
    cfg.target_fidelity = 0.95;
    ChainResult a = repeater_chain_analytic(cfg);
    ASSERT_FALSE(a.failed_level);
    for (size_t l = 0; l + 1 < a.level_fidelity.size(); ++l) EXPECT_GE(a.level_fidelity[l], 0.95);
    ChainResult mc = repeater_chain(cfg, 20000, 3);
    ASSERT_FALSE(mc.failed_level);
    for (double f : mc.level_fidelity) EXPECT_GE(f, 0.95);
    EXPECT_GT(mc.pairs_per_output, 8.0);
    EXPECT_GT(mc.resources_per_output, 0.0);
}

TEST(Repeater, SeparateStationsNeedCleanerResources) {
    ChainConfig cfg;
    cfg.segments = 4;
    cfg.channel_q = 0.95;
    cfg.station = {0.985, 0.985, 1};
    cfg.target_fidelity = 0.97;
    cfg.merged_stations = true;
    EXPECT_FALSE(repeater_chain_analytic(cfg).failed_level);
    cfg.merged_stations = false;
    cfg.station = {0.975, 0.975, 1};
    ChainResult split = repeater_chain_analytic(cfg);
    cfg.merged_stations = true;
    ChainResult merged = repeater_chain_analytic(cfg);
    EXPECT_FALSE(merged.failed_level);
    EXPECT_GE(merged.level_fidelity.back(), split.level_fidelity.back());
}

TEST(Repeater, RejectsBadSegments) {
    ChainConfig cfg;
    cfg.segments = 3;
    EXPECT_THROW(repeater_chain_analytic(cfg), std::invalid_argument);
    cfg.segments = 0;
    EXPECT_THROW(cfg.validate(), std::invalid_argument);
}

}  // namespace
}  // namespace mbqc
