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

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace mbqc {

PauliFrame::PauliFrame(std::vector<size_t> widths) {
    for (size_t w : widths) wires_.emplace_back(w);
}

void PauliFrame::record(FrameRecord r) {
    if (r.wire >= wires_.size()) throw std::invalid_argument("frame record for an unknown wire");
    if (r.update.num_qubits() != wires_[r.wire].num_qubits()) throw std::invalid_argument("frame update has the wrong width");
    PauliString w = multiply(wires_[r.wire], r.update);
    w.set_phase(0);
    wires_[r.wire] = std::move(w);
    log_.push_back(std::move(r));
}

PauliFrame PauliFrame::then(const PauliFrame &later) const {
    if (later.wires_.size() != wires_.size()) throw std::invalid_argument("frames have different wires");
    PauliFrame out = *this;
    for (const FrameRecord &r : later.log_) out.record(r);
    return out;
}

PauliFrame PauliFrame::replay(std::vector<size_t> widths, const std::vector<FrameRecord> &log) {
    PauliFrame f(std::move(widths));
    for (const FrameRecord &r : log) f.record(r);
    return f;
}

std::string PauliFrame::trace() const {
    std::ostringstream out;
    for (const FrameRecord &r : log_) {
        out << "station=" << r.station << " wire=" << r.wire << " syndrome=" << r.syndrome << " outcomes=";
        for (size_t k = 0; k < r.outcomes.size(); ++k) out << (k ? "," : "") << r.outcomes[k];
        out << " update=" << r.update.str() << "\n";
    }
    return out.str();
}

void frame_apply(const PauliFrame &frame, size_t wire, StabilizerState &state, size_t offset) {
    const PauliString &f = frame.wire(wire);
    if (offset + f.num_qubits() > state.num_qubits()) throw std::invalid_argument("frame does not fit the state");
    for (size_t k = 0; k < f.num_qubits(); ++k) state.apply_pauli(offset + k, f.get(k));
}

int frame_reinterpret(const PauliFrame &frame, size_t wire, size_t qubit, Pauli1 basis, int bit) {
    Pauli1 f = frame.wire(wire).get(qubit);
    bool anti = f != Pauli1::I && basis != Pauli1::I && f != basis;
    return anti ? 1 - bit : bit;
}

void ChainConfig::validate() const {
    if (segments == 0) throw std::invalid_argument("chain needs at least one segment");
    channel.validate();
    station.validate();
    check_probability(channel_q, "channel_q");
    if (elementary_fidelity) check_probability(*elementary_fidelity, "elementary_fidelity");
    if (target_fidelity) check_probability(*target_fidelity, "target_fidelity");
    if (rounds > 20 || max_rounds > 200) throw std::invalid_argument("too many purification rounds");
}

size_t ChainConfig::nesting_levels() const {
    if (segments == 0 || (segments & (segments - 1)) != 0) {
        throw std::invalid_argument("repeater segment count must be a power of two");
    }
    size_t levels = 0;
    while ((size_t{1} << levels) < segments) ++levels;
    return levels;
}

// Encoded transmission.

namespace {

PauliString frame_change(const PauliString &before, const PauliString &after) {
    PauliString d = multiply(before, after);
    d.set_phase(0);
    return d;
}

}  // namespace

EncodedRun encoded_trajectory(const QecKit &kit, const ChainConfig &cfg, const StabilizerState &host, Rng &rng) {
    size_t n = kit.code.n;
    if (host.num_qubits() == 0) throw std::invalid_argument("host has no input qubit");
    EncodedRun run;
    run.frame = PauliFrame({n, 1});
    CodeBlock b = qec_encode(kit, host, host.num_qubits() - 1, cfg.station, rng);
    run.frame.record({0, 0, 0, {}, b.frame});
    auto settle = [&](size_t station) {
        if (!cfg.correct_every_station) return;
        run.frame.record({station, 0, 0, {}, b.frame});
        apply_frame(b);
    };
    settle(0);
    for (size_t s = 0; s < cfg.segments; ++s) {
        for (size_t k = 0; k < n; ++k) b.state.apply_pauli(b.offset + k, cfg.channel.sample(rng));
        if (s + 1 == cfg.segments) break;
        QecStep step = qec_correct(kit, b, cfg.station, rng);
        run.frame.record({s + 1, 0, step.syndrome, {}, frame_change(b.frame, step.block.frame)});
        run.syndromes.push_back(step.syndrome);
        run.correctable.push_back(step.correctable);
        b = std::move(step.block);
        settle(s + 1);
    }
    DecodedQubit d = qec_decode(kit, b, cfg.station, rng);
    run.frame.record({cfg.segments, 0, d.syndrome, {}, b.frame});
    run.frame.record({cfg.segments, 1, d.syndrome, {}, PauliString::single(1, 0, d.frame)});
    run.syndromes.push_back(d.syndrome);
    run.correctable.push_back(d.correctable);
    run.delivered = std::move(d.state);
    frame_apply(run.frame, 1, run.delivered, d.qubit);
    return run;
}

ChainResult encoded_chain(const ChainConfig &cfg, const StabilizerState &host, uint64_t samples, uint64_t seed,
                          uint64_t first_trajectory) {
    cfg.validate();
    QecKit kit(catalog_code(cfg.code, cfg.code_size));
    ChainResult out;
    out.stats.seed = seed;
    out.nonzero_syndromes.assign(cfg.segments, 0);
    out.uncorrectable.assign(cfg.segments, 0);
    for (uint64_t t = 0; t < samples; ++t) {
        Rng rng = seed_derive(seed, 3, first_trajectory + t);
        EncodedRun run = encoded_trajectory(kit, cfg, host, rng);
        for (size_t s = 0; s < run.syndromes.size(); ++s) {
            if (run.syndromes[s] != 0) ++out.nonzero_syndromes[s];
            if (!run.correctable[s]) ++out.uncorrectable[s];
        }
        out.stats.samples += 1;
        out.stats.kept += 1;
        out.stats.good += run.delivered.same_state(host) ? 1 : 0;
        out.stats.consumed += 1;
        out.stats.produced += 1;
    }
    out.resources_per_output = double(cfg.segments + 1);
    return out;
}

EncodedAnalytic encoded_chain_analytic(const CodeSpec &code, const NoiseModel &noise, size_t segments) {
    NoiseModel n = noise.normalized();
    double p_tilde = n.p_resource * n.p_resource * n.q_channel;
    EncodedAnalytic a;
    a.per_step = logical_error_rate(code, p_tilde);
    a.encoded = std::pow(a.per_step, double(segments));
    a.unencoded = std::pow(p_tilde, double(segments));
    return a;
}

// Label populations.

double LabelPopulation::fidelity() const {
    if (labels.empty()) return 0;
    size_t good = size_t(std::count(labels.begin(), labels.end(), uint8_t{0}));
    return double(good) / double(labels.size());
}

double LabelPopulation::sigma() const {
    if (labels.empty()) return 1;
    double f = fidelity();
    return std::sqrt(std::max(f * (1 - f), 1e-300) / double(labels.size()));
}

LabelPopulation make_population(const BellDiagonalState &s, size_t size, Rng &rng) {
    LabelPopulation pop;
    pop.labels.resize(size);
    for (uint8_t &l : pop.labels) l = uint8_t(sample_bell_index(s, rng));
    return pop;
}

void population_noise(LabelPopulation &pop, double p, Rng &rng) {
    if (p >= 1) return;
    for (uint8_t &l : pop.labels) l ^= uint8_t(bell_index(depolarize_sample(p, rng)) ^ bell_index(depolarize_sample(p, rng)));
}

void population_noise_end(LabelPopulation &pop, double p, Rng &rng) {
    if (p >= 1) return;
    for (uint8_t &l : pop.labels) l ^= uint8_t(bell_index(depolarize_sample(p, rng)));
}

namespace {

void resample(LabelPopulation &pop, const std::vector<uint8_t> &from, size_t size, Rng &rng) {
    pop.labels.resize(from.empty() ? 0 : size);
    for (uint8_t &l : pop.labels) l = from[rng.below(from.size())];
}

}  // namespace

double population_purify(LabelPopulation &pop, RecurrenceVariant v, Rng &rng) {
    size_t size = pop.labels.size();
    if (size < 2) {
        pop.labels.clear();
        return 0;
    }
    const LabelTable &table = recurrence_label_table(v);
    std::shuffle(pop.labels.begin(), pop.labels.end(), rng);
    if (v == RecurrenceVariant::BBPSSW) {
        for (uint8_t &l : pop.labels) {
            if (l != 0) l = uint8_t(1 + rng.below(3));
        }
    }
    std::vector<uint8_t> kept;
    kept.reserve(size / 2);
    for (size_t i = 0; i + 1 < size; i += 2) {
        int k = table[pop.labels[i]][pop.labels[i + 1]];
        if (k >= 0) kept.push_back(uint8_t(k));
    }
    double success = double(kept.size()) / double(size / 2);
    resample(pop, kept, size, rng);
    return success;
}

void population_connect(LabelPopulation &pop, Rng &rng) {
    size_t size = pop.labels.size();
    if (size < 2) {
        pop.labels.clear();
        return;
    }
    std::shuffle(pop.labels.begin(), pop.labels.end(), rng);
    std::vector<uint8_t> joined;
    joined.reserve(size / 2);
    for (size_t i = 0; i + 1 < size; i += 2) joined.push_back(pop.labels[i] ^ pop.labels[i + 1]);
    resample(pop, joined, size, rng);
}

// Repeater chains. Both versions follow one schedule, written against a
// small state interface.

namespace {

struct LevelCost {
    double pairs = 1;      // elementary pairs per purified pair
    double resources = 0;  // merged resource uses per purified pair
};

LevelCost level_cost(const std::vector<double> &success, size_t level, const LevelCost &below) {
    size_t m = success.size();
    double p_merged = 1;
    for (size_t r = 0; r < m; ++r) p_merged *= std::pow(success[r], double(size_t{1} << (m - 1 - r)));
    double inputs = double(size_t{1} << m) / p_merged;
    LevelCost c;
    c.pairs = inputs * (level == 0 ? 1.0 : 2 * below.pairs);
    c.resources = (m > 0 ? 1 / p_merged : 0) + inputs * (level == 0 ? 0.0 : 2 * below.resources);
    return c;
}

template <class State>
ChainResult run_repeater(const ChainConfig &cfg, State &st) {
    cfg.validate();
    size_t levels = cfg.nesting_levels();
    double p = cfg.station.p_resource, qm = cfg.station.q_meas;
    double p_in = p * qm * qm;
    ChainResult out;
    out.station_resource_size = 2 * (size_t{1} << cfg.rounds);
    LevelCost cost;
    for (size_t level = 0; level <= levels; ++level) {
        st.noise(p_in);
        double f_in = st.fidelity();
        std::vector<double> success;
        if (cfg.target_fidelity) {
            while (st.fidelity() < *cfg.target_fidelity && success.size() < cfg.max_rounds && st.alive()) {
                success.push_back(st.purify(cfg.variant));
            }
        } else {
            for (size_t r = 0; r < cfg.rounds && st.alive(); ++r) success.push_back(st.purify(cfg.variant));
        }
        double f = st.fidelity();
        out.level_fidelity.push_back(f);
        out.level_rounds.push_back(success.size());
        bool failed = !st.alive() || (cfg.target_fidelity ? f < *cfg.target_fidelity : !(f > f_in));
        if (failed) {
            out.failed_level = level;
            break;
        }
        cost = level_cost(success, level, cost);
        if (level < levels) {
            st.noise_one_end(p);
            if (!cfg.merged_stations) st.noise_one_end(p * p * qm * qm);
            st.connect();
        }
    }
    st.noise(p);
    st.fill(out.stats);
    out.pairs_per_output = cost.pairs;
    out.resources_per_output = cost.resources;
    return out;
}

struct PopulationState {
    LabelPopulation pop;
    Rng rng;

    void noise(double p) { population_noise(pop, p, rng); }
    void noise_one_end(double p) { population_noise_end(pop, p, rng); }
    double fidelity() const { return pop.fidelity(); }
    bool alive() const { return !pop.labels.empty(); }
    double purify(RecurrenceVariant v) { return population_purify(pop, v, rng); }
    void connect() { population_connect(pop, rng); }
    void fill(ProtocolStats &s) const {
        s.samples = s.kept = pop.labels.size();
        s.good = uint64_t(std::count(pop.labels.begin(), pop.labels.end(), uint8_t{0}));
        s.produced = 1;
    }
};

struct AnalyticState {
    BellDiagonalState s;

    void noise(double p) { s = apply_depolarizing(apply_depolarizing(s, Side::A, p), Side::B, p); }
    void noise_one_end(double p) { s = apply_depolarizing(s, Side::B, p); }
    double fidelity() const { return s.c[0]; }
    bool alive() const { return true; }
    double purify(RecurrenceVariant v) {
        RecurrenceResult r = recurrence_step(s, s, v);
        s = r.state;
        return r.p_success;
    }
    void connect() { s = swap_pairs(s, s); }
    void fill(ProtocolStats &) const {}
};

BellDiagonalState elementary_pair(const ChainConfig &cfg) {
    if (cfg.elementary_fidelity) return BellDiagonalState::werner(*cfg.elementary_fidelity);
    return BellDiagonalState::from_depolarizing(cfg.channel_q * cfg.channel_q);
}

}  // namespace

ChainResult repeater_chain(const ChainConfig &cfg, uint64_t samples, uint64_t seed) {
    if (samples < 2) throw std::invalid_argument("repeater population needs at least two pairs");
    PopulationState st{LabelPopulation{}, seed_derive(seed, 4, 0)};
    st.pop = make_population(elementary_pair(cfg), samples, st.rng);
    ChainResult r = run_repeater(cfg, st);
    r.stats.seed = seed;
    r.stats.consumed = r.pairs_per_output;
    return r;
}

ChainResult repeater_chain_analytic(const ChainConfig &cfg) {
    AnalyticState st{elementary_pair(cfg)};
    ChainResult r = run_repeater(cfg, st);
    r.stats.consumed = r.pairs_per_output;
    r.stats.produced = 1;
    r.level_fidelity.push_back(st.s.c[0]);
    return r;
}

}  // namespace mbqc
