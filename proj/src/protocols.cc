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

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace mbqc {

namespace {

bool parity(uint64_t v) { return (std::popcount(v) & 1) != 0; }

Pauli1 pauli_product(Pauli1 a, Pauli1 b) { return make_pauli1(pauli_x(a) != pauli_x(b), pauli_z(a) != pauli_z(b)); }

int noise_label(double p, Rng &rng) { return bell_index(depolarize_sample(p, rng)); }

// Bilateral twirl on a label: the identity stays, the others are spread
// evenly over the three non-identity Bell states.
int twirl_label(int idx, Rng &rng) { return idx == 0 ? 0 : 1 + int(rng.below(3)); }

LabelTable build_label_table(RecurrenceVariant v) {
    const PairMap &m = recurrence_map(v);
    LabelTable t;
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            t[i][j] = -1;
            for (int k = 0; k < 4; ++k) {
                double w = m[k][i][j];
                if (w > 0.5) {
                    t[i][j] = k;
                } else if (w > 1e-12) {
                    throw std::logic_error("recurrence table is not deterministic on Bell labels");
                }
            }
        }
    }
    return t;
}

uint64_t bits_to_mask(const std::vector<bool> &bits, size_t count) {
    uint64_t s = 0;
    for (size_t j = 0; j < count && j < bits.size(); ++j) {
        if (bits[j]) s |= uint64_t{1} << j;
    }
    return s;
}

constexpr uint64_t kMaxAttempts = 100000000;

}  // namespace

const LabelTable &recurrence_label_table(RecurrenceVariant v) {
    static const LabelTable bbpssw = build_label_table(RecurrenceVariant::BBPSSW);
    static const LabelTable dejmps = build_label_table(RecurrenceVariant::DEJMPS);
    return v == RecurrenceVariant::BBPSSW ? bbpssw : dejmps;
}

Interval wilson_interval(uint64_t hits, uint64_t trials, double z) {
    if (trials == 0) return {0, 1};
    double n = double(trials), p = double(hits) / n, z2 = z * z;
    double denom = 1 + z2 / n;
    double center = (p + z2 / (2 * n)) / denom;
    double half = z * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n)) / denom;
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

double ProtocolStats::fidelity_sigma() const {
    if (kept == 0) return 1;
    double f = fidelity();
    return std::sqrt(std::max(f * (1 - f), 1e-300) / double(kept));
}

void ProtocolStats::merge(const ProtocolStats &other) {
    samples += other.samples;
    kept += other.kept;
    good += other.good;
    consumed += other.consumed;
    produced += other.produced;
}

int sample_bell_index(const BellDiagonalState &s, Rng &rng) {
    double u = rng.uniform(), acc = 0;
    for (int i = 0; i < 3; ++i) {
        acc += s.c[i];
        if (u < acc) return i;
    }
    return 3;
}

StabilizerState bell_pair_state(int index) {
    StabilizerState s = StabilizerState::from_generators({PauliString::parse("XX"), PauliString::parse("ZZ")});
    s.apply_pauli(1, bell_pauli(index));
    return s;
}

int bell_index_of(const StabilizerState &s, size_t a, size_t b) {
    PauliString xx(s.num_qubits()), zz(s.num_qubits());
    xx.set(a, Pauli1::X);
    xx.set(b, Pauli1::X);
    zz.set(a, Pauli1::Z);
    zz.set(b, Pauli1::Z);
    auto vx = s.peek(xx), vz = s.peek(zz);
    if (!vx || !vz) throw std::domain_error("qubits are not in a Bell state");
    return 2 * (*vz < 0 ? 1 : 0) + (*vx < 0 ? 1 : 0);
}

RecurrenceMode parse_mode(const std::string &name) {
    if (name == "stepwise") return RecurrenceMode::Stepwise;
    if (name == "merged") return RecurrenceMode::Merged;
    throw std::invalid_argument("unknown purification mode: " + name);
}

Engine parse_engine(const std::string &name) {
    if (name == "stabilizer") return Engine::Stabilizer;
    if (name == "labels") return Engine::Labels;
    throw std::invalid_argument("unknown engine: " + name);
}

// Recurrence purification.

namespace {

struct Trajectory {
    bool kept = false;
    bool good = false;
    double consumed = 0;
};

class LabelRecurrence {
   public:
    LabelRecurrence(const BellDiagonalState &input, const NoiseModel &noise, const RecurrenceOptions &opt)
        : input_(input), opt_(opt), table_(recurrence_label_table(opt.variant)) {
        p_in_ = noise.p_resource * noise.q_meas * noise.q_meas;
        p_out_ = noise.p_resource;
    }

    Trajectory run(Rng &rng) {
        Trajectory t;
        if (opt_.mode == RecurrenceMode::Merged) {
            size_t count = size_t{1} << opt_.rounds;
            std::vector<int> level(count);
            for (int &l : level) {
                l = sample_bell_index(input_, rng);
                if (opt_.variant == RecurrenceVariant::BBPSSW) l = twirl_label(l, rng);
                l ^= noise_label(p_in_, rng) ^ noise_label(p_in_, rng);
            }
            t.consumed = double(count);
            bool ok = true;
            while (level.size() > 1 && ok) {
                std::vector<int> next(level.size() / 2);
                for (size_t i = 0; i < next.size(); ++i) {
                    int k = table_[level[2 * i]][level[2 * i + 1]];
                    if (k < 0) {
                        ok = false;
                        break;
                    }
                    next[i] = k;
                }
                level = std::move(next);
            }
            if (!ok) return t;
            int out = level[0] ^ noise_label(p_out_, rng) ^ noise_label(p_out_, rng);
            t.kept = true;
            t.good = out == 0;
            return t;
        }
        std::optional<int> r = attempt(opt_.rounds, rng, t.consumed);
        t.kept = r.has_value();
        t.good = r && *r == 0;
        return t;
    }

   private:
    int succeed(size_t level, Rng &rng, double &consumed) {
        if (level == 0) {
            consumed += 1;
            return sample_bell_index(input_, rng);
        }
        for (uint64_t n = 0; n < kMaxAttempts; ++n) {
            if (auto r = attempt(level, rng, consumed)) return *r;
        }
        throw std::runtime_error("purification round never succeeds");
    }

    std::optional<int> attempt(size_t level, Rng &rng, double &consumed) {
        int a = succeed(level - 1, rng, consumed);
        int b = succeed(level - 1, rng, consumed);
        if (opt_.variant == RecurrenceVariant::BBPSSW) {
            a = twirl_label(a, rng);
            b = twirl_label(b, rng);
        }
        a ^= noise_label(p_in_, rng) ^ noise_label(p_in_, rng);
        b ^= noise_label(p_in_, rng) ^ noise_label(p_in_, rng);
        int k = table_[a][b];
        if (k < 0) return std::nullopt;
        return k ^ noise_label(p_out_, rng) ^ noise_label(p_out_, rng);
    }

    BellDiagonalState input_;
    RecurrenceOptions opt_;
    LabelTable table_;
    double p_in_ = 1, p_out_ = 1;
};

class StabilizerRecurrence {
   public:
    StabilizerRecurrence(const BellDiagonalState &input, const NoiseModel &noise, const RecurrenceOptions &opt)
        : input_(input), noise_(noise), opt_(opt) {
        if (opt.mode == RecurrenceMode::Merged) {
            alice_ = epp_recurrence(opt.rounds, opt.variant, Party::Alice);
            bob_ = epp_recurrence(opt.rounds, opt.variant, Party::Bob);
        } else {
            alice_ = epp_round(opt.variant, Party::Alice);
            bob_ = epp_round(opt.variant, Party::Bob);
        }
    }

    Trajectory run(Rng &rng) {
        Trajectory t;
        if (opt_.mode == RecurrenceMode::Merged) {
            size_t count = size_t{1} << opt_.rounds;
            std::vector<StabilizerState> pairs;
            for (size_t i = 0; i < count; ++i) {
                StabilizerState s = elementary(rng);
                if (opt_.variant == RecurrenceVariant::BBPSSW) twirl(s, rng);
                pairs.push_back(std::move(s));
            }
            t.consumed = double(count);
            auto r = combine(pairs, rng);
            t.kept = r.has_value();
            t.good = r && bell_index_of(*r, 0, 1) == 0;
            return t;
        }
        auto r = attempt(opt_.rounds, rng, t.consumed);
        t.kept = r.has_value();
        t.good = r && bell_index_of(*r, 0, 1) == 0;
        return t;
    }

   private:
    StabilizerState elementary(Rng &rng) { return bell_pair_state(sample_bell_index(input_, rng)); }

    void twirl(StabilizerState &s, Rng &rng) {
        int idx = bell_index_of(s, 0, 1);
        s.apply_pauli(1, bell_pauli(idx ^ twirl_label(idx, rng)));
    }

    // Alice's resource takes the A ends, Bob's the B ends; returns the output
    // pair when both parties record the same bits.
    std::optional<StabilizerState> combine(const std::vector<StabilizerState> &pairs, Rng &rng) {
        StabilizerState host = pairs[0];
        for (size_t i = 1; i < pairs.size(); ++i) host = host.tensor(pairs[i]);
        std::vector<size_t> a_ends, b_ends;
        for (size_t i = 0; i < pairs.size(); ++i) {
            a_ends.push_back(2 * i);
            b_ends.push_back(i);
        }
        TeleportOptions apply;
        apply.apply_frame = true;
        TeleportResult ra = teleport_in(alice_, host, a_ends, noise_, rng, apply);
        TeleportResult rb = teleport_in(bob_, ra.state, b_ends, noise_, rng, apply);
        if (ra.byproduct.bits != rb.byproduct.bits) return std::nullopt;
        return rb.state;
    }

    StabilizerState succeed(size_t level, Rng &rng, double &consumed) {
        if (level == 0) {
            consumed += 1;
            return elementary(rng);
        }
        for (uint64_t n = 0; n < kMaxAttempts; ++n) {
            if (auto r = attempt(level, rng, consumed)) return *r;
        }
        throw std::runtime_error("purification round never succeeds");
    }

    std::optional<StabilizerState> attempt(size_t level, Rng &rng, double &consumed) {
        std::vector<StabilizerState> pairs;
        pairs.push_back(succeed(level - 1, rng, consumed));
        pairs.push_back(succeed(level - 1, rng, consumed));
        if (opt_.variant == RecurrenceVariant::BBPSSW) {
            for (auto &p : pairs) twirl(p, rng);
        }
        return combine(pairs, rng);
    }

    BellDiagonalState input_;
    NoiseModel noise_;
    RecurrenceOptions opt_;
    ResourceSpec alice_, bob_;
};

template <class Engine_>
ProtocolStats run_trajectories(Engine_ &engine, const RecurrenceOptions &opt) {
    ProtocolStats stats;
    stats.seed = opt.seed;
    for (uint64_t i = 0; i < opt.samples; ++i) {
        Rng rng = seed_derive(opt.seed, opt.family, opt.first_trajectory + i);
        Trajectory t = engine.run(rng);
        stats.samples += 1;
        stats.kept += t.kept ? 1 : 0;
        stats.good += t.good ? 1 : 0;
        stats.consumed += t.consumed;
        stats.produced += t.kept ? 1 : 0;
    }
    return stats;
}

}  // namespace

ProtocolStats purify_recurrence(const BellDiagonalState &input, const NoiseModel &noise,
                                const RecurrenceOptions &options) {
    input.validate();
    noise.validate();
    if (options.rounds == 0) throw std::invalid_argument("purification needs at least one round");
    if (options.engine == Engine::Stabilizer) {
        StabilizerRecurrence engine(input, noise, options);
        return run_trajectories(engine, options);
    }
    if (options.mode == RecurrenceMode::Merged && options.rounds > 20) {
        throw std::invalid_argument("too many merged rounds");
    }
    LabelRecurrence engine(input, noise, options);
    return run_trajectories(engine, options);
}

RecurrenceResult merged_recurrence_analytic(const BellDiagonalState &input, size_t rounds, const NoiseModel &noise,
                                            RecurrenceVariant variant) {
    double p_in = noise.p_resource * noise.q_meas * noise.q_meas;
    BellDiagonalState s = apply_depolarizing(apply_depolarizing(input, Side::A, p_in), Side::B, p_in);
    double success = 1;
    for (size_t r = 0; r < rounds; ++r) {
        RecurrenceResult step = recurrence_step(s, s, variant);
        success = success * success * step.p_success;
        s = step.state;
    }
    s = apply_depolarizing(apply_depolarizing(s, Side::A, noise.p_resource), Side::B, noise.p_resource);
    return {s, success};
}

// Hashing.

std::vector<HashingCheck> random_hashing_checks(size_t pairs, size_t checks, Rng &rng) {
    if (checks >= pairs && pairs > 0) throw std::invalid_argument("hashing needs fewer checks than pairs");
    std::vector<size_t> present(pairs);
    for (size_t i = 0; i < pairs; ++i) present[i] = i;
    std::vector<HashingCheck> out;
    for (size_t c = 0; c < checks; ++c) {
        HashingCheck h;
        size_t pos = rng.below(present.size());
        h.target = present[pos];
        h.select.assign(pairs, 0);
        for (size_t i : present) h.select[i] = uint8_t(rng.below(4));
        h.select[h.target] = uint8_t(1 + rng.below(3));
        present.erase(present.begin() + long(pos));
        out.push_back(std::move(h));
    }
    return out;
}

HashingCircuit::HashingCircuit(size_t pairs, const std::vector<HashingCheck> &checks) : pairs_(pairs) {
    if (2 * pairs > 64) throw std::invalid_argument("hashing supports at most 32 pairs");
    x_.resize(pairs);
    z_.resize(pairs);
    for (size_t i = 0; i < pairs; ++i) {
        x_[i] = uint64_t{1} << (2 * i);
        z_[i] = uint64_t{1} << (2 * i + 1);
    }
    std::vector<bool> present(pairs, true);
    auto rotate = [&](size_t i, uint8_t sel) {
        if (sel == 2) {
            std::swap(x_[i], z_[i]);
        } else if (sel == 3) {
            z_[i] ^= x_[i];
            std::swap(x_[i], z_[i]);
        }
    };
    for (const HashingCheck &h : checks) {
        if (h.target >= pairs || !present[h.target] || h.select.size() != pairs) {
            throw std::invalid_argument("bad hashing check");
        }
        size_t t = h.target;
        rotate(t, h.select[t] == 0 ? 1 : h.select[t]);
        for (size_t i = 0; i < pairs; ++i) {
            if (i == t || !present[i] || h.select[i] == 0) continue;
            rotate(i, h.select[i]);
            x_[t] ^= x_[i];
            z_[i] ^= z_[t];
        }
        syndrome_.push_back(x_[t]);
        present[t] = false;
        targets_.push_back(t);
    }
    for (size_t i = 0; i < pairs; ++i) {
        if (present[i]) remaining_.push_back(i);
    }
}

namespace {

uint64_t label_mask(const std::vector<int> &labels) {
    uint64_t e = 0;
    for (size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] & 2) e |= uint64_t{1} << (2 * i);
        if (labels[i] & 1) e |= uint64_t{1} << (2 * i + 1);
    }
    return e;
}

uint64_t pair_mask(size_t i, int label) {
    uint64_t e = 0;
    if (label & 2) e |= uint64_t{1} << (2 * i);
    if (label & 1) e |= uint64_t{1} << (2 * i + 1);
    return e;
}

}  // namespace

uint64_t HashingCircuit::syndrome(const std::vector<int> &labels) const {
    uint64_t e = label_mask(labels), s = 0;
    for (size_t c = 0; c < syndrome_.size(); ++c) {
        if (parity(syndrome_[c] & e)) s |= uint64_t{1} << c;
    }
    return s;
}

std::vector<int> HashingCircuit::residual(const std::vector<int> &labels) const {
    uint64_t e = label_mask(labels);
    std::vector<int> out;
    for (size_t i : remaining_) out.push_back(2 * (parity(x_[i] & e) ? 1 : 0) + (parity(z_[i] & e) ? 1 : 0));
    return out;
}

std::optional<std::vector<int>> HashingCircuit::decode(uint64_t syndrome, const BellDiagonalState &pair) const {
    size_t k = syndrome_.size();
    if (k > 20) throw std::invalid_argument("too many hashing checks for exact decoding");
    size_t states = size_t{1} << k;
    struct Cell {
        double logp = -std::numeric_limits<double>::infinity();
        size_t weight = 0;
        std::vector<uint8_t> labels;
    };
    auto better = [](const Cell &a, const Cell &b) {
        if (std::isinf(b.logp)) return !std::isinf(a.logp);
        if (std::isinf(a.logp)) return false;
        double tol = 1e-9 * std::max(1.0, std::abs(b.logp));
        if (a.logp > b.logp + tol) return true;
        if (a.logp < b.logp - tol) return false;
        if (a.weight != b.weight) return a.weight < b.weight;
        return a.labels < b.labels;
    };
    std::array<double, 4> logc;
    for (int l = 0; l < 4; ++l) logc[l] = pair.c[l] > 0 ? std::log(pair.c[l]) : -std::numeric_limits<double>::infinity();
    std::vector<Cell> cur(states), next(states);
    cur[0].logp = 0;
    for (size_t i = 0; i < pairs_; ++i) {
        std::array<uint64_t, 4> contrib{};
        for (int l = 0; l < 4; ++l) {
            uint64_t e = pair_mask(i, l);
            for (size_t c = 0; c < k; ++c) {
                if (parity(syndrome_[c] & e)) contrib[l] |= uint64_t{1} << c;
            }
        }
        for (auto &cell : next) cell = Cell{};
        for (size_t s = 0; s < states; ++s) {
            if (std::isinf(cur[s].logp)) continue;
            for (int l = 0; l < 4; ++l) {
                if (std::isinf(logc[l])) continue;
                Cell cand;
                cand.logp = cur[s].logp + logc[l];
                cand.weight = cur[s].weight + (l != 0 ? 1 : 0);
                cand.labels = cur[s].labels;
                cand.labels.push_back(uint8_t(l));
                Cell &dst = next[s ^ contrib[l]];
                if (better(cand, dst)) dst = std::move(cand);
            }
        }
        std::swap(cur, next);
    }
    if (syndrome >= states || std::isinf(cur[syndrome].logp)) return std::nullopt;
    return std::vector<int>(cur[syndrome].labels.begin(), cur[syndrome].labels.end());
}

BellDiagonalState hashing_pair(const HashingEnsemble &ensemble, const NoiseModel &noise) {
    double p = noise.p_resource * noise.q_meas * noise.q_meas;
    return apply_depolarizing(apply_depolarizing(ensemble.pair, Side::A, p), Side::B, p);
}

ProtocolStats purify_hashing(const HashingEnsemble &ensemble, const NoiseModel &noise, const HashingOptions &options) {
    ensemble.pair.validate();
    noise.validate();
    if (ensemble.pairs == 0 || ensemble.pairs > 24) throw std::invalid_argument("hashing supports 1 to 24 pairs");
    if (options.checks >= ensemble.pairs) throw std::invalid_argument("hashing needs fewer checks than pairs");
    BellDiagonalState pair = hashing_pair(ensemble, noise);
    ProtocolStats stats;
    stats.seed = options.seed;
    for (uint64_t t = 0; t < options.samples; ++t) {
        Rng rng = seed_derive(options.seed, options.family, options.first_trajectory + t);
        HashingCircuit circuit(ensemble.pairs, random_hashing_checks(ensemble.pairs, options.checks, rng));
        std::vector<int> labels(ensemble.pairs);
        for (int &l : labels) l = sample_bell_index(pair, rng);
        auto guess = circuit.decode(circuit.syndrome(labels), pair);
        bool ok = guess && circuit.residual(*guess) == circuit.residual(labels);
        stats.samples += 1;
        stats.kept += 1;
        stats.good += ok ? 1 : 0;
        stats.consumed += double(ensemble.pairs);
        stats.produced += double(ensemble.pairs - options.checks);
    }
    return stats;
}

double hashing_block_error(const HashingEnsemble &ensemble, const NoiseModel &noise, const HashingCircuit &circuit) {
    size_t k = circuit.num_checks();
    if (k > 8) throw std::invalid_argument("exact hashing supports at most 8 checks");
    if (circuit.pairs() != ensemble.pairs) throw std::invalid_argument("circuit does not match the ensemble");
    BellDiagonalState pair = hashing_pair(ensemble, noise);
    const auto &rem = circuit.remaining();
    const auto &tg = circuit.targets();
    uint64_t target_bits = 0;
    for (size_t t : tg) target_bits |= uint64_t{3} << (2 * t);

    // Own-part map of every remaining pair and its inverse.
    std::vector<std::array<int, 4>> inverse(rem.size());
    std::vector<std::array<uint64_t, 4>> rem_syndrome(rem.size());
    for (size_t r = 0; r < rem.size(); ++r) {
        size_t i = rem[r];
        uint64_t own = uint64_t{3} << (2 * i);
        uint64_t fx = circuit.x_form(i), fz = circuit.z_form(i);
        if ((fx & ~(own | target_bits)) || (fz & ~(own | target_bits))) {
            throw std::logic_error("remaining pair depends on another remaining pair");
        }
        inverse[r].fill(-1);
        for (int y = 0; y < 4; ++y) {
            uint64_t e = pair_mask(i, y);
            int cur = 2 * (parity(fx & e) ? 1 : 0) + (parity(fz & e) ? 1 : 0);
            inverse[r][cur] = y;
            uint64_t s = 0;
            for (size_t c = 0; c < k; ++c) {
                if (parity(circuit.syndrome_form(c) & e)) s |= uint64_t{1} << c;
            }
            rem_syndrome[r][y] = s;
        }
        for (int v : inverse[r]) {
            if (v < 0) throw std::logic_error("remaining pair map is not invertible");
        }
    }

    size_t states = size_t{1} << k;
    std::vector<std::optional<std::vector<int>>> guess(states);
    for (uint64_t s = 0; s < states; ++s) {
        if (auto g = circuit.decode(s, pair)) guess[s] = circuit.residual(*g);
    }

    double success = 0;
    size_t combos = size_t{1} << (2 * k);
    std::vector<int> labels(circuit.pairs(), 0);
    for (size_t code = 0; code < combos; ++code) {
        double pt = 1;
        for (size_t j = 0; j < k; ++j) {
            labels[tg[j]] = int((code >> (2 * j)) & 3);
            pt *= pair.c[labels[tg[j]]];
        }
        if (pt == 0) continue;
        uint64_t et = label_mask(labels) & target_bits;
        uint64_t st = 0;
        for (size_t c = 0; c < k; ++c) {
            if (parity(circuit.syndrome_form(c) & et)) st |= uint64_t{1} << c;
        }
        std::vector<int> shift(rem.size());
        for (size_t r = 0; r < rem.size(); ++r) {
            size_t i = rem[r];
            shift[r] = 2 * (parity(circuit.x_form(i) & et) ? 1 : 0) + (parity(circuit.z_form(i) & et) ? 1 : 0);
        }
        for (uint64_t s = 0; s < states; ++s) {
            if (!guess[s]) continue;
            double pr = pt;
            uint64_t total = st;
            for (size_t r = 0; r < rem.size() && pr > 0; ++r) {
                int y = inverse[r][(*guess[s])[r] ^ shift[r]];
                pr *= pair.c[y];
                total ^= rem_syndrome[r][y];
            }
            if (pr > 0 && total == s) success += pr;
        }
    }
    return std::max(0.0, 1 - success);
}

bool hashing_regime_nonempty(double p, double q) {
    check_probability(p, "resource parameter");
    check_probability(q, "channel parameter");
    BellDiagonalState s = BellDiagonalState::from_depolarizing(q * q);
    s = apply_depolarizing(apply_depolarizing(s, Side::A, p), Side::B, p);
    return entropy_yield(s) > 0 && p * p >= q * q;
}

// Error correction.

QecKit::QecKit(CodeSpec c)
    : code(std::move(c)),
      encode(encode_resource(code)),
      correct(correction_resource(code)),
      decode(decode_syndrome_resource(code)) {}

namespace {

std::vector<size_t> block_wiring(const CodeBlock &b, size_t n) {
    std::vector<size_t> w(n);
    for (size_t k = 0; k < n; ++k) w[k] = b.offset + k;
    return w;
}

std::vector<BellOutcome> effective_outcomes(const std::vector<BellOutcome> &raw, const PauliString &frame) {
    std::vector<BellOutcome> out(raw.size());
    for (size_t k = 0; k < raw.size(); ++k) out[k] = BellOutcome::from_index(raw[k].index() ^ bell_index(frame.get(k)));
    return out;
}

PauliString letters(const PauliString &p) {
    PauliString out(p.num_qubits());
    for (size_t q = 0; q < p.num_qubits(); ++q) out.set(q, p.get(q));
    return out;
}

}  // namespace

CodeBlock qec_encode(const QecKit &kit, const StabilizerState &host, size_t qubit, const NoiseModel &noise, Rng &rng) {
    std::vector<size_t> wiring{qubit};
    TeleportResult t = teleport_in(kit.encode, host, wiring, noise, rng);
    return CodeBlock{std::move(t.state), t.output_offset, letters(t.byproduct.frame)};
}

QecStep qec_correct(const QecKit &kit, const CodeBlock &block, const NoiseModel &noise, Rng &rng) {
    size_t n = kit.code.n;
    if (block.frame.num_qubits() != n || block.offset + n > block.state.num_qubits()) {
        throw std::invalid_argument("block does not match the code");
    }
    std::vector<size_t> wiring = block_wiring(block, n);
    TeleportResult t = teleport_in(kit.correct, block.state, wiring, noise, rng);
    Byproduct by = kit.correct.byproduct(effective_outcomes(t.outcomes, block.frame));
    QecStep step;
    step.syndrome = bits_to_mask(by.bits, kit.code.stabilizers.size());
    step.correctable = kit.code.corrections.count(step.syndrome) > 0;
    step.block.state = std::move(t.state);
    step.block.offset = t.output_offset;
    step.block.frame = letters(multiply(by.frame, correction_frame(kit.code, step.syndrome)));
    return step;
}

DecodedQubit qec_decode(const QecKit &kit, const CodeBlock &block, const NoiseModel &noise, Rng &rng) {
    size_t n = kit.code.n;
    if (block.frame.num_qubits() != n || block.offset + n > block.state.num_qubits()) {
        throw std::invalid_argument("block does not match the code");
    }
    std::vector<size_t> wiring = block_wiring(block, n);
    TeleportResult t = teleport_in(kit.decode, block.state, wiring, noise, rng);
    Byproduct by = kit.decode.byproduct(effective_outcomes(t.outcomes, block.frame));
    DecodedQubit d;
    d.syndrome = bits_to_mask(by.bits, kit.code.stabilizers.size());
    d.correctable = kit.code.corrections.count(d.syndrome) > 0;
    d.frame = pauli_product(by.frame.get(0), decoded_correction(kit.code, d.syndrome));
    d.state = std::move(t.state);
    d.qubit = t.output_offset;
    return d;
}

void apply_frame(CodeBlock &block) {
    for (size_t k = 0; k < block.frame.num_qubits(); ++k) block.state.apply_pauli(block.offset + k, block.frame.get(k));
    block.frame = PauliString(block.frame.num_qubits());
}

double ring5_logical_parameter(double p_tilde) {
    check_probability(p_tilde, "depolarizing parameter");
    double p_no = (3 * p_tilde + 1) / 4, p_yes = 3 * (1 - p_tilde) / 4;
    double p_no_l = std::pow(p_no, 5) + 5 * std::pow(p_no, 4) * p_yes;
    return (4 * p_no_l - 1) / 3;
}

double repetition_logical_error(size_t m, double e) {
    check_probability(e, "flip probability");
    if (m == 0 || m % 2 == 0) throw std::invalid_argument("majority vote needs an odd code size");
    double total = 0;
    for (size_t k = m / 2 + 1; k <= m; ++k) {
        double binom = std::exp(std::lgamma(double(m) + 1) - std::lgamma(double(k) + 1) - std::lgamma(double(m - k) + 1));
        total += binom * std::pow(e, double(k)) * std::pow(1 - e, double(m - k));
    }
    return total;
}

PauliChannel logical_channel(const CodeSpec &code, const PauliChannel &error) {
    if (code.n > 10) throw std::invalid_argument("enumeration supports at most 10 qubits");
    PauliChannel out{{0, 0, 0, 0}};
    size_t total = size_t{1} << (2 * code.n);
    PauliString e(code.n);
    for (size_t word = 0; word < total; ++word) {
        double prob = 1;
        for (size_t q = 0; q < code.n; ++q) {
            Pauli1 p = static_cast<Pauli1>((word >> (2 * q)) & 3);
            e.set(q, p);
            prob *= error.prob(p);
        }
        if (prob == 0) continue;
        PauliString residual = multiply(code.correction(code.syndrome(e)), e);
        out.probs[PauliChannel::pauli_slot(code.logical_action(residual))] += prob;
    }
    return out;
}

double logical_error_rate(const CodeSpec &code, double p_tilde) {
    if (code.name == "ring5") return ring5_logical_parameter(p_tilde);
    PauliChannel c = logical_channel(code, PauliChannel::depolarizing(p_tilde));
    return (4 * c.probs[0] - 1) / 3;
}

dense::DensityMatrix dense_decode_output(const QecKit &kit, const dense::Ket &logical, const NoiseModel &noise,
                                         bool moved) {
    noise.validate();
    size_t n = kit.code.n;
    if (2 * n + 1 > kDenseQubitLimit) throw std::invalid_argument("code too large for the dense oracle");
    if (logical.size() != 2) throw std::invalid_argument("logical state must be one qubit");
    dense::Ket in = dense::Ket::Zero(Eigen::Index(1) << n);
    size_t shift = size_t{1} << (n - 1);
    in(0) = logical(0);
    in(Eigen::Index(shift)) = logical(1);
    dense::Ket encoded = dense::clifford_matrix(kit.code.encoder()) * in;
    dense::DensityMatrix block = dense::DensityMatrix::from_ket(encoded);
    dense::DensityMatrix res = dense::DensityMatrix::from_state(kit.decode.state());
    double p = noise.p_resource, q = noise.q_channel, qm = noise.q_meas;
    if (moved) {
        for (size_t k = 0; k < n; ++k) dense::depolarize(block, k, p * p * q * qm * qm);
    } else {
        for (size_t k = 0; k < n; ++k) dense::depolarize(block, k, p * q);
        for (size_t k = 0; k <= n; ++k) dense::depolarize(res, k, p);
    }
    dense::DensityMatrix joint = block.tensor(res);
    if (!moved) {
        for (size_t k = 0; k < n; ++k) {
            dense::depolarize(joint, k, qm);
            dense::depolarize(joint, n + k, qm);
        }
    }
    dense::Matrix acc = dense::Matrix::Zero(2, 2);
    std::vector<BellOutcome> outcomes;
    std::function<void(const dense::DensityMatrix &, double)> walk = [&](const dense::DensityMatrix &d, double prob) {
        size_t j = outcomes.size();
        if (j == n) {
            Byproduct by = kit.decode.byproduct(outcomes);
            uint64_t s = bits_to_mask(by.bits, kit.code.stabilizers.size());
            Pauli1 f = pauli_product(by.frame.get(0), decoded_correction(kit.code, s));
            dense::Matrix u = dense::pauli_matrix(PauliString::single(1, 0, f));
            acc += prob * u * d.rho * u.adjoint();
            return;
        }
        auto branches = dense::bell_measure(d, 0, n - j);
        for (int i = 0; i < 4; ++i) {
            if (branches[i].probability <= 1e-14) continue;
            outcomes.push_back(BellOutcome::from_index(i));
            walk(branches[i].state, prob * branches[i].probability);
            outcomes.pop_back();
        }
    };
    walk(joint, 1.0);
    dense::DensityMatrix out{1, acc};
    if (moved) dense::depolarize(out, 0, p);
    return out;
}

SwapResult swap(const StabilizerState &pair1, const StabilizerState &pair2, const NoiseModel &noise, Rng &rng) {
    if (pair1.num_qubits() != 2 || pair2.num_qubits() != 2) throw std::invalid_argument("swap needs two pairs");
    StabilizerState host = pair1.tensor(pair2);
    SwapResult r;
    r.outcome = noisy_bell_measure(host, 1, 2, noise.q_meas, rng);
    r.pair = std::move(host);
    r.frame = r.outcome.pauli();
    return r;
}

}  // namespace mbqc
