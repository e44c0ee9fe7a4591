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

#ifndef MBQC_NETSIM_H
#define MBQC_NETSIM_H

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mbqc/bell_diagonal.h"
#include "mbqc/noise.h"
#include "mbqc/protocols.h"
#include "mbqc/rng.h"
#include "mbqc/tableau.h"

namespace mbqc {

/// One classical message: what a station saw and the frame change it
/// implies for one wire.
struct FrameRecord {
    size_t station = 0;
    size_t wire = 0;
    uint64_t syndrome = 0;
    std::vector<int> outcomes;  // Bell outcome indices
    PauliString update;         // multiplied into the wire
};

/// Accumulated Pauli corrections, one PauliString per logical wire, plus
/// the message log they were built from.
class PauliFrame {
   public:
    PauliFrame() = default;
    explicit PauliFrame(std::vector<size_t> widths);

    size_t num_wires() const { return wires_.size(); }
    const PauliString &wire(size_t w) const { return wires_.at(w); }
    const std::vector<FrameRecord> &log() const { return log_; }

    void record(FrameRecord r);
    /// This frame followed by `later` (same wire widths).
    PauliFrame then(const PauliFrame &later) const;
    static PauliFrame replay(std::vector<size_t> widths, const std::vector<FrameRecord> &log);

    /// One line per record: station, wire, syndrome, outcomes, update.
    std::string trace() const;

   private:
    std::vector<PauliString> wires_;
    std::vector<FrameRecord> log_;
};

/// Applies wire `wire` of the frame to qubits offset.. of the state.
void frame_apply(const PauliFrame &frame, size_t wire, StabilizerState &state, size_t offset);
/// Outcome bit (0 for +1) of a final measurement of `basis` on qubit `qubit`
/// of the wire, read as if the frame had been applied before measuring.
int frame_reinterpret(const PauliFrame &frame, size_t wire, size_t qubit, Pauli1 basis, int bit);

struct ChainConfig {
    size_t segments = 1;
    /// Encoded chain: noise on every transmitted qubit per segment.
    PauliChannel channel;
    /// Repeater: elementary pairs are E(q^2)|phi+> unless
    /// elementary_fidelity is set.
    double channel_q = 1;
    std::optional<double> elementary_fidelity;
    /// Resource and Bell-measurement noise at every station.
    NoiseModel station;

    std::string code = "ring5";
    size_t code_size = 3;
    /// Apply corrections physically at every station instead of once at
    /// the end.
    bool correct_every_station = false;

    /// Purification rounds per nesting level; with target_fidelity set, the
    /// rounds are repeated until that fidelity is reached (at most
    /// max_rounds).
    size_t rounds = 1;
    std::optional<double> target_fidelity;
    size_t max_rounds = 40;
    bool merged_stations = true;
    RecurrenceVariant variant = RecurrenceVariant::DEJMPS;

    void validate() const;
    /// log2(segments); throws unless segments is a power of two.
    size_t nesting_levels() const;
};

struct ChainResult {
    ProtocolStats stats;
    /// Encoded chain, per station (the decoder is the last one).
    std::vector<uint64_t> nonzero_syndromes;
    std::vector<uint64_t> uncorrectable;
    /// Repeater: fidelity after purification and rounds used, per level.
    std::vector<double> level_fidelity;
    std::vector<size_t> level_rounds;
    std::optional<size_t> failed_level;
    double pairs_per_output = 0;
    double resources_per_output = 0;
    size_t station_resource_size = 0;
};

/// One encoded transmission. The input is the last qubit of `host`; the
/// delivered state keeps the other host qubits first and the output last.
struct EncodedRun {
    StabilizerState delivered;
    PauliFrame frame;  // wire 0: block, wire 1: output
    std::vector<uint64_t> syndromes;
    std::vector<bool> correctable;
};

EncodedRun encoded_trajectory(const QecKit &kit, const ChainConfig &cfg, const StabilizerState &host, Rng &rng);

/// Monte Carlo over `samples` trajectories; good when the delivered state
/// equals the host.
ChainResult encoded_chain(const ChainConfig &cfg, const StabilizerState &host, uint64_t samples, uint64_t seed,
                          uint64_t first_trajectory = 0);

struct EncodedAnalytic {
    double per_step = 1;   // logical depolarizing parameter of one step
    double encoded = 1;    // after all segments
    double unencoded = 1;  // the same effective noise without a code
};

/// Every segment acts as E(p^2 q) on each block qubit (p after folding the
/// measurement noise, q the channel), followed by perfect correction.
EncodedAnalytic encoded_chain_analytic(const CodeSpec &code, const NoiseModel &noise, size_t segments);

// Label populations for repeater and threshold studies: i.i.d. pairs held
// as Bell indices, resampled with replacement to a fixed size.

struct LabelPopulation {
    std::vector<uint8_t> labels;
    double fidelity() const;
    double sigma() const;
};

LabelPopulation make_population(const BellDiagonalState &s, size_t size, Rng &rng);
/// E(p) on both ends of every pair.
void population_noise(LabelPopulation &pop, double p, Rng &rng);
/// E(p) on one end of every pair.
void population_noise_end(LabelPopulation &pop, double p, Rng &rng);
/// One recurrence round on random pairs; returns the success fraction.
/// The survivors are resampled back to the original size.
double population_purify(LabelPopulation &pop, RecurrenceVariant v, Rng &rng);
/// Swaps random pairs of pairs and resamples.
void population_connect(LabelPopulation &pop, Rng &rng);

/// Nested repeater on label populations (samples = population size).
/// Levels 0 .. log2(segments): input noise E(p q^2) on both ends, then
/// purification, then (except on the last level) connection at the
/// stations. Only the outer ends of the two connected pairs leave a
/// resource, so each pair takes E(p) on one end; separate swap resources add
/// E(p^2 q^2) on the inner end. The delivered pair takes E(p) on both ends.
ChainResult repeater_chain(const ChainConfig &cfg, uint64_t samples, uint64_t seed);
/// The same schedule on Bell-diagonal states.
ChainResult repeater_chain_analytic(const ChainConfig &cfg);

}  // namespace mbqc

#endif
