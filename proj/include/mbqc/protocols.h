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

#ifndef MBQC_PROTOCOLS_H
#define MBQC_PROTOCOLS_H

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mbqc/bell_diagonal.h"
#include "mbqc/dense.h"
#include "mbqc/noise.h"
#include "mbqc/resources.h"
#include "mbqc/rng.h"
#include "mbqc/tableau.h"

namespace mbqc {

struct Interval {
    double lo = 0;
    double hi = 1;
};

/// Wilson score interval; z = 1.96 gives 95%.
Interval wilson_interval(uint64_t hits, uint64_t trials, double z = 1.96);

/// Counts from a batch of trajectories. Merging adds counts, so the result
/// does not depend on how the trajectories were split.
struct ProtocolStats {
    uint64_t samples = 0;  // attempts
    uint64_t kept = 0;     // attempts that were not discarded
    uint64_t good = 0;     // kept attempts with the ideal output
    double consumed = 0;   // input pairs used
    double produced = 0;   // output pairs delivered
    uint64_t seed = 0;

    double fidelity() const { return kept ? double(good) / double(kept) : 0.0; }
    Interval fidelity_interval(double z = 1.96) const { return wilson_interval(good, kept, z); }
    /// Binomial standard error of fidelity().
    double fidelity_sigma() const;
    double p_success() const { return samples ? double(kept) / double(samples) : 0.0; }
    Interval success_interval(double z = 1.96) const { return wilson_interval(kept, samples, z); }
    double yield() const { return consumed > 0 ? produced / consumed : 0.0; }

    void merge(const ProtocolStats &other);
};

/// Pair held as a Bell index (see BellDiagonalState).
int sample_bell_index(const BellDiagonalState &s, Rng &rng);
/// (I (x) sigma_index)|phi+> on two qubits (A = 0, B = 1).
StabilizerState bell_pair_state(int index);
/// Bell index of qubits (a, b); throws std::domain_error when they are not
/// in a Bell state.
int bell_index_of(const StabilizerState &s, size_t a, size_t b);

// Recurrence purification.

/// Output Bell index of one round for input indices (i, j), -1 on discard.
using LabelTable = std::array<std::array<int, 4>, 4>;
const LabelTable &recurrence_label_table(RecurrenceVariant v);

enum class RecurrenceMode { Stepwise, Merged };
/// Stabilizer: noisy resource states teleported trajectory by trajectory.
/// Labels: the same protocol on Bell indices with the frozen round table and
/// the resource noise moved onto the pairs.
enum class Engine { Stabilizer, Labels };

RecurrenceMode parse_mode(const std::string &name);
Engine parse_engine(const std::string &name);

struct RecurrenceOptions {
    size_t rounds = 1;
    RecurrenceMode mode = RecurrenceMode::Merged;
    RecurrenceVariant variant = RecurrenceVariant::DEJMPS;
    Engine engine = Engine::Labels;
    uint64_t samples = 1000;
    uint64_t seed = 1;
    /// Trajectories first_trajectory .. first_trajectory + samples - 1 are
    /// simulated with streams seed_derive(seed, family, index).
    uint64_t first_trajectory = 0;
    uint32_t family = 1;
};

/// Runs the protocol on copies of `input`. Merged mode uses one resource of
/// size 2^m + 1 per party and keeps only on simultaneous success; stepwise
/// mode chains 3-qubit rounds, retrying each sub-round until it succeeds,
/// and one sample is one attempt of the last round.
ProtocolStats purify_recurrence(const BellDiagonalState &input, const NoiseModel &noise,
                                const RecurrenceOptions &options);

/// Bell-diagonal prediction for the merged protocol with the noise moved
/// onto the pairs: E(p q^2) on both ends of every input pair, E(p) on both
/// output ends.
RecurrenceResult merged_recurrence_analytic(const BellDiagonalState &input, size_t rounds, const NoiseModel &noise,
                                            RecurrenceVariant variant);

// Hashing.

struct HashingEnsemble {
    size_t pairs = 16;
    BellDiagonalState pair;
};

/// Random parity checks. Check c picks a target pair and, for every other
/// remaining pair, one of the bit combinations {none, x, z, x^z}; the local
/// rotation of each chosen pair is applied before the bilateral CNOTs.
struct HashingCheck {
    size_t target = 0;
    /// 0 (not involved), 1 (x), 2 (z), 3 (x^z) for every pair.
    std::vector<uint8_t> select;
};

std::vector<HashingCheck> random_hashing_checks(size_t pairs, size_t checks, Rng &rng);

/// Linear error-string bookkeeping. Pair labels are bit vectors over the
/// 2N original label bits (bit 2i is x of pair i, bit 2i+1 is z).
class HashingCircuit {
   public:
    HashingCircuit(size_t pairs, const std::vector<HashingCheck> &checks);

    size_t pairs() const { return pairs_; }
    size_t num_checks() const { return syndrome_.size(); }
    const std::vector<size_t> &remaining() const { return remaining_; }
    const std::vector<size_t> &targets() const { return targets_; }
    /// Parity form of check c.
    uint64_t syndrome_form(size_t c) const { return syndrome_[c]; }
    /// Current (x, z) forms of a remaining pair.
    uint64_t x_form(size_t pair) const { return x_[pair]; }
    uint64_t z_form(size_t pair) const { return z_[pair]; }

    /// Original labels -> syndrome bits.
    uint64_t syndrome(const std::vector<int> &labels) const;
    /// Original labels -> final labels of the remaining pairs.
    std::vector<int> residual(const std::vector<int> &labels) const;

    /// Most likely original label string for a syndrome under i.i.d. pair
    /// probabilities; ties go to lower weight, then the lexicographically
    /// smaller string (I < Z < X < Y per pair). Empty when the syndrome is
    /// impossible.
    std::optional<std::vector<int>> decode(uint64_t syndrome, const BellDiagonalState &pair) const;

   private:
    size_t pairs_;
    std::vector<uint64_t> x_, z_;
    std::vector<uint64_t> syndrome_;
    std::vector<size_t> remaining_, targets_;
};

struct HashingOptions {
    size_t checks = 0;
    uint64_t samples = 1000;
    uint64_t seed = 1;
    uint64_t first_trajectory = 0;
    uint32_t family = 2;
};

/// Per-pair input after moving the resource and measurement noise: E(p q^2)
/// on both ends.
BellDiagonalState hashing_pair(const HashingEnsemble &ensemble, const NoiseModel &noise);

/// Monte Carlo: every sample draws a check set and an error string, decodes
/// the syndrome and counts the block as good when every remaining pair is
/// restored. Yield is (N - checks) / N.
ProtocolStats purify_hashing(const HashingEnsemble &ensemble, const NoiseModel &noise, const HashingOptions &options);

/// Exact block error for one check set, summed over every error string.
/// Limited to 8 checks.
double hashing_block_error(const HashingEnsemble &ensemble, const NoiseModel &noise, const HashingCircuit &circuit);

/// True when hashing of the noise-moved pairs has positive yield and the
/// output noise leaves a perfect pair at least as good as the channel pair.
bool hashing_regime_nonempty(double p, double q);

// Error correction.

/// Resources of one code, built once.
struct QecKit {
    CodeSpec code;
    ResourceSpec encode, correct, decode;

    explicit QecKit(CodeSpec c);
};

/// Logical block: qubits offset .. offset + n - 1 of `state`, with the Pauli
/// `frame` still to be applied to them.
struct CodeBlock {
    StabilizerState state;
    size_t offset = 0;
    PauliString frame;
};

struct QecStep {
    CodeBlock block;
    uint64_t syndrome = 0;
    bool correctable = true;
};

struct DecodedQubit {
    StabilizerState state;
    size_t qubit = 0;
    Pauli1 frame = Pauli1::I;
    uint64_t syndrome = 0;
    bool correctable = true;
};

/// Bell-measures host qubit `qubit` with input A of the encoding resource.
/// The block is appended after the remaining host qubits.
CodeBlock qec_encode(const QecKit &kit, const StabilizerState &host, size_t qubit, const NoiseModel &noise, Rng &rng);
/// Teleports the block through the correction resource. The pending frame is
/// folded into the outcomes; the syndrome correction joins the new frame.
QecStep qec_correct(const QecKit &kit, const CodeBlock &block, const NoiseModel &noise, Rng &rng);
DecodedQubit qec_decode(const QecKit &kit, const CodeBlock &block, const NoiseModel &noise, Rng &rng);
/// Applies and clears the pending frame.
void apply_frame(CodeBlock &block);

/// Ring code: p_no^5 + 5 p_no^4 p_yes with p_no = (3p+1)/4, returned as the
/// depolarizing parameter of the logical channel.
double ring5_logical_parameter(double p_tilde);
/// Majority vote over m qubits with independent flip probability e.
double repetition_logical_error(size_t m, double e);
/// Logical parameter for any code in the catalog under i.i.d. E(p_tilde):
/// the ring formula for ring5 and the full table enumeration otherwise.
double logical_error_rate(const CodeSpec &code, double p_tilde);
/// Exact logical Pauli channel (I, X, Y, Z) of table decoding under i.i.d.
/// single-qubit Pauli noise, by enumeration of all 4^n errors (n <= 10).
PauliChannel logical_channel(const CodeSpec &code, const PauliChannel &error);

/// Exact one-qubit output of a ring5 (or any code with n + 1 <= 11 qubits)
/// decoding step for the encoded state of `logical`. Physical mode: every
/// block qubit has waited under E(p q_channel) (the previous output noise and
/// storage), the decoding resource carries E(p) and both Bell particles see
/// E(q_meas). Moved mode: E(p^2 q q_meas^2) on the block, perfect decoding,
/// then E(p) on the output.
dense::DensityMatrix dense_decode_output(const QecKit &kit, const dense::Ket &logical, const NoiseModel &noise,
                                         bool moved);

// Swapping.

struct SwapResult {
    StabilizerState pair;  // A of the first pair, B of the second
    BellOutcome outcome;
    Pauli1 frame = Pauli1::I;
};

/// Bell measurement on B1, A2 with measurement noise q_meas; the frame
/// sigma_i belongs on the surviving B end.
SwapResult swap(const StabilizerState &pair1, const StabilizerState &pair2, const NoiseModel &noise, Rng &rng);

}  // namespace mbqc

#endif
