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

#ifndef MBQC_RESOURCES_H
#define MBQC_RESOURCES_H

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mbqc/bell_diagonal.h"
#include "mbqc/noise.h"
#include "mbqc/pauli.h"
#include "mbqc/rng.h"
#include "mbqc/tableau.h"

namespace mbqc {

/// Frame and classical bits implied by a tuple of in-coupling Bell outcomes.
struct Byproduct {
    /// Pauli to be applied to the outputs (letters only).
    PauliString frame;
    /// Reconstructed outcomes of the virtual measurements, true for -1.
    std::vector<bool> bits;
    /// False when a post-selection parity check failed.
    bool keep = true;
};

/// A measurement whose outcome is recorded as a classical bit rather than
/// read out: either an output measured in advance or one half of an
/// internal Bell connection.
struct VirtualMeasurement {
    PauliString op;  // on the parent qubits
    std::string name;
};

/// Minimal measurement-based resource: a stabilizer state made of input
/// and output particles only, with the linear map from Bell outcomes on the
/// inputs to the output frame and the virtual measurement bits.
///
/// Internally the resource remembers its unprojected parent state (every
/// particle it was built from). The physical state is the parent projected
/// onto the +1 eigenspace of every virtual measurement and onto |phi+> on
/// every absorbed connection, with those particles removed.
class ResourceSpec {
   public:
    ResourceSpec() = default;

    /// Throws std::invalid_argument on bad indices or duplicate labels and
    /// std::domain_error when a projection is impossible or a virtual bit is
    /// not fixed by the Bell outcomes.
    static ResourceSpec from_parent(StabilizerState parent, std::vector<std::string> labels,
                                    std::vector<size_t> inputs, std::vector<size_t> outputs,
                                    std::vector<VirtualMeasurement> virtuals = {},
                                    std::vector<std::pair<size_t, size_t>> absorbed = {},
                                    std::vector<std::vector<size_t>> parity_checks = {});

    /// Physical state: inputs first, then outputs.
    const StabilizerState &state() const { return state_; }
    size_t num_inputs() const { return inputs_.size(); }
    size_t num_outputs() const { return outputs_.size(); }
    size_t num_qubits() const { return inputs_.size() + outputs_.size(); }
    size_t num_bits() const { return virtuals_.size(); }

    std::vector<std::string> input_labels() const;
    std::vector<std::string> output_labels() const;
    std::vector<std::string> bit_names() const;
    std::optional<size_t> input_index(const std::string &label) const;
    std::optional<size_t> output_index(const std::string &label) const;

    /// Each parity check is a list of bit indices whose XOR must vanish for
    /// the result to be kept.
    const std::vector<std::vector<size_t>> &parity_checks() const { return parity_checks_; }

    /// Byproduct for one outcome per input (in input order).
    Byproduct byproduct(std::span<const BellOutcome> outcomes) const;
    /// Contribution of the Pauli p sitting on input k.
    Byproduct input_contribution(size_t input, Pauli1 p) const;

    /// Graph form of the physical state with local Clifford tags.
    GraphSpec graph_form() const { return to_graph_form(state_); }

    ResourceSpec with_prefix(const std::string &prefix) const;
    /// Renames inputs and outputs (sizes must match).
    ResourceSpec relabeled(std::vector<std::string> inputs, std::vector<std::string> outputs) const;
    ResourceSpec with_parity_checks(std::vector<std::vector<size_t>> checks) const;

    // Parent view, used by the builders.
    const StabilizerState &parent() const { return parent_; }
    const std::vector<std::string> &parent_labels() const { return labels_; }
    const std::vector<size_t> &parent_inputs() const { return inputs_; }
    const std::vector<size_t> &parent_outputs() const { return outputs_; }
    const std::vector<VirtualMeasurement> &virtuals() const { return virtuals_; }
    const std::vector<std::pair<size_t, size_t>> &absorbed() const { return absorbed_; }

   private:
    StabilizerState parent_;
    std::vector<std::string> labels_;
    std::vector<size_t> inputs_;
    std::vector<size_t> outputs_;
    std::vector<VirtualMeasurement> virtuals_;
    std::vector<std::pair<size_t, size_t>> absorbed_;
    std::vector<std::vector<size_t>> parity_checks_;

    StabilizerState state_;
    // Contribution of X and Z on each input.
    std::vector<Byproduct> x_part_;
    std::vector<Byproduct> z_part_;
};

/// (I (x) C) applied to N copies of |phi+>; inputs "in0".., outputs "out0"...
ResourceSpec cj_state(const CliffordMap &c);

/// Measures the listed outputs in advance (projecting on +1) and records the
/// outcome as a virtual bit named after the output.
ResourceSpec premeasure_outputs(const ResourceSpec &r, const std::vector<std::pair<std::string, Pauli1>> &measurements);

/// Joins r1 outputs to r2 inputs by Bell measurements done in advance.
/// Inputs are r1's then r2's unconnected ones; outputs are r1's unconnected
/// then r2's; bits are r1's then r2's. Unconnected labels must be distinct.
ResourceSpec merge(const ResourceSpec &r1, const ResourceSpec &r2,
                   const std::vector<std::pair<std::string, std::string>> &connections);

/// Replaces two outputs by a recorded Bell measurement on them; adds bits
/// "<name>.x" (X_a X_b) and "<name>.z" (Z_a Z_b).
ResourceSpec bell_connect_outputs(const ResourceSpec &r, const std::string &a, const std::string &b,
                                  const std::string &name);

struct TeleportOptions {
    /// Forced in-coupling outcomes (noise must be ideal when set).
    std::vector<BellOutcome> forced;
    /// Apply the frame physically instead of only recording it.
    bool apply_frame = false;
};

struct TeleportResult {
    /// Host qubits that were not measured (relative order kept), then the
    /// resource outputs.
    StabilizerState state;
    std::vector<BellOutcome> outcomes;
    Byproduct byproduct;
    /// Index of the first output qubit in `state`.
    size_t output_offset = 0;
    /// Chance of the recorded outcomes; set only for ideal measurements.
    std::optional<double> probability;
};

/// Bell-measures host qubit host_qubits[k] with resource input k. The
/// resource is prepared with E(p_resource) on every particle and each
/// measured particle sees E(q_meas) before the measurement.
TeleportResult teleport_in(const ResourceSpec &r, const StabilizerState &host, std::span<const size_t> host_qubits,
                           const NoiseModel &noise, Rng &rng, const TeleportOptions &options = {});

/// Stabilizer code with syndrome lookup.
struct CodeSpec {
    std::string name;
    size_t n = 0;
    std::vector<PauliString> stabilizers;
    PauliString logical_x;
    PauliString logical_z;
    /// Partners d_j: anticommute with stabilizer j only, commute with the
    /// logicals.
    std::vector<PauliString> destabilizers;
    /// Syndrome (bit j for stabilizer j) -> minimal-weight correction.
    std::map<uint64_t, PauliString> corrections;

    static CodeSpec repetition(size_t m, bool phase_flip = false);
    static CodeSpec ring5();

    /// Throws std::invalid_argument when the algebraic invariants fail.
    void validate() const;
    uint64_t syndrome(const PauliString &error) const;
    /// Identity when the syndrome has no table entry.
    PauliString correction(uint64_t syndrome) const;
    /// Effect of a physical Pauli on the logical qubit, modulo stabilizers.
    /// Throws std::invalid_argument for a Pauli that does not commute with
    /// the stabilizers.
    Pauli1 logical_action(const PauliString &p) const;
    /// Logical operator for a single-qubit Pauli.
    PauliString logical(Pauli1 p) const;
    /// E: Z_0 -> Z_L, X_0 -> X_L, Z_j -> g_j, X_j -> d_j.
    CliffordMap encoder() const;

    StabilizerState zero_l() const;
    StabilizerState one_l() const;

    /// Enumerates errors in order of weight (then lexicographically, letters
    /// ordered X, Y, Z) and keeps the first one seen for every syndrome.
    void build_table(const std::vector<Pauli1> &alphabet, size_t max_weight);
};

/// 1 input ("A") and n outputs ("q0"..) holding |0>|0_L> + |1>|1_L>.
ResourceSpec encode_resource(const CodeSpec &code);
/// The ring code encoder built by attaching |+> to every ring particle with
/// controlled-Z gates.
ResourceSpec ring5_encode_by_attachment();
/// n inputs ("q0"..), 1 output ("A"); bits "s0".. are the syndrome.
ResourceSpec decode_syndrome_resource(const CodeSpec &code);
/// Encoding followed directly by syndrome read-out and decoding; 1 input,
/// 1 output, syndrome bits.
ResourceSpec encode_decode_combined(const CodeSpec &code);
/// Decode then re-encode: n inputs, n outputs, syndrome bits.
ResourceSpec correction_resource(const CodeSpec &code);
/// Frame to add to the outputs of correction_resource for a syndrome.
PauliString correction_frame(const CodeSpec &code, uint64_t syndrome);
/// Logical correction on the output of decode_syndrome_resource.
Pauli1 decoded_correction(const CodeSpec &code, uint64_t syndrome);

enum class Party { Alice, Bob };

/// One recurrence round at one site: inputs "in0" (kept) and "in1"
/// (target), output "out", bit "t" (true for -1 of the target Z).
ResourceSpec epp_round(RecurrenceVariant variant, Party party);
/// m merged rounds at one site: 2^m inputs, 1 output, 2^m - 1 bits.
ResourceSpec epp_recurrence(size_t rounds, RecurrenceVariant variant, Party party);
/// Station joining a left link (where it holds the Bob end) and a right
/// link (Alice end): 2 * 2^rounds inputs "L.in*", "R.in*", no outputs. Bits
/// are the left purification bits, the right ones, then "swap.x", "swap.z".
ResourceSpec repeater_station(size_t rounds, RecurrenceVariant variant);

/// Catalog lookup by name: epp_recurrence, repeater_station,
/// repetition_encode, repetition_decode, ring5_encode, ring5_decode,
/// code_encode, code_decode_syndrome, code_encode_decode_combined,
/// code_correction. Parameters: rounds, variant, party, code, size. Throws std::invalid_argument for an
/// unknown name or bad parameter.
ResourceSpec catalog_resource(const std::string &name, const std::map<std::string, std::string> &params = {});
/// repetition, phase_repetition or ring5.
CodeSpec catalog_code(const std::string &name, size_t size = 3);

}  // namespace mbqc

#endif
