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

#include "mbqc/resources.h"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>

namespace mbqc {

namespace {

using Bits = std::vector<uint8_t>;

bool is_zero(const Bits &b) {
    return std::all_of(b.begin(), b.end(), [](uint8_t v) { return v == 0; });
}

void xor_into(Bits &a, const Bits &b) {
    for (size_t k = 0; k < a.size(); ++k) a[k] ^= b[k];
}

// Incremental GF(2) elimination over stabilizer generators. Each row keeps
// its constraint bits and the Pauli product that produced them.
struct Eliminator {
    struct Row {
        Bits bits;
        PauliString product;
        size_t pivot;
    };
    std::vector<Row> rows;
    std::vector<PauliString> null_products;

    void reduce(Bits &bits, PauliString &product) const {
        for (const Row &r : rows) {
            if (bits[r.pivot]) {
                xor_into(bits, r.bits);
                product *= r.product;
            }
        }
    }

    void insert(Bits bits, PauliString product) {
        reduce(bits, product);
        auto it = std::find(bits.begin(), bits.end(), 1);
        if (it == bits.end()) {
            null_products.push_back(std::move(product));
            return;
        }
        size_t pivot = static_cast<size_t>(it - bits.begin());
        rows.push_back({std::move(bits), std::move(product), pivot});
    }
};

StabilizerState reorder(const StabilizerState &s, const std::vector<size_t> &order) {
    std::vector<PauliString> gens;
    for (const PauliString &g : s.stabilizers()) gens.push_back(g.restricted(order));
    return StabilizerState::from_generators(std::move(gens));
}

PauliString letters(PauliString p) {
    p.set_phase(0);
    return p;
}

size_t find_label(const std::vector<std::string> &labels, const std::vector<size_t> &set, const std::string &label,
                  const char *what) {
    for (size_t k = 0; k < set.size(); ++k) {
        if (labels[set[k]] == label) return k;
    }
    throw std::invalid_argument(std::string("no ") + what + " labeled '" + label + "'");
}

}  // namespace

ResourceSpec ResourceSpec::from_parent(StabilizerState parent, std::vector<std::string> labels,
                                       std::vector<size_t> inputs, std::vector<size_t> outputs,
                                       std::vector<VirtualMeasurement> virtuals,
                                       std::vector<std::pair<size_t, size_t>> absorbed,
                                       std::vector<std::vector<size_t>> parity_checks) {
    size_t n = parent.num_qubits();
    if (labels.size() != n) throw std::invalid_argument("one label per parent qubit required");
    std::vector<int> role(n, 0);
    auto claim = [&](size_t q) {
        if (q >= n) throw std::invalid_argument("resource qubit index out of range");
        if (role[q]++) throw std::invalid_argument("resource qubit used twice");
    };
    for (size_t q : inputs) claim(q);
    for (size_t q : outputs) claim(q);
    for (auto [a, b] : absorbed) {
        claim(a);
        claim(b);
    }
    std::set<std::string> seen;
    for (size_t q : inputs) {
        if (!seen.insert(labels[q]).second) throw std::invalid_argument("duplicate resource label '" + labels[q] + "'");
    }
    for (size_t q : outputs) {
        if (!seen.insert(labels[q]).second) throw std::invalid_argument("duplicate resource label '" + labels[q] + "'");
    }
    for (const VirtualMeasurement &v : virtuals) {
        if (v.op.num_qubits() != n || !v.op.is_hermitian()) throw std::invalid_argument("bad virtual measurement");
        for (size_t q : inputs) {
            if (v.op.get(q) != Pauli1::I) throw std::invalid_argument("virtual measurement touches an input");
        }
        for (size_t q : outputs) {
            if (v.op.get(q) != Pauli1::I) throw std::invalid_argument("virtual measurement touches an output");
        }
    }
    for (const auto &check : parity_checks) {
        for (size_t b : check) {
            if (b >= virtuals.size()) throw std::invalid_argument("parity check refers to a missing bit");
        }
    }

    ResourceSpec r;
    r.parent_ = std::move(parent);
    r.labels_ = std::move(labels);
    r.inputs_ = std::move(inputs);
    r.outputs_ = std::move(outputs);
    r.virtuals_ = std::move(virtuals);
    r.absorbed_ = std::move(absorbed);
    r.parity_checks_ = std::move(parity_checks);

    // Physical state.
    StabilizerState s = r.parent_;
    Rng unused(0);
    for (auto [a, b] : r.absorbed_) {
        PauliString xx(n), zz(n);
        xx.set(a, Pauli1::X);
        xx.set(b, Pauli1::X);
        zz.set(a, Pauli1::Z);
        zz.set(b, Pauli1::Z);
        s.measure(xx, unused, 1);
        s.measure(zz, unused, 1);
    }
    for (const VirtualMeasurement &v : r.virtuals_) s.measure(v.op, unused, 1);
    std::vector<size_t> internal;
    for (size_t q = 0; q < n; ++q) {
        if (role[q] == 0 || std::any_of(r.absorbed_.begin(), r.absorbed_.end(),
                                        [q](auto ab) { return ab.first == q || ab.second == q; })) {
            internal.push_back(q);
        }
    }
    std::vector<size_t> order = r.inputs_;
    order.insert(order.end(), r.outputs_.begin(), r.outputs_.end());
    if (internal.empty()) {
        r.state_ = reorder(s, order);
    } else {
        s.remove_qubits(internal);
        std::vector<size_t> rank(n, 0);
        size_t next = 0;
        for (size_t q = 0; q < n; ++q) {
            if (!std::binary_search(internal.begin(), internal.end(), q)) rank[q] = next++;
        }
        std::vector<size_t> local;
        for (size_t q : order) local.push_back(rank[q]);
        r.state_ = reorder(s, local);
    }

    // Byproduct map. Constraint bits: the letters on the inputs, then the
    // letter difference across each absorbed pair.
    size_t ni = r.inputs_.size();
    size_t width = 2 * (ni + r.absorbed_.size());
    auto constraint = [&](const PauliString &g) {
        Bits bits(width, 0);
        for (size_t k = 0; k < ni; ++k) {
            bits[2 * k] = g.x(r.inputs_[k]);
            bits[2 * k + 1] = g.z(r.inputs_[k]);
        }
        for (size_t j = 0; j < r.absorbed_.size(); ++j) {
            auto [a, b] = r.absorbed_[j];
            bits[2 * (ni + j)] = g.x(a) ^ g.x(b);
            bits[2 * (ni + j) + 1] = g.z(a) ^ g.z(b);
        }
        return bits;
    };
    Eliminator elim;
    for (const PauliString &g : r.parent_.stabilizers()) elim.insert(constraint(g), g);
    for (const PauliString &t : elim.null_products) {
        for (const VirtualMeasurement &v : r.virtuals_) {
            if (!commutes(t, v.op)) {
                throw std::domain_error("virtual outcome '" + v.name + "' is not fixed by the in-coupling outcomes");
            }
        }
    }
    auto solve = [&](size_t k, bool z) {
        Bits target(width, 0);
        target[2 * k + (z ? 1 : 0)] = 1;
        PauliString product(n);
        elim.reduce(target, product);
        if (!is_zero(target)) throw std::domain_error("resource input is not maximally entangled");
        Byproduct b;
        b.frame = letters(product.restricted(r.outputs_));
        for (const VirtualMeasurement &v : r.virtuals_) b.bits.push_back(!commutes(product, v.op));
        return b;
    };
    for (size_t k = 0; k < ni; ++k) {
        r.x_part_.push_back(solve(k, false));
        r.z_part_.push_back(solve(k, true));
    }
    return r;
}

std::vector<std::string> ResourceSpec::input_labels() const {
    std::vector<std::string> out;
    for (size_t q : inputs_) out.push_back(labels_[q]);
    return out;
}

std::vector<std::string> ResourceSpec::output_labels() const {
    std::vector<std::string> out;
    for (size_t q : outputs_) out.push_back(labels_[q]);
    return out;
}

std::vector<std::string> ResourceSpec::bit_names() const {
    std::vector<std::string> out;
    for (const VirtualMeasurement &v : virtuals_) out.push_back(v.name);
    return out;
}

std::optional<size_t> ResourceSpec::input_index(const std::string &label) const {
    for (size_t k = 0; k < inputs_.size(); ++k) {
        if (labels_[inputs_[k]] == label) return k;
    }
    return std::nullopt;
}

std::optional<size_t> ResourceSpec::output_index(const std::string &label) const {
    for (size_t k = 0; k < outputs_.size(); ++k) {
        if (labels_[outputs_[k]] == label) return k;
    }
    return std::nullopt;
}

Byproduct ResourceSpec::input_contribution(size_t input, Pauli1 p) const {
    if (input >= inputs_.size()) throw std::invalid_argument("input index out of range");
    Byproduct b;
    b.frame = PauliString(outputs_.size());
    b.bits.assign(virtuals_.size(), false);
    if (pauli_x(p)) {
        b.frame *= x_part_[input].frame;
        for (size_t j = 0; j < b.bits.size(); ++j) b.bits[j] = b.bits[j] != x_part_[input].bits[j];
    }
    if (pauli_z(p)) {
        b.frame *= z_part_[input].frame;
        for (size_t j = 0; j < b.bits.size(); ++j) b.bits[j] = b.bits[j] != z_part_[input].bits[j];
    }
    b.frame.set_phase(0);
    return b;
}

Byproduct ResourceSpec::byproduct(std::span<const BellOutcome> outcomes) const {
    if (outcomes.size() != inputs_.size()) throw std::invalid_argument("one Bell outcome per input required");
    Byproduct total;
    total.frame = PauliString(outputs_.size());
    total.bits.assign(virtuals_.size(), false);
    for (size_t k = 0; k < outcomes.size(); ++k) {
        Byproduct part = input_contribution(k, outcomes[k].pauli());
        total.frame *= part.frame;
        for (size_t j = 0; j < total.bits.size(); ++j) total.bits[j] = total.bits[j] != part.bits[j];
    }
    total.frame.set_phase(0);
    for (const auto &check : parity_checks_) {
        bool parity = false;
        for (size_t b : check) parity ^= total.bits[b];
        if (parity) total.keep = false;
    }
    return total;
}

ResourceSpec ResourceSpec::with_prefix(const std::string &prefix) const {
    std::vector<std::string> labels = labels_;
    for (std::string &l : labels) l = prefix + l;
    std::vector<VirtualMeasurement> virtuals = virtuals_;
    for (VirtualMeasurement &v : virtuals) v.name = prefix + v.name;
    return from_parent(parent_, std::move(labels), inputs_, outputs_, std::move(virtuals), absorbed_, parity_checks_);
}

ResourceSpec ResourceSpec::relabeled(std::vector<std::string> inputs, std::vector<std::string> outputs) const {
    if (inputs.size() != inputs_.size() || outputs.size() != outputs_.size()) {
        throw std::invalid_argument("relabel size mismatch");
    }
    std::vector<std::string> labels = labels_;
    for (size_t k = 0; k < inputs.size(); ++k) labels[inputs_[k]] = inputs[k];
    for (size_t k = 0; k < outputs.size(); ++k) labels[outputs_[k]] = outputs[k];
    return from_parent(parent_, std::move(labels), inputs_, outputs_, virtuals_, absorbed_, parity_checks_);
}

ResourceSpec ResourceSpec::with_parity_checks(std::vector<std::vector<size_t>> checks) const {
    return from_parent(parent_, labels_, inputs_, outputs_, virtuals_, absorbed_, std::move(checks));
}

ResourceSpec cj_state(const CliffordMap &c) {
    size_t n = c.num_qubits();
    if (n == 0) throw std::invalid_argument("empty Clifford");
    std::vector<PauliString> gens;
    for (size_t k = 0; k < n; ++k) {
        gens.push_back(PauliString::single(n, k, Pauli1::X).tensor(c.x_image(k)));
        gens.push_back(PauliString::single(n, k, Pauli1::Z).tensor(c.z_image(k)));
    }
    std::vector<std::string> labels;
    std::vector<size_t> inputs, outputs;
    for (size_t k = 0; k < n; ++k) {
        labels.push_back("in" + std::to_string(k));
        inputs.push_back(k);
    }
    for (size_t k = 0; k < n; ++k) {
        labels.push_back("out" + std::to_string(k));
        outputs.push_back(n + k);
    }
    return ResourceSpec::from_parent(StabilizerState::from_generators(std::move(gens)), std::move(labels),
                                     std::move(inputs), std::move(outputs));
}

ResourceSpec premeasure_outputs(const ResourceSpec &r, const std::vector<std::pair<std::string, Pauli1>> &measurements) {
    size_t n = r.parent().num_qubits();
    std::vector<size_t> outputs = r.parent_outputs();
    std::vector<VirtualMeasurement> virtuals = r.virtuals();
    for (const auto &[label, p] : measurements) {
        if (p == Pauli1::I) throw std::invalid_argument("premeasurement must be a non-identity Pauli");
        size_t k = find_label(r.parent_labels(), outputs, label, "output");
        virtuals.push_back({PauliString::single(n, outputs[k], p), label});
        outputs.erase(outputs.begin() + static_cast<std::ptrdiff_t>(k));
    }
    return ResourceSpec::from_parent(r.parent(), r.parent_labels(), r.parent_inputs(), std::move(outputs),
                                     std::move(virtuals), r.absorbed(), r.parity_checks());
}

ResourceSpec merge(const ResourceSpec &r1, const ResourceSpec &r2,
                   const std::vector<std::pair<std::string, std::string>> &connections) {
    size_t n1 = r1.parent().num_qubits(), n2 = r2.parent().num_qubits();
    StabilizerState parent = r1.parent().tensor(r2.parent());
    std::vector<std::string> labels = r1.parent_labels();
    labels.insert(labels.end(), r2.parent_labels().begin(), r2.parent_labels().end());

    std::vector<bool> used_out(r1.num_outputs(), false), used_in(r2.num_inputs(), false);
    std::vector<std::pair<size_t, size_t>> absorbed = r1.absorbed();
    for (auto [a, b] : r2.absorbed()) absorbed.emplace_back(a + n1, b + n1);
    for (const auto &[out, in] : connections) {
        size_t a = find_label(r1.parent_labels(), r1.parent_outputs(), out, "output");
        size_t b = find_label(r2.parent_labels(), r2.parent_inputs(), in, "input");
        if (used_out[a] || used_in[b]) throw std::invalid_argument("connection endpoint used twice");
        used_out[a] = used_in[b] = true;
        absorbed.emplace_back(r1.parent_outputs()[a], r2.parent_inputs()[b] + n1);
    }

    std::vector<size_t> inputs = r1.parent_inputs(), outputs;
    for (size_t k = 0; k < r2.num_inputs(); ++k) {
        if (!used_in[k]) inputs.push_back(r2.parent_inputs()[k] + n1);
    }
    for (size_t k = 0; k < r1.num_outputs(); ++k) {
        if (!used_out[k]) outputs.push_back(r1.parent_outputs()[k]);
    }
    for (size_t q : r2.parent_outputs()) outputs.push_back(q + n1);

    std::vector<VirtualMeasurement> virtuals;
    for (const VirtualMeasurement &v : r1.virtuals()) virtuals.push_back({v.op.tensor(PauliString(n2)), v.name});
    for (const VirtualMeasurement &v : r2.virtuals()) virtuals.push_back({PauliString(n1).tensor(v.op), v.name});
    std::vector<std::vector<size_t>> checks = r1.parity_checks();
    for (auto check : r2.parity_checks()) {
        for (size_t &b : check) b += r1.num_bits();
        checks.push_back(check);
    }
    return ResourceSpec::from_parent(std::move(parent), std::move(labels), std::move(inputs), std::move(outputs),
                                     std::move(virtuals), std::move(absorbed), std::move(checks));
}

ResourceSpec bell_connect_outputs(const ResourceSpec &r, const std::string &a, const std::string &b,
                                  const std::string &name) {
    size_t n = r.parent().num_qubits();
    std::vector<size_t> outputs = r.parent_outputs();
    size_t ka = find_label(r.parent_labels(), outputs, a, "output");
    size_t kb = find_label(r.parent_labels(), outputs, b, "output");
    if (ka == kb) throw std::invalid_argument("cannot connect an output to itself");
    size_t qa = outputs[ka], qb = outputs[kb];
    PauliString xx(n), zz(n);
    xx.set(qa, Pauli1::X);
    xx.set(qb, Pauli1::X);
    zz.set(qa, Pauli1::Z);
    zz.set(qb, Pauli1::Z);
    std::vector<VirtualMeasurement> virtuals = r.virtuals();
    virtuals.push_back({xx, name + ".x"});
    virtuals.push_back({zz, name + ".z"});
    std::erase_if(outputs, [&](size_t q) { return q == qa || q == qb; });
    return ResourceSpec::from_parent(r.parent(), r.parent_labels(), r.parent_inputs(), std::move(outputs),
                                     std::move(virtuals), r.absorbed(), r.parity_checks());
}

TeleportResult teleport_in(const ResourceSpec &r, const StabilizerState &host, std::span<const size_t> host_qubits,
                           const NoiseModel &noise, Rng &rng, const TeleportOptions &options) {
    noise.validate();
    size_t nh = host.num_qubits();
    if (host_qubits.size() != r.num_inputs()) throw std::invalid_argument("wiring does not match the resource inputs");
    std::set<size_t> distinct(host_qubits.begin(), host_qubits.end());
    if (distinct.size() != host_qubits.size() || (!distinct.empty() && *distinct.rbegin() >= nh)) {
        throw std::invalid_argument("bad host wiring");
    }
    if (!options.forced.empty()) {
        if (options.forced.size() != r.num_inputs()) throw std::invalid_argument("one forced outcome per input required");
        if (!noise.is_ideal()) throw std::invalid_argument("forced outcomes need ideal noise");
    }

    StabilizerState resource = noise.p_resource < 1 ? noisy_state(r.state(), noise.p_resource, rng) : r.state();
    StabilizerState joint = host.tensor(resource);
    std::vector<size_t> alive(joint.num_qubits());
    std::iota(alive.begin(), alive.end(), size_t{0});
    auto position = [&](size_t id) {
        return static_cast<size_t>(std::find(alive.begin(), alive.end(), id) - alive.begin());
    };

    TeleportResult result;
    double probability = 1;
    for (size_t k = 0; k < host_qubits.size(); ++k) {
        size_t a = position(host_qubits[k]), b = position(nh + k);
        BellOutcome o;
        double p = 1;
        if (!options.forced.empty()) {
            o = joint.bell_measure(a, b, rng, options.forced[k], &p);
        } else if (noise.q_meas < 1) {
            o = noisy_bell_measure(joint, a, b, noise.q_meas, rng);
        } else {
            o = joint.bell_measure(a, b, rng, std::nullopt, &p);
        }
        probability *= p;
        result.outcomes.push_back(o);
        std::erase_if(alive, [&](size_t id) { return id == host_qubits[k] || id == nh + k; });
    }
    result.byproduct = r.byproduct(result.outcomes);
    if (noise.q_meas == 1) result.probability = probability;
    result.output_offset = nh - r.num_inputs();
    if (options.apply_frame) {
        for (size_t j = 0; j < r.num_outputs(); ++j) {
            Pauli1 p = result.byproduct.frame.get(j);
            if (p != Pauli1::I) joint.apply_pauli(result.output_offset + j, p);
        }
    }
    result.state = std::move(joint);
    return result;
}

// Codes.

void CodeSpec::validate() const {
    auto fail = [&](const std::string &what) { throw std::invalid_argument(name + ": " + what); };
    if (stabilizers.size() + 1 != n || destabilizers.size() != stabilizers.size()) fail("wrong generator count");
    if (logical_x.num_qubits() != n || logical_z.num_qubits() != n) fail("logical size mismatch");
    for (size_t a = 0; a < stabilizers.size(); ++a) {
        const PauliString &g = stabilizers[a];
        if (g.num_qubits() != n || !g.is_hermitian()) fail("bad stabilizer");
        for (size_t b = 0; b < stabilizers.size(); ++b) {
            if (!commutes(g, stabilizers[b])) fail("stabilizers do not commute");
            if (commutes(destabilizers[a], stabilizers[b]) != (a != b)) fail("bad destabilizer");
        }
        if (!commutes(g, logical_x) || !commutes(g, logical_z)) fail("logical does not commute with stabilizers");
        if (!commutes(destabilizers[a], logical_x) || !commutes(destabilizers[a], logical_z)) {
            fail("destabilizer does not commute with logicals");
        }
    }
    if (commutes(logical_x, logical_z)) fail("logicals must anticommute");
    for (const auto &[s, c] : corrections) {
        if (syndrome(c) != s) fail("correction table entry has the wrong syndrome");
    }
    // Independence: the encoder must be a valid Clifford.
    encoder();
}

uint64_t CodeSpec::syndrome(const PauliString &error) const {
    if (error.num_qubits() != n) throw std::invalid_argument("error size mismatch");
    uint64_t s = 0;
    for (size_t j = 0; j < stabilizers.size(); ++j) {
        if (!commutes(error, stabilizers[j])) s |= uint64_t{1} << j;
    }
    return s;
}

PauliString CodeSpec::correction(uint64_t s) const {
    auto it = corrections.find(s);
    return it == corrections.end() ? PauliString(n) : it->second;
}

Pauli1 CodeSpec::logical_action(const PauliString &p) const {
    if (syndrome(p) != 0) throw std::invalid_argument("Pauli does not preserve the code space");
    return make_pauli1(!commutes(p, logical_z), !commutes(p, logical_x));
}

PauliString CodeSpec::logical(Pauli1 p) const {
    PauliString out(n);
    if (pauli_x(p)) out *= logical_x;
    if (pauli_z(p)) out *= logical_z;
    out.set_phase(0);
    return out;
}

CliffordMap CodeSpec::encoder() const {
    std::vector<PauliString> xs{logical_x}, zs{logical_z};
    xs.insert(xs.end(), destabilizers.begin(), destabilizers.end());
    zs.insert(zs.end(), stabilizers.begin(), stabilizers.end());
    return CliffordMap::from_images(std::move(xs), std::move(zs));
}

StabilizerState CodeSpec::zero_l() const {
    std::vector<PauliString> gens{logical_z};
    gens.insert(gens.end(), stabilizers.begin(), stabilizers.end());
    return StabilizerState::from_generators(std::move(gens));
}

StabilizerState CodeSpec::one_l() const {
    StabilizerState s = zero_l();
    s.apply_pauli(logical_x);
    return s;
}

void CodeSpec::build_table(const std::vector<Pauli1> &alphabet, size_t max_weight) {
    corrections.clear();
    corrections[0] = PauliString(n);
    size_t want = size_t{1} << stabilizers.size();
    for (size_t w = 1; w <= max_weight && w <= n && corrections.size() < want; ++w) {
        std::vector<size_t> pos(w);
        std::iota(pos.begin(), pos.end(), size_t{0});
        while (true) {
            std::vector<size_t> letter(w, 0);
            while (true) {
                PauliString e(n);
                for (size_t k = 0; k < w; ++k) e.set(pos[k], alphabet[letter[k]]);
                corrections.try_emplace(syndrome(e), e);
                size_t k = w;
                while (k > 0 && ++letter[k - 1] == alphabet.size()) letter[--k] = 0;
                if (k == 0) break;
            }
            size_t i = w;
            while (i > 0 && pos[i - 1] == n - w + i - 1) --i;
            if (i == 0) break;
            ++pos[i - 1];
            for (size_t j = i; j < w; ++j) pos[j] = pos[j - 1] + 1;
        }
    }
}

namespace {

// Pauli whose commutation with each constraint is given (true means
// anticommute); the constraints must be independent.
PauliString with_commutation(size_t n, const std::vector<PauliString> &constraints, const std::vector<bool> &anti) {
    size_t m = constraints.size();
    std::vector<Bits> rows(m, Bits(2 * n + 1, 0));
    for (size_t i = 0; i < m; ++i) {
        for (size_t q = 0; q < n; ++q) {
            rows[i][2 * q] = constraints[i].z(q);
            rows[i][2 * q + 1] = constraints[i].x(q);
        }
        rows[i][2 * n] = anti[i];
    }
    std::vector<size_t> pivots;
    size_t r = 0;
    for (size_t col = 0; col < 2 * n && r < m; ++col) {
        size_t p = r;
        while (p < m && !rows[p][col]) ++p;
        if (p == m) continue;
        std::swap(rows[p], rows[r]);
        for (size_t i = 0; i < m; ++i) {
            if (i != r && rows[i][col]) xor_into(rows[i], rows[r]);
        }
        pivots.push_back(col);
        ++r;
    }
    if (r < m) throw std::invalid_argument("dependent commutation constraints");
    PauliString d(n);
    for (size_t i = 0; i < r; ++i) {
        if (!rows[i][2 * n]) continue;
        size_t q = pivots[i] / 2;
        if (pivots[i] % 2 == 0) {
            d.set_x(q, true);
        } else {
            d.set_z(q, true);
        }
    }
    return d;
}

void complete_destabilizers(CodeSpec &code) {
    std::vector<PauliString> constraints{code.logical_x, code.logical_z};
    constraints.insert(constraints.end(), code.stabilizers.begin(), code.stabilizers.end());
    code.destabilizers.clear();
    for (size_t j = 0; j < code.stabilizers.size(); ++j) {
        std::vector<bool> anti(constraints.size(), false);
        anti[2 + j] = true;
        code.destabilizers.push_back(with_commutation(code.n, constraints, anti));
    }
    // Make the partners commute among themselves.
    for (size_t k = 0; k < code.destabilizers.size(); ++k) {
        for (size_t j = 0; j < k; ++j) {
            if (!commutes(code.destabilizers[j], code.destabilizers[k])) code.destabilizers[k] *= code.stabilizers[j];
        }
        code.destabilizers[k].set_phase(0);
    }
}

CodeSpec conjugated(CodeSpec code, const CliffordMap &c, std::string name) {
    code.name = std::move(name);
    for (PauliString &g : code.stabilizers) g = c.conjugate(g);
    for (PauliString &d : code.destabilizers) d = c.conjugate(d);
    code.logical_x = c.conjugate(code.logical_x);
    code.logical_z = c.conjugate(code.logical_z);
    return code;
}

}  // namespace

CodeSpec CodeSpec::repetition(size_t m, bool phase_flip) {
    if (m < 3 || m % 2 == 0) throw std::invalid_argument("repetition code size must be odd and at least 3");
    CodeSpec code;
    code.name = "repetition" + std::to_string(m);
    code.n = m;
    for (size_t j = 0; j + 1 < m; ++j) {
        PauliString g(m);
        g.set(j, Pauli1::Z);
        g.set(j + 1, Pauli1::Z);
        code.stabilizers.push_back(g);
    }
    code.logical_x = PauliString(m);
    for (size_t q = 0; q < m; ++q) code.logical_x.set(q, Pauli1::X);
    code.logical_z = PauliString::single(m, 0, Pauli1::Z);
    complete_destabilizers(code);
    code.build_table({Pauli1::X}, (m - 1) / 2);
    if (phase_flip) {
        CliffordMap h = CliffordMap::identity(m);
        for (size_t q = 0; q < m; ++q) h = CliffordMap::hadamard(m, q).after(h);
        code = conjugated(std::move(code), h, "phase_repetition" + std::to_string(m));
        code.build_table({Pauli1::Z}, (m - 1) / 2);
    }
    code.validate();
    return code;
}

CodeSpec CodeSpec::ring5() {
    CodeSpec code;
    code.name = "ring5";
    code.n = 5;
    auto k = [](size_t a) {
        PauliString p(5);
        p.set(a, Pauli1::X);
        p.set((a + 4) % 5, Pauli1::Z);
        p.set((a + 1) % 5, Pauli1::Z);
        return p;
    };
    for (size_t j = 0; j < 4; ++j) code.stabilizers.push_back(multiply(k(j), k(j + 1)));
    code.logical_x = PauliString(5);
    for (size_t q = 0; q < 5; ++q) code.logical_x.set(q, Pauli1::Z);
    code.logical_z = k(0);
    complete_destabilizers(code);
    code.build_table({Pauli1::X, Pauli1::Y, Pauli1::Z}, 1);
    code.validate();
    return code;
}

ResourceSpec encode_resource(const CodeSpec &code) {
    size_t n = code.n;
    PauliString one_x = PauliString::single(1, 0, Pauli1::X), one_z = PauliString::single(1, 0, Pauli1::Z);
    std::vector<PauliString> gens{one_x.tensor(code.logical_x), one_z.tensor(code.logical_z)};
    for (const PauliString &g : code.stabilizers) gens.push_back(PauliString(1).tensor(g));
    std::vector<std::string> labels{"A"};
    std::vector<size_t> outputs;
    for (size_t q = 0; q < n; ++q) {
        labels.push_back("q" + std::to_string(q));
        outputs.push_back(q + 1);
    }
    return ResourceSpec::from_parent(StabilizerState::from_generators(std::move(gens)), std::move(labels), {0},
                                     std::move(outputs));
}

ResourceSpec ring5_encode_by_attachment() {
    GraphSpec g;
    g.num_vertices = 6;
    for (size_t a = 0; a < 5; ++a) g.edges.emplace_back(1 + a, 1 + (a + 1) % 5);
    for (size_t a = 0; a < 5; ++a) g.edges.emplace_back(0, 1 + a);
    std::vector<std::string> labels{"A", "q0", "q1", "q2", "q3", "q4"};
    return ResourceSpec::from_parent(graph_state(g), std::move(labels), {0}, {1, 2, 3, 4, 5});
}

ResourceSpec decode_syndrome_resource(const CodeSpec &code) {
    size_t n = code.n;
    ResourceSpec cj = cj_state(code.encoder().inverse());
    std::vector<std::pair<std::string, Pauli1>> meas;
    for (size_t j = 1; j < n; ++j) meas.emplace_back("out" + std::to_string(j), Pauli1::Z);
    ResourceSpec r = premeasure_outputs(cj, meas);
    std::vector<std::string> labels = r.parent_labels();
    for (size_t q = 0; q < n; ++q) labels[q] = "q" + std::to_string(q);
    labels[n] = "A";
    std::vector<VirtualMeasurement> virtuals = r.virtuals();
    for (size_t j = 0; j < virtuals.size(); ++j) virtuals[j].name = "s" + std::to_string(j);
    return ResourceSpec::from_parent(r.parent(), std::move(labels), r.parent_inputs(), r.parent_outputs(),
                                     std::move(virtuals));
}

ResourceSpec encode_decode_combined(const CodeSpec &code) {
    std::vector<std::pair<std::string, std::string>> links;
    for (size_t q = 0; q < code.n; ++q) links.emplace_back("e.q" + std::to_string(q), "d.q" + std::to_string(q));
    ResourceSpec r = merge(encode_resource(code).with_prefix("e."), decode_syndrome_resource(code).with_prefix("d."), links);
    return r.relabeled({"in"}, {"out"});
}

ResourceSpec correction_resource(const CodeSpec &code) {
    ResourceSpec r = merge(decode_syndrome_resource(code).with_prefix("in."), encode_resource(code).with_prefix("out."),
                           {{"in.A", "out.A"}});
    return r;
}

Pauli1 decoded_correction(const CodeSpec &code, uint64_t syndrome) {
    return code.encoder().inverse().conjugate(code.correction(syndrome)).get(0);
}

PauliString correction_frame(const CodeSpec &code, uint64_t syndrome) {
    return code.logical(decoded_correction(code, syndrome));
}

// Purification and repeater resources.

ResourceSpec epp_round(RecurrenceVariant variant, Party party) {
    CliffordMap c = CliffordMap::identity(2);
    if (variant == RecurrenceVariant::DEJMPS) {
        for (size_t q = 0; q < 2; ++q) {
            c = (party == Party::Alice ? CliffordMap::sqrt_x(2, q) : CliffordMap::sqrt_x_dag(2, q)).after(c);
        }
    }
    c = CliffordMap::cnot(2, 0, 1).after(c);
    ResourceSpec r = premeasure_outputs(cj_state(c), {{"out1", Pauli1::Z}});
    std::vector<VirtualMeasurement> virtuals = r.virtuals();
    virtuals[0].name = "t";
    std::vector<std::string> labels{"in0", "in1", "out", "t"};
    return ResourceSpec::from_parent(r.parent(), std::move(labels), r.parent_inputs(), r.parent_outputs(),
                                     std::move(virtuals));
}

ResourceSpec epp_recurrence(size_t rounds, RecurrenceVariant variant, Party party) {
    if (rounds == 0 || rounds > 6) throw std::invalid_argument("purification rounds must be between 1 and 6");
    if (rounds == 1) return epp_round(variant, party);
    ResourceSpec half = epp_recurrence(rounds - 1, variant, party);
    ResourceSpec both = merge(half.with_prefix("a."), half.with_prefix("b."), {});
    ResourceSpec r = merge(both, epp_round(variant, party).with_prefix("r."), {{"a.out", "r.in0"}, {"b.out", "r.in1"}});
    std::vector<std::string> inputs;
    for (size_t k = 0; k < r.num_inputs(); ++k) inputs.push_back("in" + std::to_string(k));
    return r.relabeled(std::move(inputs), {"out"});
}

ResourceSpec repeater_station(size_t rounds, RecurrenceVariant variant) {
    ResourceSpec left = epp_recurrence(rounds, variant, Party::Bob).with_prefix("L.");
    ResourceSpec right = epp_recurrence(rounds, variant, Party::Alice).with_prefix("R.");
    return bell_connect_outputs(merge(left, right, {}), "L.out", "R.out", "swap");
}

namespace {

size_t param_size(const std::map<std::string, std::string> &params, const std::string &key, size_t fallback) {
    auto it = params.find(key);
    if (it == params.end()) return fallback;
    try {
        size_t used = 0;
        long v = std::stol(it->second, &used);
        if (used != it->second.size() || v < 0) throw std::invalid_argument("");
        return static_cast<size_t>(v);
    } catch (const std::exception &) {
        throw std::invalid_argument("parameter '" + key + "' must be a non-negative integer");
    }
}

std::string param_str(const std::map<std::string, std::string> &params, const std::string &key,
                      const std::string &fallback) {
    auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
}

}  // namespace

CodeSpec catalog_code(const std::string &name, size_t size) {
    if (name == "repetition") return CodeSpec::repetition(size);
    if (name == "phase_repetition") return CodeSpec::repetition(size, true);
    if (name == "ring5") return CodeSpec::ring5();
    throw std::invalid_argument("unknown code '" + name + "'");
}

ResourceSpec catalog_resource(const std::string &name, const std::map<std::string, std::string> &params) {
    RecurrenceVariant variant = parse_variant(param_str(params, "variant", "dejmps"));
    if (name == "epp_recurrence") {
        std::string party = param_str(params, "party", "alice");
        if (party != "alice" && party != "bob") throw std::invalid_argument("party must be alice or bob");
        return epp_recurrence(param_size(params, "rounds", 1), variant, party == "alice" ? Party::Alice : Party::Bob);
    }
    if (name == "repeater_station") return repeater_station(param_size(params, "rounds", 1), variant);
    if (name == "repetition_encode") return encode_resource(CodeSpec::repetition(param_size(params, "size", 3)));
    if (name == "repetition_decode") {
        return decode_syndrome_resource(CodeSpec::repetition(param_size(params, "size", 3)));
    }
    if (name == "ring5_encode") return encode_resource(CodeSpec::ring5());
    if (name == "ring5_decode") return decode_syndrome_resource(CodeSpec::ring5());
    CodeSpec code = catalog_code(param_str(params, "code", "ring5"), param_size(params, "size", 3));
    if (name == "code_encode") return encode_resource(code);
    if (name == "code_decode_syndrome") return decode_syndrome_resource(code);
    if (name == "code_encode_decode_combined") return encode_decode_combined(code);
    if (name == "code_correction") return correction_resource(code);
    throw std::invalid_argument("unknown resource '" + name + "'");
}

}  // namespace mbqc
