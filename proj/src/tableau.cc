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

#include "mbqc/tableau.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <deque>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace mbqc {

namespace {

// Symplectic column c: 2q is x_q, 2q+1 is z_q.
bool column_bit(const PauliString &p, size_t c) { return (c & 1) ? p.z(c >> 1) : p.x(c >> 1); }

PauliString letters_only(const PauliString &p) {
    PauliString r = p;
    r.set_phase(0);
    return r;
}

PauliString embed(const PauliString &p, size_t offset, size_t total) {
    PauliString r(total);
    for (size_t q = 0; q < p.num_qubits(); ++q) r.set(offset + q, p.get(q));
    r.set_phase(p.phase());
    return r;
}

}  // namespace

StabilizerState::StabilizerState(size_t num_qubits) {
    for (size_t q = 0; q < num_qubits; ++q) {
        stabilizers_.push_back(PauliString::single(num_qubits, q, Pauli1::Z));
        destabilizers_.push_back(PauliString::single(num_qubits, q, Pauli1::X));
    }
}

StabilizerState StabilizerState::from_generators(std::vector<PauliString> gens) {
    size_t n = gens.size();
    for (const PauliString &g : gens) {
        if (g.num_qubits() != n) {
            throw std::invalid_argument("need exactly one generator per qubit (" + std::to_string(n) + " generators, " +
                                        std::to_string(g.num_qubits()) + " qubits)");
        }
        if (!g.is_hermitian()) throw std::invalid_argument("generator " + g.str() + " is not Hermitian");
    }
    for (size_t a = 0; a < n; ++a) {
        for (size_t b = a + 1; b < n; ++b) {
            if (!commutes(gens[a], gens[b])) {
                throw std::invalid_argument("generators " + gens[a].str() + " and " + gens[b].str() + " anticommute");
            }
        }
    }
    std::vector<PauliString> destabs;
    for (size_t k = 0; k < n; ++k) {
        bool found = false;
        for (size_t cand = 0; cand < 2 * n && !found; ++cand) {
            PauliString c = PauliString::single(n, cand >> 1, (cand & 1) ? Pauli1::Z : Pauli1::X);
            for (size_t i = 0; i < k; ++i) {
                bool with_g = !commutes(c, gens[i]);
                bool with_d = !commutes(c, destabs[i]);
                if (with_g) c *= destabs[i];
                if (with_d) c *= gens[i];
            }
            if (!commutes(c, gens[k])) {
                c.set_phase(0);
                destabs.push_back(c);
                found = true;
            }
        }
        if (!found) throw std::invalid_argument("generators are not independent");
        for (size_t m = k + 1; m < n; ++m) {
            if (!commutes(gens[m], destabs[k])) gens[m] *= gens[k];
        }
    }
    StabilizerState s;
    s.stabilizers_ = std::move(gens);
    s.destabilizers_ = std::move(destabs);
    return s;
}

void StabilizerState::apply(const CliffordMap &c, std::span<const size_t> targets) {
    if (c.num_qubits() != targets.size()) throw std::invalid_argument("Clifford size does not match target count");
    auto update = [&](PauliString &row) {
        PauliString sub = row.restricted(targets);
        PauliString image = c.conjugate(sub);
        row.assign_letters(targets, image);
        row.set_phase(image.phase());
    };
    for (auto &row : stabilizers_) update(row);
    for (auto &row : destabilizers_) update(row);
}

void StabilizerState::apply(const CliffordMap &c) {
    if (c.num_qubits() != num_qubits()) throw std::invalid_argument("Clifford size does not match state");
    for (auto &row : stabilizers_) row = c.conjugate(row);
    for (auto &row : destabilizers_) row = c.conjugate(row);
}

void StabilizerState::apply_gate(const Gate &g) {
    if (is_two_qubit(g.kind)) {
        size_t t[2] = {g.q0, g.q1};
        apply(gate_map(2, Gate{g.kind, 0, 1}), t);
    } else {
        size_t t[1] = {g.q0};
        apply(gate_map(1, Gate{g.kind, 0, 0}), t);
    }
}

void StabilizerState::apply_pauli(const PauliString &p) {
    for (auto &row : stabilizers_) {
        if (!commutes(row, p)) row.set_phase(static_cast<uint8_t>(row.phase() + 2));
    }
}

void StabilizerState::apply_pauli(size_t qubit, Pauli1 p) {
    if (p == Pauli1::I) return;
    apply_pauli(PauliString::single(num_qubits(), qubit, p));
}

std::optional<int> StabilizerState::peek(const PauliString &p) const {
    if (p.num_qubits() != num_qubits()) throw std::invalid_argument("measurement size mismatch");
    if (!p.is_hermitian()) throw std::invalid_argument("measured operator " + p.str() + " is not Hermitian");
    size_t n = num_qubits();
    for (size_t k = 0; k < n; ++k) {
        if (!commutes(stabilizers_[k], p)) return std::nullopt;
    }
    PauliString acc(n);
    for (size_t k = 0; k < n; ++k) {
        if (!commutes(destabilizers_[k], p)) acc *= stabilizers_[k];
    }
    return acc.phase() == p.phase() ? 1 : -1;
}

MeasureResult StabilizerState::measure(const PauliString &p, Rng &rng, std::optional<int> forced) {
    if (forced && *forced != 1 && *forced != -1) throw std::invalid_argument("forced outcome must be +1 or -1");
    if (p.is_identity_up_to_phase()) throw std::invalid_argument("measured operator is trivial");
    if (auto det = peek(p)) {
        if (forced && *forced != *det) throw std::domain_error("forced outcome has zero probability");
        return {*det, true};
    }
    size_t n = num_qubits();
    size_t k = 0;
    while (commutes(stabilizers_[k], p)) ++k;
    for (size_t j = 0; j < n; ++j) {
        if (j == k) continue;
        if (!commutes(stabilizers_[j], p)) stabilizers_[j] *= stabilizers_[k];
        if (!commutes(destabilizers_[j], p)) {
            destabilizers_[j] *= stabilizers_[k];
            destabilizers_[j].set_phase(0);
        }
    }
    destabilizers_[k] = stabilizers_[k];
    destabilizers_[k].set_phase(0);
    int outcome = forced ? *forced : (rng.coin() ? -1 : 1);
    stabilizers_[k] = p;
    if (outcome == -1) stabilizers_[k].set_phase(static_cast<uint8_t>(p.phase() + 2));
    return {outcome, false};
}

BellOutcome StabilizerState::bell_measure(size_t a, size_t b, Rng &rng, std::optional<BellOutcome> forced,
                                          double *probability) {
    size_t n = num_qubits();
    if (a == b || a >= n || b >= n) throw std::invalid_argument("bad Bell measurement qubits");
    PauliString xx(n), zz(n);
    xx.set(a, Pauli1::X);
    xx.set(b, Pauli1::X);
    zz.set(a, Pauli1::Z);
    zz.set(b, Pauli1::Z);
    std::optional<int> fx, fz;
    if (forced) {
        fx = forced->b_x ? -1 : 1;
        fz = forced->b_z ? -1 : 1;
    }
    BellOutcome out;
    MeasureResult rx = measure(xx, rng, fx);
    MeasureResult rz = measure(zz, rng, fz);
    out.b_x = rx.outcome == -1;
    out.b_z = rz.outcome == -1;
    if (probability) *probability = (rx.deterministic ? 1.0 : 0.5) * (rz.deterministic ? 1.0 : 0.5);
    remove_qubits({a, b});
    return out;
}

void StabilizerState::remove_qubits(std::vector<size_t> qubits) {
    size_t n = num_qubits();
    std::sort(qubits.begin(), qubits.end());
    if (std::adjacent_find(qubits.begin(), qubits.end()) != qubits.end()) {
        throw std::invalid_argument("duplicate qubit in removal list");
    }
    if (!qubits.empty() && qubits.back() >= n) throw std::invalid_argument("removed qubit out of range");
    std::vector<PauliString> rows = stabilizers_;
    size_t rank = 0;
    for (size_t q : qubits) {
        for (size_t c : {2 * q, 2 * q + 1}) {
            size_t pivot = rank;
            while (pivot < rows.size() && !column_bit(rows[pivot], c)) ++pivot;
            if (pivot == rows.size()) continue;
            std::swap(rows[rank], rows[pivot]);
            for (size_t r = 0; r < rows.size(); ++r) {
                if (r != rank && column_bit(rows[r], c)) rows[r] *= rows[rank];
            }
            ++rank;
        }
    }
    if (rank != qubits.size()) throw std::domain_error("removed qubits are entangled with the rest");
    std::vector<PauliString> kept;
    for (size_t r = rank; r < rows.size(); ++r) kept.push_back(rows[r].removed(qubits));
    *this = from_generators(std::move(kept));
}

StabilizerState StabilizerState::tensor(const StabilizerState &other) const {
    size_t n = num_qubits(), m = other.num_qubits();
    StabilizerState s;
    for (size_t k = 0; k < n; ++k) {
        s.stabilizers_.push_back(embed(stabilizers_[k], 0, n + m));
        s.destabilizers_.push_back(embed(destabilizers_[k], 0, n + m));
    }
    for (size_t k = 0; k < m; ++k) {
        s.stabilizers_.push_back(embed(other.stabilizers_[k], n, n + m));
        s.destabilizers_.push_back(embed(other.destabilizers_[k], n, n + m));
    }
    return s;
}

std::string StabilizerState::check_invariants() const {
    size_t n = num_qubits();
    if (destabilizers_.size() != n) return "destabilizer count mismatch";
    for (size_t a = 0; a < n; ++a) {
        if (stabilizers_[a].num_qubits() != n || destabilizers_[a].num_qubits() != n) return "row width mismatch";
        if (!stabilizers_[a].is_hermitian()) return "non-Hermitian stabilizer " + stabilizers_[a].str();
        for (size_t b = 0; b < n; ++b) {
            if (!commutes(stabilizers_[a], stabilizers_[b])) return "stabilizers anticommute";
            if (!commutes(destabilizers_[a], destabilizers_[b])) return "destabilizers anticommute";
            if (commutes(stabilizers_[a], destabilizers_[b]) != (a != b)) return "stabilizer/destabilizer pairing broken";
        }
    }
    return "";
}

std::vector<PauliString> StabilizerState::canonical_stabilizers() const {
    std::vector<PauliString> rows = stabilizers_;
    size_t n = num_qubits();
    size_t rank = 0;
    for (size_t c = 0; c < 2 * n && rank < rows.size(); ++c) {
        size_t pivot = rank;
        while (pivot < rows.size() && !column_bit(rows[pivot], c)) ++pivot;
        if (pivot == rows.size()) continue;
        std::swap(rows[rank], rows[pivot]);
        for (size_t r = 0; r < rows.size(); ++r) {
            if (r != rank && column_bit(rows[r], c)) rows[r] *= rows[rank];
        }
        ++rank;
    }
    return rows;
}

bool StabilizerState::same_state(const StabilizerState &other) const {
    return num_qubits() == other.num_qubits() && canonical_stabilizers() == other.canonical_stabilizers();
}

MeasureResult measure_pauli(StabilizerState &s, const PauliString &p, Rng &rng) { return s.measure(p, rng); }

BellOutcome bell_measure(StabilizerState &s, size_t a, size_t b, Rng &rng) { return s.bell_measure(a, b, rng); }

std::optional<std::vector<bool>> express_in_span(const std::vector<PauliString> &input, const PauliString &target) {
    size_t m = input.size();
    size_t n = target.num_qubits();
    std::vector<PauliString> rows;
    std::vector<std::vector<bool>> combos;
    for (size_t i = 0; i < m; ++i) {
        if (input[i].num_qubits() != n) throw std::invalid_argument("span rows have mismatched sizes");
        rows.push_back(letters_only(input[i]));
        std::vector<bool> e(m, false);
        e[i] = true;
        combos.push_back(std::move(e));
    }
    auto xor_into = [](std::vector<bool> &a, const std::vector<bool> &b) {
        for (size_t i = 0; i < a.size(); ++i) a[i] = a[i] != b[i];
    };
    std::vector<size_t> pivot_cols;
    size_t rank = 0;
    for (size_t c = 0; c < 2 * n && rank < m; ++c) {
        size_t pivot = rank;
        while (pivot < m && !column_bit(rows[pivot], c)) ++pivot;
        if (pivot == m) continue;
        std::swap(rows[rank], rows[pivot]);
        std::swap(combos[rank], combos[pivot]);
        for (size_t r = 0; r < m; ++r) {
            if (r != rank && column_bit(rows[r], c)) {
                rows[r] *= rows[rank];
                xor_into(combos[r], combos[rank]);
            }
        }
        pivot_cols.push_back(c);
        ++rank;
    }
    PauliString t = letters_only(target);
    std::vector<bool> mask(m, false);
    for (size_t r = 0; r < rank; ++r) {
        if (column_bit(t, pivot_cols[r])) {
            t *= rows[r];
            xor_into(mask, combos[r]);
        }
    }
    if (!t.is_identity_up_to_phase()) return std::nullopt;
    return mask;
}

void GraphSpec::validate() const {
    std::set<std::pair<size_t, size_t>> seen;
    for (auto [a, b] : edges) {
        if (a >= num_vertices || b >= num_vertices) throw std::invalid_argument("edge endpoint out of range");
        if (a == b) throw std::invalid_argument("self-loop on vertex " + std::to_string(a));
        if (!seen.insert({std::min(a, b), std::max(a, b)}).second) {
            throw std::invalid_argument("duplicate edge " + std::to_string(a) + "-" + std::to_string(b));
        }
    }
    if (!lc_tags.empty() && lc_tags.size() != num_vertices) throw std::invalid_argument("lc tag count mismatch");
    for (int t : lc_tags) {
        if (t < 0 || t >= 24) throw std::invalid_argument("lc tag out of range");
    }
}

bool GraphSpec::has_edge(size_t a, size_t b) const {
    for (auto [u, v] : edges) {
        if ((u == a && v == b) || (u == b && v == a)) return true;
    }
    return false;
}

std::vector<size_t> GraphSpec::neighbors(size_t v) const {
    std::vector<size_t> out;
    for (auto [a, b] : edges) {
        if (a == v) out.push_back(b);
        if (b == v) out.push_back(a);
    }
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

std::string trim(std::string_view s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    size_t start = 0;
    for (size_t i = 0; i <= s.size(); ++i) {
        if (i == s.size() || s[i] == sep) {
            out.push_back(trim(s.substr(start, i - start)));
            start = i + 1;
        }
    }
    return out;
}

size_t parse_index(const std::string &s) {
    if (s.empty() || !std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
        throw std::invalid_argument("expected a non-negative integer, got '" + s + "'");
    }
    return std::stoul(s);
}

}  // namespace

GraphSpec GraphSpec::parse(std::string_view text) {
    auto sections = split(text, ';');
    GraphSpec g;
    g.num_vertices = parse_index(sections.at(0));
    for (size_t s = 1; s < sections.size(); ++s) {
        const std::string &sec = sections[s];
        if (sec.empty()) continue;
        if (sec.rfind("lc:", 0) == 0) {
            g.lc_tags.assign(g.num_vertices, 0);
            for (const std::string &item : split(std::string_view(sec).substr(3), ',')) {
                if (item.empty()) continue;
                auto kv = split(item, '=');
                if (kv.size() != 2) throw std::invalid_argument("bad lc entry '" + item + "'");
                size_t v = parse_index(kv[0]);
                if (v >= g.num_vertices) throw std::invalid_argument("lc vertex out of range");
                g.lc_tags[v] = static_cast<int>(parse_index(kv[1]));
            }
        } else {
            for (const std::string &item : split(sec, ',')) {
                if (item.empty()) continue;
                auto ab = split(item, '-');
                if (ab.size() != 2) throw std::invalid_argument("bad edge '" + item + "'");
                g.edges.emplace_back(parse_index(ab[0]), parse_index(ab[1]));
            }
        }
    }
    g.validate();
    return g;
}

std::string GraphSpec::str() const {
    std::ostringstream out;
    out << num_vertices << ";";
    for (size_t k = 0; k < edges.size(); ++k) out << (k ? ", " : " ") << edges[k].first << "-" << edges[k].second;
    bool any_tag = std::any_of(lc_tags.begin(), lc_tags.end(), [](int t) { return t != 0; });
    if (any_tag) {
        out << "; lc:";
        bool first = true;
        for (size_t v = 0; v < lc_tags.size(); ++v) {
            if (lc_tags[v] == 0) continue;
            out << (first ? " " : ", ") << v << "=" << lc_tags[v];
            first = false;
        }
    }
    return out.str();
}

const std::vector<CliffordMap> &single_qubit_cliffords() {
    static const std::vector<CliffordMap> table = [] {
        std::vector<CliffordMap> found{CliffordMap::identity(1)};
        CliffordMap gens[2] = {CliffordMap::hadamard(1, 0), CliffordMap::phase(1, 0)};
        for (size_t head = 0; head < found.size(); ++head) {
            for (const CliffordMap &g : gens) {
                CliffordMap next = g.after(found[head]);
                if (std::find(found.begin(), found.end(), next) == found.end()) found.push_back(next);
            }
        }
        return found;
    }();
    return table;
}

int single_qubit_clifford_index(const CliffordMap &c) {
    const auto &table = single_qubit_cliffords();
    auto it = std::find(table.begin(), table.end(), c);
    if (it == table.end()) throw std::invalid_argument("not a single-qubit Clifford");
    return static_cast<int>(it - table.begin());
}

StabilizerState graph_state(const GraphSpec &g) {
    g.validate();
    size_t n = g.num_vertices;
    std::vector<PauliString> gens;
    for (size_t a = 0; a < n; ++a) {
        PauliString k = PauliString::single(n, a, Pauli1::X);
        for (size_t b : g.neighbors(a)) k.set_z(b, true);
        gens.push_back(k);
    }
    StabilizerState s = StabilizerState::from_generators(std::move(gens));
    for (size_t v = 0; v < g.lc_tags.size(); ++v) {
        if (g.lc_tags[v] == 0) continue;
        size_t t[1] = {v};
        s.apply(single_qubit_cliffords()[g.lc_tags[v]], t);
    }
    return s;
}

GraphSpec to_graph_form(const StabilizerState &state) {
    StabilizerState s = state;
    size_t n = s.num_qubits();
    std::vector<CliffordMap> applied(n, CliffordMap::identity(1));
    auto apply_local = [&](size_t q, const CliffordMap &c) {
        size_t t[1] = {q};
        s.apply(c, t);
        applied[q] = c.after(applied[q]);
    };

    // Make the X block full rank by Hadamards on the pivots of the Z-only rows.
    std::vector<PauliString> rows = s.stabilizers();
    size_t rank = 0;
    for (size_t q = 0; q < n; ++q) {
        size_t pivot = rank;
        while (pivot < n && !rows[pivot].x(q)) ++pivot;
        if (pivot == n) continue;
        std::swap(rows[rank], rows[pivot]);
        for (size_t r = 0; r < n; ++r) {
            if (r != rank && rows[r].x(q)) rows[r] *= rows[rank];
        }
        ++rank;
    }
    size_t zrank = rank;
    for (size_t q = 0; q < n && zrank < n; ++q) {
        size_t pivot = zrank;
        while (pivot < n && !rows[pivot].z(q)) ++pivot;
        if (pivot == n) continue;
        std::swap(rows[zrank], rows[pivot]);
        for (size_t r = rank; r < n; ++r) {
            if (r != zrank && rows[r].z(q)) rows[r] *= rows[zrank];
        }
        apply_local(q, CliffordMap::hadamard(1, 0));
        ++zrank;
    }

    // Gauss-Jordan so that row a has X part e_a; Y on the diagonal is
    // rotated to X, then signs are cleared with Z.
    auto reduced = [&] {
        std::vector<PauliString> r = s.stabilizers();
        for (size_t q = 0; q < n; ++q) {
            size_t pivot = q;
            while (pivot < n && !r[pivot].x(q)) ++pivot;
            if (pivot == n) throw std::logic_error("graph-form reduction failed");
            std::swap(r[q], r[pivot]);
            for (size_t k = 0; k < n; ++k) {
                if (k != q && r[k].x(q)) r[k] *= r[q];
            }
        }
        return r;
    };
    rows = reduced();
    for (size_t a = 0; a < n; ++a) {
        if (rows[a].z(a)) apply_local(a, CliffordMap::phase_dag(1, 0));
    }
    rows = reduced();
    GraphSpec g;
    g.num_vertices = n;
    for (size_t a = 0; a < n; ++a) {
        if (rows[a].sign() < 0) apply_local(a, CliffordMap::pauli(1, 0, Pauli1::Z));
        for (size_t b = a + 1; b < n; ++b) {
            if (rows[a].z(b)) g.edges.emplace_back(a, b);
        }
    }
    g.lc_tags.resize(n);
    for (size_t q = 0; q < n; ++q) g.lc_tags[q] = single_qubit_clifford_index(applied[q].inverse());
    return g;
}

GraphSpec local_complement(const GraphSpec &g, size_t v) {
    auto nb = g.neighbors(v);
    std::set<std::pair<size_t, size_t>> edges;
    for (auto [a, b] : g.edges) edges.insert({std::min(a, b), std::max(a, b)});
    for (size_t i = 0; i < nb.size(); ++i) {
        for (size_t j = i + 1; j < nb.size(); ++j) {
            std::pair<size_t, size_t> e{nb[i], nb[j]};
            if (!edges.erase(e)) edges.insert(e);
        }
    }
    GraphSpec out;
    out.num_vertices = g.num_vertices;
    out.edges.assign(edges.begin(), edges.end());
    return out;
}

std::vector<std::vector<std::pair<size_t, size_t>>> local_complement_orbit(const GraphSpec &g, size_t limit) {
    using EdgeSet = std::vector<std::pair<size_t, size_t>>;
    auto canon = [](const GraphSpec &h) {
        EdgeSet e;
        for (auto [a, b] : h.edges) e.emplace_back(std::min(a, b), std::max(a, b));
        std::sort(e.begin(), e.end());
        return e;
    };
    std::set<EdgeSet> seen;
    std::vector<EdgeSet> order;
    std::deque<GraphSpec> queue;
    GraphSpec start;
    start.num_vertices = g.num_vertices;
    start.edges = canon(g);
    seen.insert(start.edges);
    order.push_back(start.edges);
    queue.push_back(start);
    while (!queue.empty() && order.size() < limit) {
        GraphSpec cur = queue.front();
        queue.pop_front();
        for (size_t v = 0; v < cur.num_vertices; ++v) {
            GraphSpec next = local_complement(cur, v);
            EdgeSet key = canon(next);
            if (seen.insert(key).second) {
                order.push_back(key);
                queue.push_back(next);
            }
        }
    }
    return order;
}

Amplitudes to_dense(const StabilizerState &state) {
    size_t n = state.num_qubits();
    if (n > kDenseQubitLimit) {
        throw std::invalid_argument("dense conversion limited to " + std::to_string(kDenseQubitLimit) + " qubits");
    }
    // Find one computational basis state in the support.
    StabilizerState probe = state;
    Rng unused(0);
    size_t start = 0;
    for (size_t q = 0; q < n; ++q) {
        PauliString z = PauliString::single(n, q, Pauli1::Z);
        auto known = probe.peek(z);
        int out = known ? *known : probe.measure(z, unused, 1).outcome;
        if (out == -1) start |= size_t{1} << (n - 1 - q);
    }
    size_t dim = size_t{1} << n;
    Amplitudes v(dim, 0.0);
    v[start] = 1.0;
    static const std::complex<double> powers[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    for (const PauliString &g : state.stabilizers()) {
        size_t xmask = 0, zmask = 0;
        int ys = 0;
        for (size_t q = 0; q < n; ++q) {
            size_t bit = size_t{1} << (n - 1 - q);
            if (g.x(q)) xmask |= bit;
            if (g.z(q)) zmask |= bit;
            if (g.x(q) && g.z(q)) ++ys;
        }
        std::complex<double> base = powers[(g.phase() + ys) & 3];
        Amplitudes w(dim, 0.0);
        for (size_t i = 0; i < dim; ++i) {
            if (v[i] == 0.0) continue;
            std::complex<double> a = v[i] * 0.5;
            w[i] += a;
            double sgn = (std::popcount(i & zmask) & 1) ? -1.0 : 1.0;
            w[i ^ xmask] += a * base * sgn;
        }
        v.swap(w);
    }
    double norm = 0;
    for (auto &a : v) norm += std::norm(a);
    norm = std::sqrt(norm);
    std::complex<double> fix = 0;
    for (auto &a : v) {
        if (std::abs(a) > 1e-12) {
            fix = std::abs(a) / a;
            break;
        }
    }
    for (auto &a : v) {
        a *= fix / norm;
        if (std::abs(a.real()) < 1e-15) a.real(0);
        if (std::abs(a.imag()) < 1e-15) a.imag(0);
    }
    return v;
}

}  // namespace mbqc
