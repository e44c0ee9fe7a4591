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

#include "mbqc/harness.h"

#include <algorithm>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <json.hpp>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "mbqc/bell_diagonal.h"
#include "mbqc/dense.h"
#include "mbqc/netsim.h"
#include "mbqc/resources.h"
#include "mbqc/testing.h"
#include "mbqc/thresholds.h"

namespace mbqc {

using json = nlohmann::json;

// Records.

namespace {

std::string exact(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string csv_field(const std::string &s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::vector<std::string> split_csv(const std::string &line) {
    std::vector<std::string> out(1);
    bool quoted = false;
    for (size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                out.back() += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                out.back() += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.emplace_back();
        } else {
            out.back() += c;
        }
    }
    if (quoted) throw std::invalid_argument("unterminated quote in CSV row");
    return out;
}

double to_double(const std::string &s, const std::string &field) {
    size_t used = 0;
    double v = 0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception &) {
        used = 0;
    }
    if (used == 0 || used != s.size()) throw std::invalid_argument(field + ": not a number: '" + s + "'");
    return v;
}

uint64_t to_u64(const std::string &s, const std::string &field) {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) {
        throw std::invalid_argument(field + ": not a non-negative integer: '" + s + "'");
    }
    return std::stoull(s);
}

}  // namespace

std::string to_csv_row(const ResultRecord &r) {
    std::vector<std::string> f{r.protocol,    r.params,         r.noise,          exact(r.fidelity),
                               exact(r.ci_lo), exact(r.ci_hi),   exact(r.p_success), exact(r.yield),
                               std::to_string(r.samples), std::to_string(r.seed), r.config_hash, r.version};
    std::string out;
    for (size_t i = 0; i < f.size(); ++i) out += (i ? "," : "") + csv_field(f[i]);
    return out;
}

ResultRecord from_csv_row(const std::string &line) {
    std::vector<std::string> f = split_csv(line);
    if (f.size() != 12) throw std::invalid_argument("CSV row needs 12 fields, got " + std::to_string(f.size()));
    ResultRecord r;
    r.protocol = f[0];
    r.params = f[1];
    r.noise = f[2];
    r.fidelity = to_double(f[3], "fidelity");
    r.ci_lo = to_double(f[4], "ci_lo");
    r.ci_hi = to_double(f[5], "ci_hi");
    r.p_success = to_double(f[6], "p_success");
    r.yield = to_double(f[7], "yield");
    r.samples = to_u64(f[8], "samples");
    r.seed = to_u64(f[9], "seed");
    r.config_hash = f[10];
    r.version = f[11];
    return r;
}

std::string to_json_line(const ResultRecord &r) {
    json j{{"protocol", r.protocol}, {"params", r.params},   {"noise", r.noise},           {"fidelity", r.fidelity},
           {"ci_lo", r.ci_lo},       {"ci_hi", r.ci_hi},     {"p_success", r.p_success},   {"yield", r.yield},
           {"samples", r.samples},   {"seed", r.seed},       {"config_hash", r.config_hash}, {"version", r.version}};
    return j.dump();
}

ResultRecord from_json_line(const std::string &line) {
    json j = json::parse(line);
    ResultRecord r;
    r.protocol = j.at("protocol").get<std::string>();
    r.params = j.at("params").get<std::string>();
    r.noise = j.at("noise").get<std::string>();
    r.fidelity = j.at("fidelity").get<double>();
    r.ci_lo = j.at("ci_lo").get<double>();
    r.ci_hi = j.at("ci_hi").get<double>();
    r.p_success = j.at("p_success").get<double>();
    r.yield = j.at("yield").get<double>();
    r.samples = j.at("samples").get<uint64_t>();
    r.seed = j.at("seed").get<uint64_t>();
    r.config_hash = j.at("config_hash").get<std::string>();
    r.version = j.at("version").get<std::string>();
    return r;
}

ResultRecord make_record(const std::string &protocol, const std::string &params, const NoiseModel &noise,
                         const ProtocolStats &stats) {
    ResultRecord r;
    r.protocol = protocol;
    r.params = params;
    r.noise = noise.str();
    r.fidelity = stats.fidelity();
    Interval ci = stats.fidelity_interval();
    r.ci_lo = ci.lo;
    r.ci_hi = ci.hi;
    r.p_success = stats.p_success();
    r.yield = stats.yield();
    r.samples = stats.samples;
    r.seed = stats.seed;
    return r;
}

// Configuration.

double parse_probability(const std::string &text, const std::string &field) {
    if (text.find('%') != std::string::npos) {
        throw std::invalid_argument(field + ": percent values are not accepted, give a probability in [0, 1]");
    }
    double v = to_double(text, field);
    if (!(v >= 0 && v <= 1)) throw std::invalid_argument(field + ": " + text + " is not a probability in [0, 1]");
    return v;
}

std::string RunConfig::canonical() const {
    std::ostringstream out;
    out << "subcommand=" << subcommand << "\n";
    for (const auto &[k, v] : params) out << "params." << k << "=" << v << "\n";
    out << "noise.p_resource=" << exact(noise.p_resource) << "\n";
    out << "noise.q_meas=" << exact(noise.q_meas) << "\n";
    out << "noise.q_channel=" << exact(noise.q_channel) << "\n";
    out << "samples=" << samples << "\nseed=" << seed << "\nversion=" << kToolVersion << "\n";
    return out.str();
}

std::string RunConfig::hash() const {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : canonical()) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void RunConfig::validate() const {
    static const std::vector<std::string> known{"purify", "hashing", "qec", "chain", "repeater",
                                                "threshold", "sweep", "oracle-check"};
    if (std::find(known.begin(), known.end(), subcommand) == known.end()) {
        throw std::invalid_argument("run.subcommand: unknown subcommand '" + subcommand + "'");
    }
    try {
        noise.validate();
    } catch (const std::exception &e) {
        throw std::invalid_argument(std::string("noise: ") + e.what());
    }
    if (samples == 0) throw std::invalid_argument("run.samples: must be positive");
}

std::string RunConfig::param(const std::string &key, const std::string &fallback) const {
    auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
}

double RunConfig::param_probability(const std::string &key, double fallback) const {
    auto it = params.find(key);
    return it == params.end() ? fallback : parse_probability(it->second, "params." + key);
}

size_t RunConfig::param_size(const std::string &key, size_t fallback) const {
    auto it = params.find(key);
    return it == params.end() ? fallback : size_t(to_u64(it->second, "params." + key));
}

bool RunConfig::param_flag(const std::string &key) const {
    std::string v = param(key, "false");
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw std::invalid_argument("params." + key + ": expected true or false, got '" + v + "'");
}

RunConfig load_config(std::istream &in) {
    namespace pt = boost::property_tree;
    pt::ptree tree;
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error &e) {
        throw std::invalid_argument(std::string("config: ") + e.message() + " at line " + std::to_string(e.line()));
    }
    RunConfig cfg;
    for (const auto &[section, body] : tree) {
        if (body.empty() && !body.data().empty()) {
            throw std::invalid_argument("config: key '" + section + "' outside a section");
        }
        for (const auto &[key, node] : body) {
            std::string field = section + "." + key, v = node.data();
            if (section == "run") {
                if (key == "subcommand") cfg.subcommand = v;
                else if (key == "samples") cfg.samples = to_u64(v, field);
                else if (key == "seed") cfg.seed = to_u64(v, field);
                else if (key == "shards") cfg.shards = size_t(to_u64(v, field));
                else throw std::invalid_argument(field + ": unknown key");
            } else if (section == "noise") {
                if (key == "p_resource") cfg.noise.p_resource = parse_probability(v, field);
                else if (key == "q_meas") cfg.noise.q_meas = parse_probability(v, field);
                else if (key == "q_channel") cfg.noise.q_channel = parse_probability(v, field);
                else throw std::invalid_argument(field + ": unknown key");
            } else if (section == "params") {
                if (v.find('%') != std::string::npos) {
                    throw std::invalid_argument(field + ": percent values are not accepted, give a probability in [0, 1]");
                }
                cfg.params[key] = v;
            } else if (section == "output") {
                if (key == "csv") cfg.csv_path = v;
                else if (key == "json") cfg.json_path = v;
                else if (key == "plot") cfg.plot_path = v;
                else throw std::invalid_argument(field + ": unknown key");
            } else {
                throw std::invalid_argument("config: unknown section [" + section + "]");
            }
        }
    }
    cfg.validate();
    return cfg;
}

RunConfig load_config_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open '" + path + "'");
    return load_config(in);
}

size_t default_shards() {
    if (const char *env = std::getenv("MBQC_SHARDS")) {
        std::string s(env);
        if (!s.empty() && s.find_first_not_of("0123456789") == std::string::npos && std::stoull(s) > 0) {
            return size_t(std::stoull(s));
        }
        throw std::invalid_argument("MBQC_SHARDS must be a positive integer");
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

ProtocolStats run_sharded(uint64_t samples, size_t shards,
                          const std::function<ProtocolStats(uint64_t, uint64_t)> &job) {
    shards = std::max<size_t>(1, std::min<uint64_t>(shards, std::max<uint64_t>(samples, 1)));
    std::vector<ProtocolStats> parts(shards);
    std::vector<std::thread> pool;
    uint64_t base = samples / shards, extra = samples % shards, first = 0;
    for (size_t s = 0; s < shards; ++s) {
        uint64_t count = base + (s < extra ? 1 : 0);
        pool.emplace_back([&parts, &job, s, first, count] { parts[s] = job(first, count); });
        first += count;
    }
    for (std::thread &t : pool) t.join();
    ProtocolStats total = parts[0];
    for (size_t s = 1; s < shards; ++s) total.merge(parts[s]);
    return total;
}

// Oracle checks.

namespace {

struct Tracker {
    CheckResult r;
    double tol;

    Tracker(std::string name, double t) : tol(t) { r.name = std::move(name); }
    void compare(double diff, const std::string &where) {
        ++r.cases;
        r.max_difference = std::max(r.max_difference, diff);
        if (!(diff <= tol) && r.passed) {
            r.passed = false;
            r.detail = where + " (difference " + exact(diff) + ")";
        }
    }
    void require(bool ok, const std::string &where) {
        ++r.cases;
        if (!ok && r.passed) {
            r.passed = false;
            r.detail = where;
        }
    }
};

double state_diff(const StabilizerState &s, const dense::DensityMatrix &d) {
    return dense::max_abs_diff(dense::DensityMatrix::from_state(s).rho, d.rho);
}

std::vector<size_t> first_n(size_t n) {
    std::vector<size_t> v(n);
    for (size_t k = 0; k < n; ++k) v[k] = k;
    return v;
}

std::vector<BellOutcome> outcome_tuple(size_t n, size_t code) {
    std::vector<BellOutcome> out;
    for (size_t k = 0; k < n; ++k) out.push_back(BellOutcome::from_index(int((code >> (2 * k)) & 3)));
    return out;
}

dense::DensityMatrix random_density(size_t n, Rng &rng) {
    size_t dim = size_t{1} << n;
    dense::Matrix g(dim, dim);
    for (size_t i = 0; i < dim; ++i) {
        for (size_t j = 0; j < dim; ++j) g(Eigen::Index(i), Eigen::Index(j)) = {rng.uniform() - 0.5, rng.uniform() - 0.5};
    }
    dense::DensityMatrix d;
    d.n = n;
    d.rho = g * g.adjoint();
    d.rho /= d.rho.trace();
    return d;
}

// U on the first n qubits of a host with `ref` trailing reference qubits;
// the result lists the reference qubits first, as teleport_in does.
dense::DensityMatrix expected_channel_output(const StabilizerState &host, const dense::Matrix &u, size_t n, size_t ref) {
    dense::DensityMatrix expected = dense::DensityMatrix::from_state(host);
    dense::Matrix full = u;
    if (ref > 0) {
        Eigen::Index dr = Eigen::Index(1) << ref;
        full = dense::Matrix::Zero(u.rows() * dr, u.cols() * dr);
        for (Eigen::Index i = 0; i < u.rows(); ++i) {
            for (Eigen::Index j = 0; j < u.cols(); ++j) full.block(i * dr, j * dr, dr, dr) = u(i, j) * dense::Matrix::Identity(dr, dr);
        }
    }
    dense::apply_unitary(expected, full);
    std::vector<size_t> front;
    for (size_t q = n; q < n + ref; ++q) front.push_back(q);
    return ref > 0 ? dense::permute_front(expected, front) : expected;
}

// Every outcome tuple of the stabilizer engine, frame applied, against U.
void compare_channel(Tracker &t, const ResourceSpec &r, const dense::Matrix &u, size_t ref, Rng &rng,
                     const std::string &what) {
    size_t n = r.num_inputs();
    StabilizerState host = random_state(n + ref, rng);
    std::vector<size_t> wiring = first_n(n);
    dense::DensityMatrix expected = expected_channel_output(host, u, n, ref);
    for (size_t code = 0; code < (size_t{1} << (2 * n)); ++code) {
        TeleportOptions opt;
        opt.forced = outcome_tuple(n, code);
        opt.apply_frame = true;
        TeleportResult res;
        try {
            res = teleport_in(r, host, wiring, NoiseModel{}, rng, opt);
        } catch (const std::domain_error &) {
            continue;  // outcome tuple with zero probability
        }
        bool bits_clear = std::none_of(res.byproduct.bits.begin(), res.byproduct.bits.end(), [](bool b) { return b; });
        t.require(bits_clear, what + ": virtual bits set for outcome code " + std::to_string(code));
        t.compare(state_diff(res.state, expected), what + ", outcome code " + std::to_string(code));
    }
}

}  // namespace

CheckResult check_golden_maps(const std::string &path) {
    Tracker t("golden-maps", 1e-12);
    PairMap fresh[3] = {generate_recurrence_map(RecurrenceVariant::BBPSSW),
                        generate_recurrence_map(RecurrenceVariant::DEJMPS), generate_swap_map()};
    const PairMap *embedded[3] = {&recurrence_map(RecurrenceVariant::BBPSSW),
                                  &recurrence_map(RecurrenceVariant::DEJMPS), &swap_map()};
    GoldenMaps file;
    std::ifstream in(path);
    if (!in) {
        t.require(false, "cannot open golden file '" + path + "'");
        return t.r;
    }
    try {
        file = read_golden_maps(in);
    } catch (const std::exception &e) {
        t.require(false, std::string("golden file rejected: ") + e.what());
        return t.r;
    }
    const PairMap *stored[3] = {&file.bbpssw, &file.dejmps, &file.swap};
    const char *names[3] = {"bbpssw", "dejmps", "swap"};
    for (int m = 0; m < 3; ++m) {
        for (size_t k = 0; k < 4; ++k) {
            for (size_t i = 0; i < 4; ++i) {
                for (size_t j = 0; j < 4; ++j) {
                    std::string where = std::string(names[m]) + "[" + std::to_string(k) + "][" + std::to_string(i) +
                                        "][" + std::to_string(j) + "]";
                    t.compare(std::abs(fresh[m][k][i][j] - (*embedded[m])[k][i][j]), "embedded " + where);
                    t.compare(std::abs(fresh[m][k][i][j] - (*stored[m])[k][i][j]), "file " + where);
                }
            }
        }
    }
    return t.r;
}

CheckResult check_measurement_sequences(size_t trials, size_t max_qubits, uint64_t seed, double tol) {
    Tracker t("stabilizer-vs-dense", tol);
    Rng rng(seed, 9, 0);
    for (size_t trial = 0; trial < trials; ++trial) {
        size_t n = 1 + rng.below(max_qubits);
        StabilizerState s = random_state(n, rng);
        dense::DensityMatrix d = dense::DensityMatrix::from_state(s);
        std::string where = "trial " + std::to_string(trial) + " (n=" + std::to_string(n) + ")";
        for (int step = 0; step < 6; ++step) {
            PauliString p = random_nontrivial_pauli(n, rng);
            auto branches = dense::measure(d, p);
            auto det = s.peek(p);
            double p_plus = det ? (*det == 1 ? 1.0 : 0.0) : 0.5;
            t.compare(std::abs(branches[0].probability - p_plus), where + " measuring " + p.str());
            t.compare(std::abs(branches[1].probability - (1 - p_plus)), where + " measuring " + p.str());
            MeasureResult m = s.measure(p, rng);
            d = branches[m.outcome == 1 ? 0 : 1].state;
            t.compare(state_diff(s, d), where + " after measuring " + p.str());
        }
        if (n >= 3) {
            size_t a = rng.below(n), b = (a + 1 + rng.below(n - 1)) % n;
            auto branches = dense::bell_measure(d, a, b);
            for (int i = 0; i < 4; ++i) {
                StabilizerState u = s;
                std::string bw = where + " Bell outcome " + std::to_string(i);
                if (branches[size_t(i)].probability < 1e-12) {
                    bool threw = false;
                    try {
                        u.bell_measure(a, b, rng, BellOutcome::from_index(i));
                    } catch (const std::domain_error &) {
                        threw = true;
                    }
                    t.require(threw, bw + ": impossible outcome accepted");
                    continue;
                }
                u.bell_measure(a, b, rng, BellOutcome::from_index(i));
                t.compare(state_diff(u, branches[size_t(i)].state), bw);
            }
        }
    }
    return t.r;
}

CheckResult check_catalog_teleport(uint64_t seed, double tol) {
    Tracker t("catalog-teleport", tol);
    Rng rng(seed, 9, 1);
    std::vector<std::pair<std::string, ResourceSpec>> all{
        {"epp_recurrence(1, alice)", epp_recurrence(1, RecurrenceVariant::DEJMPS, Party::Alice)},
        {"epp_recurrence(1, bob, bbpssw)", epp_recurrence(1, RecurrenceVariant::BBPSSW, Party::Bob)},
        {"epp_recurrence(2, bob)", epp_recurrence(2, RecurrenceVariant::DEJMPS, Party::Bob)},
        {"repeater_station(1)", repeater_station(1, RecurrenceVariant::DEJMPS)},
        {"repetition_encode", encode_resource(CodeSpec::repetition(3))},
        {"repetition_decode", decode_syndrome_resource(CodeSpec::repetition(3))},
        {"ring5_encode", encode_resource(CodeSpec::ring5())},
        {"ring5_decode", decode_syndrome_resource(CodeSpec::ring5())},
        {"ring5_encode_decode_combined", encode_decode_combined(CodeSpec::ring5())},
        {"repetition_correction", correction_resource(CodeSpec::repetition(3))}};
    for (const auto &[name, r] : all) {
        StabilizerState host = random_state(r.num_inputs(), rng);
        std::vector<size_t> wiring = first_n(r.num_inputs());
        auto branches = dense_teleport(r, host, wiring);
        double total = 0;
        for (auto &b : branches) {
            total += b.probability;
            TeleportOptions opt;
            opt.forced = b.outcomes;
            TeleportResult res = teleport_in(r, host, wiring, NoiseModel{}, rng, opt);
            t.compare(state_diff(res.state, b.state), name + ": branch state");
            if (res.probability) t.compare(std::abs(*res.probability - b.probability), name + ": branch probability");
        }
        t.compare(std::abs(total - 1), name + ": total probability");
    }
    return t.r;
}

CheckResult check_noise_composition(size_t trials, uint64_t seed, double tol) {
    Tracker t("noise-composition", tol);
    Rng rng(seed, 9, 2);
    for (size_t i = 0; i < trials; ++i) {
        double p1 = rng.uniform(), p2 = rng.uniform();
        dense::Matrix a = pauli_transfer_matrix(PauliChannel::depolarizing(p1));
        dense::Matrix b = pauli_transfer_matrix(PauliChannel::depolarizing(p2));
        dense::Matrix ab = pauli_transfer_matrix(PauliChannel::depolarizing(p1 * p2));
        std::string where = "p1=" + exact(p1) + " p2=" + exact(p2);
        t.compare(dense::max_abs_diff(a * b, ab), where + " transfer matrices");
        t.compare(dense::max_abs_diff(pauli_transfer_matrix(PauliChannel::depolarizing(p1).then(PauliChannel::depolarizing(p2))), ab),
                  where + " channel composition");
        t.compare(std::abs(compose_noise(p1, p2) - p1 * p2), where + " parameter");
    }
    return t.r;
}

CheckResult check_noise_moving(size_t trials, uint64_t seed, double tol) {
    Tracker t("noise-moving", tol);
    Rng rng(seed, 9, 3);
    for (size_t i = 0; i < trials; ++i) {
        dense::DensityMatrix d = random_density(3, rng);
        size_t a = rng.below(3), b = (a + 1 + rng.below(2)) % 3;
        double p = rng.uniform();
        NoiseMoveCertificate c = move_noise_across_bell(d, a, b, PauliChannel::depolarizing(p), tol);
        std::string where = "state " + std::to_string(i) + " qubits (" + std::to_string(a) + "," + std::to_string(b) +
                            ") p=" + exact(p) + " outcome " + std::to_string(c.worst_outcome);
        t.compare(c.max_difference, where);
    }
    return t.r;
}

CheckResult check_cj_channels(size_t trials, size_t max_qubits, uint64_t seed, double tol) {
    Tracker t("cj-channels", tol);
    Rng rng(seed, 9, 4);
    for (size_t i = 0; i < trials; ++i) {
        size_t n = 1 + i % max_qubits;
        Circuit c = random_circuit(n, 4 * n + 2, rng);
        ResourceSpec r = cj_state(c.to_clifford());
        compare_channel(t, r, dense::circuit_matrix(c), n, rng, "clifford " + std::to_string(i) + " (n=" + std::to_string(n) + ")");
    }
    return t.r;
}

CheckResult check_merge_identities(size_t trials, uint64_t seed, double tol) {
    Tracker t("merge-identities", tol);
    Rng rng(seed, 9, 5);
    for (size_t i = 0; i < trials; ++i) {
        Circuit c[3] = {random_circuit(2, 6, rng), random_circuit(2, 6, rng), random_circuit(2, 6, rng)};
        ResourceSpec a = cj_state(c[0].to_clifford()).with_prefix("a.");
        ResourceSpec b = cj_state(c[1].to_clifford()).with_prefix("b.");
        ResourceSpec d = cj_state(c[2].to_clifford()).with_prefix("c.");
        ResourceSpec left = merge(merge(a, b, {{"a.out0", "b.in0"}, {"a.out1", "b.in1"}}), d,
                                  {{"b.out0", "c.in0"}, {"b.out1", "c.in1"}});
        ResourceSpec right = merge(a, merge(b, d, {{"b.out0", "c.in0"}, {"b.out1", "c.in1"}}),
                                   {{"a.out0", "b.in0"}, {"a.out1", "b.in1"}});
        std::string where = "triple " + std::to_string(i);
        t.require(left.state().same_state(right.state()), where + ": merged states differ");
        for (size_t code = 0; code < 16; ++code) {
            auto o = outcome_tuple(2, code);
            t.require(left.byproduct(o).frame.same_letters(right.byproduct(o).frame),
                      where + ": byproducts differ for outcome code " + std::to_string(code));
        }
        dense::Matrix u = dense::circuit_matrix(c[2]) * dense::circuit_matrix(c[1]) * dense::circuit_matrix(c[0]);
        compare_channel(t, left, u, 1, rng, where + " left");
        compare_channel(t, right, u, 1, rng, where + " right");
    }
    for (const CodeSpec &code : {CodeSpec::repetition(3), CodeSpec::ring5()}) {
        ResourceSpec m = encode_decode_combined(code);
        for (int trial = 0; trial < 3; ++trial) {
            compare_channel(t, m, dense::Matrix::Identity(2, 2), 1, rng, "merge(encode, decode) for " + code.name);
        }
    }
    return t.r;
}

std::vector<CheckResult> oracle_check(const std::string &scope, uint64_t seed, const std::string &golden_path) {
    static const std::vector<std::string> scopes{"all", "golden", "stabilizer", "noise", "resources"};
    if (std::find(scopes.begin(), scopes.end(), scope) == scopes.end()) {
        throw std::invalid_argument("unknown oracle scope '" + scope + "'");
    }
    auto want = [&](const char *s) { return scope == "all" || scope == s; };
    std::vector<CheckResult> out;
    if (want("golden")) out.push_back(check_golden_maps(golden_path));
    if (want("stabilizer")) {
        out.push_back(check_measurement_sequences(100, 6, seed));
        out.push_back(check_catalog_teleport(seed));
    }
    if (want("noise")) {
        out.push_back(check_noise_composition(100, seed));
        out.push_back(check_noise_moving(100, seed));
    }
    if (want("resources")) {
        out.push_back(check_cj_channels(50, 3, seed));
        out.push_back(check_merge_identities(5, seed));
    }
    return out;
}

std::string format_check(const CheckResult &c) {
    std::ostringstream out;
    out << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.cases << " cases, max difference "
        << std::setprecision(3) << c.max_difference;
    if (!c.passed) out << "; first failure: " << c.detail;
    return out.str();
}

// Subcommands.

namespace {

struct Emitter {
    const RunConfig &cfg;
    std::ostream &out;
    std::ofstream csv, js;

    explicit Emitter(const RunConfig &c, std::ostream &o) : cfg(c), out(o) {
        if (!cfg.csv_path.empty()) {
            csv.open(cfg.csv_path);
            if (!csv) throw std::runtime_error("cannot write '" + cfg.csv_path + "'");
            csv << kCsvHeader << "\n";
        }
        if (!cfg.json_path.empty()) {
            js.open(cfg.json_path);
            if (!js) throw std::runtime_error("cannot write '" + cfg.json_path + "'");
        }
        out << kCsvHeader << "\n";
    }

    void emit(ResultRecord r) {
        r.config_hash = cfg.hash();
        std::string row = to_csv_row(r);
        out << row << "\n";
        if (csv.is_open()) csv << row << "\n";
        if (js.is_open()) js << to_json_line(r) << "\n";
    }
};

std::string param_string(const RunConfig &cfg, const std::vector<std::string> &keys) {
    std::string s;
    for (const std::string &k : keys) {
        auto it = cfg.params.find(k);
        if (it == cfg.params.end()) continue;
        s += (s.empty() ? "" : ";") + k + "=" + it->second;
    }
    return s;
}

size_t shards_of(const RunConfig &cfg) { return cfg.shards ? cfg.shards : default_shards(); }

NoiseModel noise_of(const RunConfig &cfg) { return cfg.param_flag("ideal") ? NoiseModel{} : cfg.noise; }

int run_purify(const RunConfig &cfg, std::ostream &out, std::ostream &err) {
    double f = cfg.param_probability("F", 0.7);
    RecurrenceOptions o;
    o.rounds = cfg.param_size("rounds", 1);
    o.variant = parse_variant(cfg.param("variant", "dejmps"));
    o.mode = parse_mode(cfg.param("mode", "merged"));
    o.engine = parse_engine(cfg.param("engine", "labels"));
    o.seed = cfg.seed;
    NoiseModel noise = noise_of(cfg);
    BellDiagonalState input = BellDiagonalState::werner(f);
    ProtocolStats stats = run_sharded(cfg.samples, shards_of(cfg), [&](uint64_t first, uint64_t count) {
        RecurrenceOptions local = o;
        local.first_trajectory = first;
        local.samples = count;
        return purify_recurrence(input, noise, local);
    });
    Emitter em(cfg, out);
    em.emit(make_record("purify", param_string(cfg, {"F", "rounds", "variant", "mode", "engine", "ideal"}), noise, stats));
    if (o.mode == RecurrenceMode::Merged) {
        RecurrenceResult a = merged_recurrence_analytic(input, o.rounds, noise, o.variant);
        err << "analytic fidelity " << a.state.c[0] << ", sampled " << stats.fidelity() << " +- "
            << stats.fidelity_sigma() << "\n";
    }
    return 0;
}

int run_hashing(const RunConfig &cfg, std::ostream &out, std::ostream &err) {
    HashingEnsemble e;
    e.pairs = cfg.param_size("pairs", 16);
    e.pair = BellDiagonalState::werner(cfg.param_probability("F", 0.95));
    HashingOptions o;
    o.checks = cfg.param_size("checks", 4);
    o.seed = cfg.seed;
    ProtocolStats stats = run_sharded(cfg.samples, shards_of(cfg), [&](uint64_t first, uint64_t count) {
        HashingOptions local = o;
        local.first_trajectory = first;
        local.samples = count;
        return purify_hashing(e, cfg.noise, local);
    });
    Emitter em(cfg, out);
    em.emit(make_record("hashing", param_string(cfg, {"pairs", "F", "checks"}), cfg.noise, stats));
    err << "entropy yield of the noisy pair " << entropy_yield(hashing_pair(e, cfg.noise)) << "\n";
    return 0;
}

int run_qec(const RunConfig &cfg, std::ostream &out, std::ostream &err) {
    QecKit kit(catalog_code(cfg.param("code", "ring5"), cfg.param_size("size", 3)));
    if (cfg.param_flag("enumerate-errors")) {
        size_t total = 0, fixed = 0;
        Rng rng(cfg.seed, 10, 0);
        StabilizerState host = bell_pair_state(0);
        for (size_t q = 0; q < kit.code.n; ++q) {
            for (Pauli1 p : {Pauli1::X, Pauli1::Y, Pauli1::Z}) {
                ++total;
                CodeBlock b = qec_encode(kit, host, 1, NoiseModel{}, rng);
                apply_frame(b);
                b.state.apply_pauli(b.offset + q, p);
                DecodedQubit d = qec_decode(kit, b, NoiseModel{}, rng);
                d.state.apply_pauli(d.qubit, d.frame);
                bool ok = d.state.same_state(host);
                fixed += ok;
                if (!ok) err << "not corrected: " << pauli_char(p) << " on qubit " << q << "\n";
            }
        }
        out << kit.code.name << ": " << fixed << "/" << total << " single-qubit errors corrected\n";
        return fixed == total ? 0 : 1;
    }
    ChainConfig c;
    c.segments = 1;
    c.code = cfg.param("code", "ring5");
    c.code_size = cfg.param_size("size", 3);
    c.channel = PauliChannel::depolarizing(cfg.noise.q_channel);
    c.station = {cfg.noise.p_resource, cfg.noise.q_meas, 1};
    ChainResult r = encoded_chain(c, bell_pair_state(0), cfg.samples, cfg.seed);
    Emitter em(cfg, out);
    em.emit(make_record("qec", param_string(cfg, {"code", "size"}), cfg.noise, r.stats));
    EncodedAnalytic a = encoded_chain_analytic(kit.code, cfg.noise, 1);
    err << "logical parameter (moved noise, formula) " << a.per_step << ", unencoded " << a.unencoded << "\n";
    return 0;
}

ChainConfig chain_config(const RunConfig &cfg) {
    ChainConfig c;
    c.segments = cfg.param_size("segments", 3);
    c.code = cfg.param("code", "ring5");
    c.code_size = cfg.param_size("size", 3);
    c.channel = PauliChannel::depolarizing(cfg.param_probability("channel", cfg.noise.q_channel));
    c.station = {cfg.noise.p_resource, cfg.noise.q_meas, 1};
    c.correct_every_station = cfg.param_flag("per-station");
    return c;
}

int run_chain(const RunConfig &cfg, std::ostream &out, std::ostream &err) {
    ChainConfig c = chain_config(cfg);
    StabilizerState host = bell_pair_state(0);
    if (cfg.param_flag("trace")) {
        QecKit kit(catalog_code(c.code, c.code_size));
        Rng rng = seed_derive(cfg.seed, 3, 0);
        EncodedRun run = encoded_trajectory(kit, c, host, rng);
        err << run.frame.trace();
    }
    ProtocolStats stats = run_sharded(cfg.samples, shards_of(cfg), [&](uint64_t first, uint64_t count) {
        return encoded_chain(c, host, count, cfg.seed, first).stats;
    });
    stats.seed = cfg.seed;
    Emitter em(cfg, out);
    em.emit(make_record("chain", param_string(cfg, {"segments", "code", "size", "channel", "per-station"}), cfg.noise,
                        stats));
    return 0;
}

int run_repeater(const RunConfig &cfg, std::ostream &out, std::ostream &err) {
    ChainConfig c;
    c.segments = cfg.param_size("segments", 4);
    if (cfg.params.count("F")) c.elementary_fidelity = cfg.param_probability("F", 0.9);
    c.channel_q = cfg.param_probability("q", cfg.noise.q_channel);
    c.station = {cfg.noise.p_resource, cfg.noise.q_meas, 1};
    c.rounds = cfg.param_size("rounds", 1);
    if (cfg.params.count("target")) c.target_fidelity = cfg.param_probability("target", 0.99);
    c.max_rounds = cfg.param_size("max-rounds", 40);
    c.merged_stations = !cfg.param_flag("separate-stations");
    c.variant = parse_variant(cfg.param("variant", "dejmps"));
    ChainResult r = repeater_chain(c, cfg.samples, cfg.seed);
    ChainResult a = repeater_chain_analytic(c);
    Emitter em(cfg, out);
    ResultRecord rec = make_record("repeater",
                                   param_string(cfg, {"segments", "F", "q", "rounds", "target", "max-rounds",
                                                      "separate-stations", "variant"}),
                                   cfg.noise, r.stats);
    rec.p_success = 1;
    rec.yield = r.pairs_per_output > 0 ? 1 / r.pairs_per_output : 0;
    em.emit(rec);
    err << "level  fidelity  rounds  analytic\n";
    for (size_t l = 0; l < r.level_fidelity.size(); ++l) {
        err << l << "  " << r.level_fidelity[l] << "  " << r.level_rounds[l] << "  "
            << (l < a.level_fidelity.size() ? a.level_fidelity[l] : 0.0) << "\n";
    }
    if (r.failed_level) err << "failed at level " << *r.failed_level << "\n";
    err << "elementary pairs per output " << r.pairs_per_output << ", station resource size "
        << r.station_resource_size << " qubits\n";
    return r.failed_level ? 2 : 0;
}

json report_json(const ThresholdReport &r) {
    json j{{"formula", r.formula},   {"assumption", r.assumption}, {"feasible", r.feasible},
           {"analytic", r.analytic}, {"p_min", std::round(r.analytic * 1e6) / 1e6},
           {"noise_fraction", r.noise_fraction()}, {"binding", r.binding},
           {"note", r.note}};
    if (r.intermediate) j["intermediate"] = *r.intermediate;
    if (r.empirical) j["empirical"] = *r.empirical;
    if (r.empirical_interval) j["empirical_interval"] = {r.empirical_interval->lo, r.empirical_interval->hi};
    json checks = json::object();
    for (const auto &[k, v] : r.checks) checks[k] = v;
    j["checks"] = checks;
    j["version"] = kToolVersion;
    return j;
}

struct DetectorSpec {
    Detector detector;
    double lo, hi;
};

DetectorSpec detector_of(const RunConfig &cfg, const std::string &name) {
    uint64_t samples = cfg.samples, seed = cfg.seed;
    if (name == "epp") {
        EppSweepOptions o;
        o.samples = samples;
        o.seed = seed;
        o.max_rounds = cfg.param_size("rounds", 4);
        return {[o](double p) { return epp_detector(p, o); }, 0.70, 0.82};
    }
    if (name == "repeater") {
        RepeaterSweepOptions o;
        o.samples = samples;
        o.seed = seed;
        o.segments = cfg.param_size("segments", 4);
        return {[o](double p) { return repeater_detector(p, o); }, 0.70, 0.82};
    }
    if (name == "ring5") return {[=](double p) { return ring5_detector(p, samples, seed); }, 0.90, 0.98};
    if (name == "hashing") return {[=](double p) { return hashing_detector(p, samples, seed); }, 0.90, 0.96};
    throw std::invalid_argument("params.detector: unknown detector '" + name + "'");
}

SweepResult run_detector_sweep(const RunConfig &cfg, const std::string &name) {
    DetectorSpec d = detector_of(cfg, name);
    double lo = cfg.params.count("lo") ? to_double(cfg.param("lo", ""), "params.lo") : d.lo;
    double hi = cfg.params.count("hi") ? to_double(cfg.param("hi", ""), "params.hi") : d.hi;
    double tol = cfg.params.count("tol") ? to_double(cfg.param("tol", ""), "params.tol") : 1e-3;
    return sweep(d.detector, linear_grid(lo, hi, cfg.param_size("points", 7)), tol, shards_of(cfg));
}

int run_threshold(const RunConfig &cfg, std::ostream &out, std::ostream &) {
    std::string formula = cfg.param("formula", "universal-epp");
    std::string assume = cfg.param("assume", "q=p");
    ThresholdReport r;
    std::string detector;
    if (formula == "universal-epp") {
        std::optional<double> q;
        if (assume != "q=p") {
            if (assume.rfind("q=", 0) != 0) throw std::invalid_argument("params.assume: expected q=p or q=<value>");
            q = parse_probability(assume.substr(2), "params.assume");
        }
        r = universal_epp_threshold(q);
        if (!q) detector = "epp";
    } else if (formula == "hashing") {
        r = hashing_threshold();
        detector = "hashing";
    } else if (formula == "code") {
        ThresholdCode code = parse_threshold_code(cfg.param("code", "ring5"));
        CodeRegime regime = parse_code_regime(assume);
        r = code_threshold(code, regime);
        if (code == ThresholdCode::Ring5 && regime == CodeRegime::QEqualsP) detector = "ring5";
    } else if (formula == "dephasing-repetition") {
        r = dephasing_repetition_threshold();
    } else if (formula == "merged-rounds") {
        r = merged_round_threshold(cfg.param_size("rounds", 3), parse_variant(cfg.param("variant", "dejmps")));
    } else {
        throw std::invalid_argument("params.formula: unknown formula '" + formula + "'");
    }
    if (cfg.param_flag("empirical")) {
        if (detector.empty()) throw std::invalid_argument("params.empirical: no sweep for this formula");
        SweepResult s = run_detector_sweep(cfg, detector);
        r.empirical = s.estimate();
        r.empirical_interval = s.bracket;
        if (detector == "ring5") r.note = "sweep decodes by syndrome table, which also corrects some weight-3 errors";
        if (!s.monotone) r.note += (r.note.empty() ? "" : "; ") + std::string("detector response not monotone");
    }
    r.validate();
    out << r.table();
    out << report_json(r).dump() << "\n";
    return 0;
}

int run_sweep(const RunConfig &cfg, std::ostream &out, std::ostream &err) {
    std::string name = cfg.param("detector", "epp");
    SweepResult s;
    try {
        s = run_detector_sweep(cfg, name);
    } catch (const std::runtime_error &e) {
        err << name << ": " << e.what() << "\n";
        return 3;
    }
    if (!cfg.plot_path.empty()) {
        std::ofstream plot(cfg.plot_path);
        if (!plot) throw std::runtime_error("cannot write '" + cfg.plot_path + "'");
        write_sweep_csv(plot, s);
    } else {
        write_sweep_csv(out, s);
    }
    err << name << " boundary in [" << s.bracket.lo << ", " << s.bracket.hi << "], estimate " << s.estimate() << "\n";
    if (!s.monotone) {
        err << "detector response is not monotone on the grid\n";
        return 3;
    }
    return 0;
}

int run_oracle(const RunConfig &cfg, std::ostream &out, std::ostream &) {
    std::vector<CheckResult> checks =
        oracle_check(cfg.param("scope", "all"), cfg.seed, cfg.param("golden", default_golden_path()));
    bool ok = true;
    for (const CheckResult &c : checks) {
        out << format_check(c) << "\n";
        ok = ok && c.passed;
    }
    return ok ? 0 : 1;
}

}  // namespace

int run(const RunConfig &cfg, std::ostream &out, std::ostream &err) {
    cfg.validate();
    if (cfg.subcommand == "purify") return run_purify(cfg, out, err);
    if (cfg.subcommand == "hashing") return run_hashing(cfg, out, err);
    if (cfg.subcommand == "qec") return run_qec(cfg, out, err);
    if (cfg.subcommand == "chain") return run_chain(cfg, out, err);
    if (cfg.subcommand == "repeater") return run_repeater(cfg, out, err);
    if (cfg.subcommand == "threshold") return run_threshold(cfg, out, err);
    if (cfg.subcommand == "sweep") return run_sweep(cfg, out, err);
    return run_oracle(cfg, out, err);
}

}  // namespace mbqc
