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

#ifndef MBQC_HARNESS_H
#define MBQC_HARNESS_H

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "mbqc/noise.h"
#include "mbqc/protocols.h"

namespace mbqc {

inline constexpr const char *kToolVersion = "0.1.0";
/// Schema 1 of the result rows.
inline constexpr const char *kCsvHeader =
    "protocol,params,noise,fidelity,ci_lo,ci_hi,p_success,yield,samples,seed,config_hash,version";

struct ResultRecord {
    std::string protocol;
    std::string params;  // k=v;k=v
    std::string noise;
    double fidelity = 0;
    double ci_lo = 0;
    double ci_hi = 0;
    double p_success = 0;
    double yield = 0;
    uint64_t samples = 0;
    uint64_t seed = 0;
    std::string config_hash;
    std::string version = kToolVersion;

    bool operator==(const ResultRecord &) const = default;
};

std::string to_csv_row(const ResultRecord &r);
/// Throws std::invalid_argument on a malformed row.
ResultRecord from_csv_row(const std::string &line);
std::string to_json_line(const ResultRecord &r);
ResultRecord from_json_line(const std::string &line);

/// Fills the statistics fields from a run.
ResultRecord make_record(const std::string &protocol, const std::string &params, const NoiseModel &noise,
                         const ProtocolStats &stats);

/// One run of the tool. Protocol parameters live in `params` as text so
/// that command-line flags and config files share one path.
struct RunConfig {
    std::string subcommand;
    std::map<std::string, std::string> params;
    NoiseModel noise;
    uint64_t samples = 10000;
    uint64_t seed = 1;
    size_t shards = 0;  // 0: default_shards()
    std::string csv_path, json_path, plot_path;

    /// Everything that can change the results, in a fixed order.
    std::string canonical() const;
    /// 16 hex digits of FNV-1a over canonical().
    std::string hash() const;
    void validate() const;

    std::string param(const std::string &key, const std::string &fallback) const;
    double param_probability(const std::string &key, double fallback) const;
    size_t param_size(const std::string &key, size_t fallback) const;
    bool param_flag(const std::string &key) const;
};

/// Sections [run] (subcommand, samples, seed, shards), [noise] (p_resource,
/// q_meas, q_channel), [params] and [output] (csv, json, plot). Errors name
/// the offending field.
RunConfig load_config(std::istream &in);
RunConfig load_config_file(const std::string &path);
/// Strict probability parse: rejects percent signs and values outside
/// [0, 1].
double parse_probability(const std::string &text, const std::string &field);

/// MBQC_SHARDS if set, else the hardware concurrency.
size_t default_shards();

/// Splits trajectories 0 .. samples - 1 into contiguous shards, runs them on
/// threads and merges in shard order. `job(first, count)` must simulate
/// exactly those global trajectory indices.
ProtocolStats run_sharded(uint64_t samples, size_t shards,
                          const std::function<ProtocolStats(uint64_t first, uint64_t count)> &job);

// Oracle checks.

struct CheckResult {
    std::string name;
    bool passed = true;
    size_t cases = 0;
    double max_difference = 0;
    std::string detail;  // first failing instance
};

/// Regenerates the recurrence and swap maps and compares them with the
/// embedded tables and the golden file.
CheckResult check_golden_maps(const std::string &path);
/// Random stabilizer states and Pauli/Bell measurement sequences on up to
/// max_qubits qubits: outcome probabilities and post-measurement states
/// against the dense engine.
CheckResult check_measurement_sequences(size_t trials, size_t max_qubits, uint64_t seed, double tol = 1e-12);
/// Every small catalog resource: each dense teleportation branch against
/// the stabilizer engine forced to the same outcomes.
CheckResult check_catalog_teleport(uint64_t seed, double tol = 1e-12);
/// E(p1) E(p2) = E(p1 p2) on transfer matrices.
CheckResult check_noise_composition(size_t trials, uint64_t seed, double tol = 1e-12);
/// Moving a Pauli channel across a Bell measurement on random 3-qubit
/// dense states, all four outcomes.
CheckResult check_noise_moving(size_t trials, uint64_t seed, double tol = 1e-12);
/// cj(C) teleportation with frame corrections equals C for random
/// Cliffords on up to max_qubits qubits (with a reference system).
CheckResult check_cj_channels(size_t trials, size_t max_qubits, uint64_t seed, double tol = 1e-10);
/// Merge associativity on random 2-qubit Cliffords and
/// merge(encode, decode) as the identity for repetition(3) and ring5.
CheckResult check_merge_identities(size_t trials, uint64_t seed, double tol = 1e-10);

/// Scope all, golden, stabilizer, noise or resources.
std::vector<CheckResult> oracle_check(const std::string &scope, uint64_t seed, const std::string &golden_path);
std::string format_check(const CheckResult &c);

/// Runs a subcommand. Rows go to stdout (CSV) and the configured files;
/// human-readable notes go to `err`. Returns the exit status.
int run(const RunConfig &cfg, std::ostream &out, std::ostream &err);

}  // namespace mbqc

#endif
