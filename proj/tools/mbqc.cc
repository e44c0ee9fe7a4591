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

// Command-line front end: flags and an optional INI file fill one RunConfig.

#include <CLI11.hpp>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mbqc/harness.h"

namespace {

struct Param {
    const char *key;
    bool flag;
    const char *help;
};

const std::map<std::string, std::vector<Param>> &subcommands() {
    static const std::map<std::string, std::vector<Param>> table{
        {"purify",
         {{"F", false, "Werner fidelity of the input pairs"},
          {"rounds", false, "recurrence rounds"},
          {"variant", false, "dejmps or bbpssw"},
          {"mode", false, "merged or stepwise"},
          {"engine", false, "labels or stabilizer"},
          {"ideal", true, "noiseless resources and measurements"}}},
        {"hashing",
         {{"pairs", false, "ensemble size"},
          {"F", false, "Werner fidelity per pair"},
          {"checks", false, "parity checks (at most 8)"}}},
        {"qec",
         {{"code", false, "repetition, phase_repetition or ring5"},
          {"size", false, "repetition length"},
          {"enumerate-errors", true, "push every single-qubit error through encode and decode"}}},
        {"chain",
         {{"segments", false, "channel segments"},
          {"code", false, "code name"},
          {"size", false, "repetition length"},
          {"channel", false, "depolarizing parameter per segment"},
          {"per-station", true, "apply corrections at every station"},
          {"trace", true, "print the per-station log of one trajectory"}}},
        {"repeater",
         {{"segments", false, "elementary segments (power of two)"},
          {"F", false, "elementary fidelity (default from q)"},
          {"q", false, "channel parameter"},
          {"rounds", false, "fixed rounds per level"},
          {"target", false, "purify each level to this fidelity"},
          {"max-rounds", false, "cap on adaptive rounds"},
          {"separate-stations", true, "purify and connect with separate resources"},
          {"variant", false, "dejmps or bbpssw"}}},
        {"threshold",
         {{"formula", false, "universal-epp, hashing, code, dephasing-repetition, merged-rounds"},
          {"assume", false, "q=p, q=<value> or q~1"},
          {"code", false, "ring5 or shor-type"},
          {"rounds", false, "merged rounds"},
          {"variant", false, "dejmps or bbpssw"},
          {"empirical", true, "add a Monte Carlo sweep"},
          {"lo", false, "sweep grid start"},
          {"hi", false, "sweep grid end"},
          {"points", false, "sweep grid points"},
          {"tol", false, "bisection tolerance"}}},
        {"sweep",
         {{"detector", false, "epp, repeater, ring5 or hashing"},
          {"lo", false, "grid start"},
          {"hi", false, "grid end"},
          {"points", false, "grid points"},
          {"tol", false, "bisection tolerance"},
          {"rounds", false, "maximum recurrence rounds (epp)"},
          {"segments", false, "repeater segments"}}},
        {"oracle-check",
         {{"scope", false, "all, golden, stabilizer, noise or resources"},
          {"golden", false, "golden map file"}}},
    };
    return table;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Measurement-based quantum communication simulator", "mbqc"};
    app.set_version_flag("--version", mbqc::kToolVersion);
    app.require_subcommand(1);

    std::string config_path;
    std::optional<uint64_t> samples, seed;
    std::optional<size_t> shards;
    std::optional<std::string> p, q_meas, q_channel, csv, json, plot;
    app.add_option("--config", config_path, "INI file with [run], [noise], [params] and [output] sections");
    app.add_option("--samples", samples, "trajectories");
    app.add_option("--seed", seed, "master seed");
    app.add_option("--shards", shards, "worker threads (default MBQC_SHARDS or the core count)");
    app.add_option("--p", p, "resource parameter p");
    app.add_option("--q-meas", q_meas, "measurement parameter q");
    app.add_option("--q-channel", q_channel, "channel parameter");
    app.add_option("--csv", csv, "append result rows to this file");
    app.add_option("--json", json, "write JSON records to this file");
    app.add_option("--plot", plot, "sweep plot data (x,y,err,inside)");

    std::map<std::string, std::map<std::string, std::string>> values;
    std::map<std::string, std::map<std::string, bool>> flags;
    for (const auto &[name, params] : subcommands()) {
        CLI::App *sub = app.add_subcommand(name);
        sub->fallthrough();
        for (const Param &prm : params) {
            std::string opt = "--" + std::string(prm.key);
            if (prm.flag) {
                sub->add_flag(opt, flags[name][prm.key], prm.help);
            } else {
                sub->add_option(opt, values[name][prm.key], prm.help);
            }
        }
    }

    CLI11_PARSE(app, argc, argv);

    try {
        mbqc::RunConfig cfg;
        if (!config_path.empty()) cfg = mbqc::load_config_file(config_path);
        CLI::App *chosen = app.get_subcommands().front();
        cfg.subcommand = chosen->get_name();
        for (const Param &prm : subcommands().at(cfg.subcommand)) {
            std::string opt = "--" + std::string(prm.key);
            if (chosen->count(opt) == 0) continue;
            if (prm.flag) {
                cfg.params[prm.key] = "true";
            } else {
                const std::string &v = values[cfg.subcommand][prm.key];
                if (v.find('%') != std::string::npos) {
                    throw std::invalid_argument(opt + ": percent values are not accepted, give a probability in [0, 1]");
                }
                cfg.params[prm.key] = v;
            }
        }
        if (samples) cfg.samples = *samples;
        if (seed) cfg.seed = *seed;
        if (shards) cfg.shards = *shards;
        if (p) cfg.noise.p_resource = mbqc::parse_probability(*p, "--p");
        if (q_meas) cfg.noise.q_meas = mbqc::parse_probability(*q_meas, "--q-meas");
        if (q_channel) cfg.noise.q_channel = mbqc::parse_probability(*q_channel, "--q-channel");
        if (csv) cfg.csv_path = *csv;
        if (json) cfg.json_path = *json;
        if (plot) cfg.plot_path = *plot;
        return mbqc::run(cfg, std::cout, std::cerr);
    } catch (const std::exception &e) {
        std::cerr << "mbqc: " << e.what() << "\n";
        return 64;
    }
}
