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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "mbqc/bell_diagonal.h"
#include "mbqc/rng.h"

namespace mbqc {
namespace {

ResultRecord sample_record() {
    ResultRecord r;
    r.protocol = "purify";
    r.params = "F=0.7;rounds=2;note=\"a,b\"";
    r.noise = "p=0.99 q=0.98 q_channel=1";
    r.fidelity = 0.1 + 0.2;
    r.ci_lo = 1.0 / 3;
    r.ci_hi = std::nextafter(0.9, 1.0);
    r.p_success = 0.4567891234567;
    r.yield = 1e-17;
    r.samples = 123456789012ull;
    r.seed = ~uint64_t{0};
    r.config_hash = "00ff00ff00ff00ff";
    return r;
}

TEST(Records, CsvRoundTripIsLossless) {
    ResultRecord r = sample_record();
    std::string row = to_csv_row(r);
    EXPECT_EQ(from_csv_row(row), r);
    EXPECT_EQ(from_json_line(to_json_line(r)), r);
    // CSV through JSON and back.
    EXPECT_EQ(from_json_line(to_json_line(from_csv_row(row))), r);
    std::string header = kCsvHeader;
    EXPECT_EQ(std::count(header.begin(), header.end(), ','), 11);
}

TEST(Records, MalformedRowsRejected) {
    EXPECT_THROW(from_csv_row("a,b,c"), std::invalid_argument);
    std::string row = to_csv_row(sample_record());
    std::string bad = row;
    bad.replace(bad.find("0.30000000000000004"), 3, "x.3");
    EXPECT_THROW(from_csv_row(bad), std::invalid_argument);
    EXPECT_THROW(from_csv_row("\"open,b,c,d,e,f,g,h,i,j,k,l"), std::invalid_argument);
}

TEST(Records, MakeRecordCopiesStatistics) {
    ProtocolStats s;
    s.samples = 100;
    s.kept = 50;
    s.good = 40;
    s.consumed = 200;
    s.produced = 50;
    s.seed = 7;
    ResultRecord r = make_record("x", "", NoiseModel{0.9, 0.8, 1}, s);
    EXPECT_DOUBLE_EQ(r.fidelity, 0.8);
    EXPECT_DOUBLE_EQ(r.p_success, 0.5);
    EXPECT_DOUBLE_EQ(r.yield, 0.25);
    EXPECT_LT(r.ci_lo, 0.8);
    EXPECT_GT(r.ci_hi, 0.8);
    EXPECT_EQ(r.noise, NoiseModel({0.9, 0.8, 1}).str());
}

const char *kIni = R"([run]
subcommand = purify
samples = 5000
seed = 42

[noise]
p_resource = 0.99
q_meas = 0.98
q_channel = 1

[params]
F = 0.8
rounds = 2
)";

TEST(Config, LoadsAndHashesDeterministically) {
    std::istringstream a(kIni), b(kIni);
    RunConfig x = load_config(a), y = load_config(b);
    EXPECT_EQ(x.subcommand, "purify");
    EXPECT_EQ(x.samples, 5000u);
    EXPECT_EQ(x.seed, 42u);
    EXPECT_DOUBLE_EQ(x.noise.q_meas, 0.98);
    EXPECT_EQ(x.param("rounds", ""), "2");
    EXPECT_EQ(x.hash(), y.hash());
    EXPECT_EQ(x.hash().size(), 16u);
    // Output paths do not change results.
    y.csv_path = "elsewhere.csv";
    EXPECT_EQ(x.hash(), y.hash());
    y.params["rounds"] = "3";
    EXPECT_NE(x.hash(), y.hash());
    y = x;
    y.seed = 43;
    EXPECT_NE(x.hash(), y.hash());
}

void expect_error_mentions(const std::string &ini, const std::string &field) {
    std::istringstream in(ini);
    try {
        load_config(in);
        ADD_FAILURE() << "accepted: " << ini;
    } catch (const std::invalid_argument &e) {
        EXPECT_NE(std::string(e.what()).find(field), std::string::npos) << e.what();
    }
}

TEST(Config, FieldLevelErrors) {
    expect_error_mentions("[run]\nsubcommand = purify\n[noise]\np_resource = 95%\n", "noise.p_resource");
    expect_error_mentions("[run]\nsubcommand = purify\n[noise]\nq_meas = 1.2\n", "noise.q_meas");
    expect_error_mentions("[run]\nsubcommand = purify\nsamples = many\n", "run.samples");
    expect_error_mentions("[run]\nsubcommand = teleport\n", "run.subcommand");
    expect_error_mentions("[run]\nsubcommand = purify\ncolour = red\n", "run.colour");
    expect_error_mentions("[run]\nsubcommand = purify\n[params]\nF = 70%\n", "params.F");
    expect_error_mentions("[run]\nsubcommand = purify\n[extras]\na = 1\n", "extras");
    EXPECT_THROW(parse_probability("5%", "x"), std::invalid_argument);
    EXPECT_THROW(parse_probability("-0.1", "x"), std::invalid_argument);
    EXPECT_DOUBLE_EQ(parse_probability("0.95", "x"), 0.95);
}

TEST(Sharding, SeedDeriveHasNoCollisions) {
    std::unordered_set<uint64_t> seen;
    for (uint32_t shard = 0; shard < 100; ++shard) {
        for (uint64_t traj = 0; traj < 100; ++traj) seen.insert(stream_seed(7, shard, traj));
    }
    EXPECT_EQ(seen.size(), 10000u);
    Rng a = seed_derive(7, 3, 5), b = seed_derive(7, 3, 5);
    for (int i = 0; i < 10; ++i) EXPECT_EQ(a.next_u64(), b.next_u64());
}

TEST(Sharding, AggregatesIndependentOfShardCount) {
    BellDiagonalState in = BellDiagonalState::werner(0.75);
    NoiseModel noise{0.98, 0.99, 1};
    auto job_for = [&](Engine engine) {
        return [&, engine](uint64_t first, uint64_t count) {
            RecurrenceOptions o;
            o.rounds = 2;
            o.engine = engine;
            o.seed = 11;
            o.first_trajectory = first;
            o.samples = count;
            return purify_recurrence(in, noise, o);
        };
    };
    for (Engine e : {Engine::Labels, Engine::Stabilizer}) {
        uint64_t n = e == Engine::Labels ? 20000 : 600;
        ProtocolStats one = run_sharded(n, 1, job_for(e));
        for (size_t shards : {2, 3, 7}) {
            ProtocolStats many = run_sharded(n, shards, job_for(e));
            EXPECT_EQ(many.samples, one.samples);
            EXPECT_EQ(many.kept, one.kept);
            EXPECT_EQ(many.good, one.good);
            EXPECT_EQ(many.consumed, one.consumed);
            EXPECT_EQ(many.produced, one.produced);
        }
    }
}

TEST(Oracle, AllChecksPass) {
    for (const CheckResult &c : oracle_check("all", 5, default_golden_path())) {
        EXPECT_TRUE(c.passed) << format_check(c);
        EXPECT_GT(c.cases, 0u) << c.name;
    }
    EXPECT_THROW(oracle_check("everything", 5, default_golden_path()), std::invalid_argument);
}

TEST(Oracle, CorruptedGoldenFileDetected) {
    std::ifstream in(default_golden_path());
    std::stringstream text;
    text << in.rdbuf();
    std::string s = text.str();
    size_t at = s.find("\ndejmps ");
    ASSERT_NE(at, std::string::npos);
    size_t eol = s.find('\n', at + 1);
    std::string line = s.substr(at + 1, eol - at - 1);
    std::string changed = line.substr(0, line.rfind(' ')) + " 0.5";
    s.replace(at + 1, line.size(), changed);
    std::string path = ::testing::TempDir() + "corrupt_golden.txt";
    std::ofstream(path) << s;
    CheckResult r = check_golden_maps(path);
    EXPECT_FALSE(r.passed);
    EXPECT_NE(r.detail.find("file dejmps"), std::string::npos) << r.detail;
    EXPECT_FALSE(check_golden_maps(path + ".missing").passed);
    std::remove(path.c_str());
}

TEST(Run, PurifyIdealWithinThreeSigmaOfAnalytic) {
    RunConfig cfg;
    cfg.subcommand = "purify";
    cfg.params = {{"F", "0.7"}, {"rounds", "1"}, {"ideal", "true"}};
    cfg.samples = 20000;
    cfg.shards = 2;
    std::ostringstream out, err;
    ASSERT_EQ(run(cfg, out, err), 0);
    std::istringstream lines(out.str());
    std::string header, row;
    std::getline(lines, header);
    std::getline(lines, row);
    EXPECT_EQ(header, kCsvHeader);
    ResultRecord r = from_csv_row(row);
    EXPECT_EQ(r.config_hash, cfg.hash());
    // Werner input, one DEJMPS round: F' = (F^2 + w^2) / (F^2 + 2 F w + 5 w^2), w = (1 - F) / 3.
    double f = 0.7, w = 0.1;
    double oracle = (f * f + w * w) / (f * f + 2 * f * w + 5 * w * w);
    double sigma = std::sqrt(oracle * (1 - oracle) / (r.p_success * double(r.samples)));
    EXPECT_NEAR(r.fidelity, oracle, 3 * sigma);
}

TEST(Run, ReproducibleAndExitCodes) {
    RunConfig cfg;
    cfg.subcommand = "hashing";
    cfg.params = {{"pairs", "16"}, {"F", "0.97"}, {"checks", "4"}};
    cfg.samples = 2000;
    cfg.shards = 1;
    std::ostringstream a, b, err;
    ASSERT_EQ(run(cfg, a, err), 0);
    ASSERT_EQ(run(cfg, b, err), 0);
    EXPECT_EQ(a.str(), b.str());

    RunConfig qec;
    qec.subcommand = "qec";
    qec.params = {{"code", "ring5"}, {"enumerate-errors", "true"}};
    std::ostringstream out;
    EXPECT_EQ(run(qec, out, err), 0);
    EXPECT_NE(out.str().find("15/15"), std::string::npos);

    RunConfig th;
    th.subcommand = "threshold";
    th.params = {{"formula", "universal-epp"}, {"assume", "q=p"}};
    std::ostringstream t;
    EXPECT_EQ(run(th, t, err), 0);
    EXPECT_NE(t.str().find("0.759836"), std::string::npos);

    RunConfig bad = th;
    bad.subcommand = "teleport";
    EXPECT_THROW(run(bad, out, err), std::invalid_argument);
}

}  // namespace
}  // namespace mbqc
