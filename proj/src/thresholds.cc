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

#include "mbqc/thresholds.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "mbqc/netsim.h"
#include "mbqc/noise.h"
#include "mbqc/resources.h"

namespace mbqc {

namespace {

std::string fmt(double v, int digits = 6) {
    std::ostringstream out;
    out << std::fixed << std::setprecision(digits) << v;
    return out.str();
}

bool in_unit(double v) { return v >= 0 && v <= 1 && !std::isnan(v); }

}  // namespace

void ThresholdReport::validate() const {
    auto check = [](double v, const std::string &what) {
        if (!in_unit(v)) throw std::logic_error("threshold value " + what + " outside [0, 1]");
    };
    check(analytic, "analytic");
    if (intermediate) check(*intermediate, "intermediate");
    if (empirical) check(*empirical, "empirical");
    if (empirical_interval) {
        check(empirical_interval->lo, "interval");
        check(empirical_interval->hi, "interval");
    }
}

std::string ThresholdReport::table() const {
    std::ostringstream out;
    out << std::left;
    auto row = [&](const std::string &k, const std::string &v) { out << std::setw(14) << k << v << "\n"; };
    row("formula", formula);
    row("assumption", assumption);
    row("feasible", feasible ? "yes" : "no");
    if (feasible) {
        row("p_min", fmt(analytic));
        row("noise", fmt(100 * noise_fraction(), 2) + "%");
    }
    if (intermediate) row("constant", fmt(*intermediate));
    if (empirical) row("empirical", fmt(*empirical));
    if (empirical_interval) row("bracket", "[" + fmt(empirical_interval->lo) + ", " + fmt(empirical_interval->hi) + "]");
    if (!binding.empty()) row("binding", binding);
    for (const auto &[k, v] : checks) row(k, fmt(v));
    if (!note.empty()) row("note", note);
    return out.str();
}

ThresholdReport universal_epp_threshold(std::optional<double> q_fixed) {
    ThresholdReport r;
    r.formula = "universal-epp";
    if (!q_fixed) {
        r.assumption = "q=p";
        r.analytic = std::pow(3.0, -0.25);
        r.binding = "q^2 p^2 > 1/3";
        r.note = "p^2 >= q^2 holds with equality";
        return r;
    }
    double q = *q_fixed;
    check_probability(q, "q");
    r.assumption = "q=" + fmt(q, 4);
    if (q * q <= 1.0 / 3) {
        r.feasible = false;
        r.analytic = 1;
        r.binding = "q^2 p^2 > 1/3";
        r.note = "no p <= 1 makes the channel pair distillable";
        return r;
    }
    double entangled = 1 / (std::sqrt(3.0) * q);
    if (entangled > q) {
        r.analytic = entangled;
        r.binding = "q^2 p^2 > 1/3";
    } else {
        r.analytic = q;
        r.binding = "p^2 >= q^2";
    }
    return r;
}

ThresholdReport hashing_threshold() {
    ThresholdReport r;
    r.formula = "hashing";
    r.assumption = "q=p";
    r.intermediate = kHashingMinFidelity;
    r.analytic = std::pow((4 * kHashingMinFidelity - 1) / 3, 0.25);
    r.binding = "(3 q^2 p^2 + 1) / 4 >= F_min";
    r.checks.push_back({"yield(F_min)", entropy_yield(BellDiagonalState::werner(kHashingMinFidelity))});
    return r;
}

ThresholdCode parse_threshold_code(const std::string &name) {
    if (name == "ring5") return ThresholdCode::Ring5;
    if (name == "shor" || name == "shor-type") return ThresholdCode::ShorType;
    throw std::invalid_argument("unknown threshold code '" + name + "'");
}

CodeRegime parse_code_regime(const std::string &name) {
    if (name == "q=p") return CodeRegime::QEqualsP;
    if (name == "q~1" || name == "q=1") return CodeRegime::QNear1;
    throw std::invalid_argument("unknown regime '" + name + "' (q=p or q~1)");
}

double code_crossing(const CodeSpec &code, double lo, double hi, double tol) {
    auto gap = [&](double x) { return logical_error_rate(code, x) - x; };
    double glo = gap(lo), ghi = gap(hi);
    if (!(glo < 0 && ghi > 0)) throw std::runtime_error("no crossing of the logical error curve in the interval");
    while (hi - lo > tol) {
        double mid = 0.5 * (lo + hi);
        (gap(mid) > 0 ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
}

ThresholdReport code_threshold(ThresholdCode code, CodeRegime regime) {
    ThresholdReport r;
    r.formula = code == ThresholdCode::Ring5 ? "code:ring5" : "code:shor-type";
    r.assumption = regime == CodeRegime::QEqualsP ? "q=p" : "q~1";
    double crossing = code == ThresholdCode::Ring5 ? code_crossing(CodeSpec::ring5()) : kShorTypeCrossing;
    r.intermediate = crossing;
    if (regime == CodeRegime::QEqualsP) {
        r.analytic = std::cbrt(crossing);
        r.binding = "p^2 q >= p_tilde*";
    } else {
        r.analytic = std::sqrt(crossing);
        r.binding = "p^2 >= p_tilde*";
    }
    if (code == ThresholdCode::ShorType) {
        r.note = "crossing is a fixed constant";
        if (regime == CodeRegime::QNear1) {
            r.note += "; the printed relation p_crit = p_tilde is read as p_crit = sqrt(p_tilde), which gives 0.8631";
        }
    }
    return r;
}

ThresholdReport dephasing_repetition_threshold() {
    ThresholdReport r;
    r.formula = "dephasing-repetition";
    r.assumption = "ideal resources";
    r.analytic = 0.5;
    r.binding = "flip probability < 1/2";
    r.note = "asymptotic in the code size";
    for (double e : {0.4, 0.6}) {
        for (size_t m : {3, 5, 7, 9}) {
            r.checks.push_back({"P_L(m=" + std::to_string(m) + ",e=" + fmt(e, 1) + ")", repetition_logical_error(m, e)});
        }
    }
    return r;
}

double merged_round_gain(size_t rounds, double p, RecurrenceVariant variant) {
    NoiseModel noise{p, 1, 1};
    auto gain = [&](double f) {
        return merged_recurrence_analytic(BellDiagonalState::werner(f), rounds, noise, variant).state.c[0] - f;
    };
    const size_t grid = 400;
    double best = -1, best_f = 0.5;
    for (size_t i = 0; i <= grid; ++i) {
        double f = 0.5 + 0.5 * double(i) / double(grid);
        double g = gain(f);
        if (g > best) {
            best = g;
            best_f = f;
        }
    }
    // Golden-section refinement around the best grid point.
    double a = std::max(0.5, best_f - 0.5 / grid), b = std::min(1.0, best_f + 0.5 / grid);
    const double phi = (std::sqrt(5.0) - 1) / 2;
    for (int it = 0; it < 80; ++it) {
        double c = b - phi * (b - a), d = a + phi * (b - a);
        if (gain(c) > gain(d)) {
            b = d;
        } else {
            a = c;
        }
    }
    return std::max(best, gain(0.5 * (a + b)));
}

ThresholdReport merged_round_threshold(size_t rounds, RecurrenceVariant variant) {
    if (rounds == 0) throw std::invalid_argument("merged rounds must be positive");
    ThresholdReport r;
    r.formula = "merged-rounds";
    r.assumption = "resource noise only, m=" + std::to_string(rounds) + ", " + variant_name(variant);
    double lo = 0.5, hi = 1;
    if (merged_round_gain(rounds, lo, variant) > 0) throw std::runtime_error("merged rounds gain even at p = 1/2");
    while (hi - lo > 1e-7) {
        double mid = 0.5 * (lo + hi);
        (merged_round_gain(rounds, mid, variant) > 1e-13 ? hi : lo) = mid;
    }
    r.analytic = hi;
    r.binding = "max_F F_out - F > 0";
    return r;
}

// Sweeps.

std::vector<double> linear_grid(double lo, double hi, size_t points) {
    if (points < 2 || !(hi > lo)) throw std::invalid_argument("grid needs two or more points on lo < hi");
    std::vector<double> g(points);
    for (size_t i = 0; i < points; ++i) g[i] = lo + (hi - lo) * double(i) / double(points - 1);
    return g;
}

SweepResult sweep(const Detector &detector, const std::vector<double> &grid, double tol, size_t threads) {
    if (grid.size() < 2 || !std::is_sorted(grid.begin(), grid.end())) throw std::invalid_argument("grid must be sorted");
    SweepResult out;
    out.points.resize(grid.size());
    threads = std::clamp<size_t>(threads, 1, grid.size());
    std::vector<std::thread> pool;
    for (size_t t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
            for (size_t i = t; i < grid.size(); i += threads) out.points[i] = detector(grid[i]);
        });
    }
    for (std::thread &th : pool) th.join();

    std::optional<size_t> first_inside;
    for (size_t i = 0; i < grid.size(); ++i) {
        if (out.points[i].inside && !first_inside) first_inside = i;
        if (first_inside && !out.points[i].inside) out.monotone = false;
    }
    if (!first_inside || *first_inside == 0) throw std::runtime_error("grid does not bracket the regime boundary");
    double lo = grid[*first_inside - 1], hi = grid[*first_inside];
    while (hi - lo > tol) {
        double mid = 0.5 * (lo + hi);
        SweepPoint p = detector(mid);
        out.points.push_back(p);
        (p.inside ? hi : lo) = mid;
    }
    out.bracket = {lo, hi};
    return out;
}

void write_sweep_csv(std::ostream &out, const SweepResult &result) {
    out << "x,y,err,inside\n";
    out << std::setprecision(10);
    for (const SweepPoint &p : result.points) out << p.x << "," << p.value << "," << p.error << "," << p.inside << "\n";
}

bool output_noise_condition(double p, double q, uint64_t samples, uint64_t seed) {
    check_probability(p, "p");
    check_probability(q, "q");
    Rng rng = seed_derive(seed, 6, 0);
    uint64_t good_p = 0, good_q = 0;
    for (uint64_t s = 0; s < samples; ++s) {
        int lp = 0, lq = 0;
        for (int end = 0; end < 2; ++end) {
            double u = rng.uniform();
            int label = int(rng.below(4));
            if (u >= p) lp ^= label;
            if (u >= q) lq ^= label;
        }
        good_p += lp == 0;
        good_q += lq == 0;
    }
    return good_p >= good_q;
}

namespace {

// One output of an m-round recurrence tree, built from fresh pairs with the
// rounds retried until they succeed. Conditioned on success this has the
// output distribution of the merged protocol.
int tree_label(size_t level, const BellDiagonalState &pair, double p, const LabelTable &table, bool twirl,
               Rng &rng) {
    if (level == 0) {
        int l = sample_bell_index(pair, rng);
        return l ^ bell_index(depolarize_sample(p, rng)) ^ bell_index(depolarize_sample(p, rng));
    }
    for (;;) {
        int a = tree_label(level - 1, pair, p, table, twirl, rng);
        int b = tree_label(level - 1, pair, p, table, twirl, rng);
        if (twirl) {
            if (a != 0) a = 1 + int(rng.below(3));
            if (b != 0) b = 1 + int(rng.below(3));
        }
        int k = table[size_t(a)][size_t(b)];
        if (k >= 0) return k;
    }
}

}  // namespace

SweepPoint epp_detector(double p, const EppSweepOptions &options) {
    double q = options.q_fixed.value_or(p);
    BellDiagonalState pair = BellDiagonalState::from_depolarizing(q * q);
    const LabelTable &table = recurrence_label_table(options.variant);
    bool twirl = options.variant == RecurrenceVariant::BBPSSW;
    SweepPoint pt{p, 0, 0, false};
    bool distilled = false;
    for (size_t m = 1; m <= options.max_rounds; ++m) {
        Rng rng = seed_derive(options.seed, 5, m);
        uint64_t good = 0;
        for (uint64_t s = 0; s < options.samples; ++s) good += tree_label(m, pair, p, table, twirl, rng) == 0;
        double f = double(good) / double(options.samples);
        double sigma = std::sqrt(std::max(f * (1 - f), 1e-300) / double(options.samples));
        if (f > pt.value) {
            pt.value = f;
            pt.error = sigma;
        }
        if (f > 0.5 + options.z * sigma) distilled = true;
    }
    pt.inside = distilled && output_noise_condition(p, q, options.samples, options.seed);
    return pt;
}

SweepPoint repeater_detector(double p, const RepeaterSweepOptions &options) {
    double q = options.q_fixed.value_or(p);
    ChainConfig cfg;
    cfg.segments = options.segments;
    cfg.channel_q = q;
    cfg.station = {p, 1, 1};
    cfg.target_fidelity = options.target;
    cfg.max_rounds = options.max_rounds;
    ChainResult r = repeater_chain(cfg, options.samples, options.seed);
    SweepPoint pt{p, r.stats.fidelity(), r.stats.fidelity_sigma(), false};
    pt.inside = !r.failed_level && output_noise_condition(p, q, options.samples, options.seed);
    return pt;
}

SweepPoint ring5_detector(double p, uint64_t samples, uint64_t seed) {
    static const CodeSpec ring = CodeSpec::ring5();
    double p_tilde = p * p * p;
    Rng rng = seed_derive(seed, 7, 0);
    uint64_t good = 0;
    for (uint64_t s = 0; s < samples; ++s) {
        PauliString e(ring.n);
        for (size_t k = 0; k < ring.n; ++k) e.set(k, depolarize_sample(p_tilde, rng));
        PauliString residual = multiply(e, ring.correction(ring.syndrome(e)));
        good += ring.logical_action(residual) == Pauli1::I;
    }
    double f = double(good) / double(samples);
    double p_l = (4 * f - 1) / 3;
    double sigma = 4.0 / 3 * std::sqrt(std::max(f * (1 - f), 1e-300) / double(samples));
    return {p, p_l, sigma, p_l > p_tilde};
}

SweepPoint hashing_detector(double p, uint64_t samples, uint64_t seed) {
    Rng rng = seed_derive(seed, 8, 0);
    BellDiagonalState pair = BellDiagonalState::from_depolarizing(p * p * p * p);
    std::array<uint64_t, 4> counts{};
    for (uint64_t s = 0; s < samples; ++s) ++counts[size_t(sample_bell_index(pair, rng))];
    double entropy = 0, second = 0;
    for (uint64_t c : counts) {
        if (c == 0) continue;
        double f = double(c) / double(samples);
        entropy -= f * std::log2(f);
        second += f * std::log2(f) * std::log2(f);
    }
    double sigma = std::sqrt(std::max(second - entropy * entropy, 0.0) / double(samples));
    double yield = 1 - entropy;
    return {p, yield, sigma, yield > 0};
}

}  // namespace mbqc
