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

#ifndef MBQC_THRESHOLDS_H
#define MBQC_THRESHOLDS_H

#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "mbqc/bell_diagonal.h"
#include "mbqc/protocols.h"

namespace mbqc {

/// Threshold on the resource parameter p (the fraction of noise tolerated
/// per particle is 1 - p).
struct ThresholdReport {
    std::string formula;     // universal-epp, hashing, code, dephasing-repetition, merged-rounds
    std::string assumption;  // q=p, q=<value>, q~1
    bool feasible = true;
    double analytic = 0;
    /// Intermediate constant of the formula (F_min, p_tilde*), if any.
    std::optional<double> intermediate;
    std::optional<double> empirical;
    std::optional<Interval> empirical_interval;
    std::string binding;  // constraint that fixes the value
    std::string note;
    /// Named cross-checks.
    std::vector<std::pair<std::string, double>> checks;

    double noise_fraction() const { return 1 - analytic; }
    /// Throws std::logic_error unless every value lies in [0, 1].
    void validate() const;
    /// Human-readable table.
    std::string table() const;
};

/// Solves q^2 p^2 > 1/3 and p^2 >= q^2. Without q_fixed, q = p and the
/// result is 3^(-1/4).
ThresholdReport universal_epp_threshold(std::optional<double> q_fixed = std::nullopt);

inline constexpr double kHashingMinFidelity = 0.8107;
/// (3 p^4 + 1) / 4 >= F_min with q = p.
ThresholdReport hashing_threshold();

enum class ThresholdCode { Ring5, ShorType };
enum class CodeRegime { QEqualsP, QNear1 };
ThresholdCode parse_threshold_code(const std::string &name);
CodeRegime parse_code_regime(const std::string &name);

inline constexpr double kShorTypeCrossing = 0.7449;
/// Crossing p_L(p_tilde) = p_tilde, then p_crit = p_tilde^(1/3) (q = p) or
/// p_tilde^(1/2) (q ~ 1). The Shor-type crossing is a fixed constant.
ThresholdReport code_threshold(ThresholdCode code, CodeRegime regime);
/// Root of logical_error_rate(code, x) = x in (lo, hi) by bisection.
double code_crossing(const CodeSpec &code, double lo = 0.5, double hi = 0.999, double tol = 1e-12);

/// Phase-flip repetition under dephasing: flip probabilities below 1/2 are
/// suppressed by majority vote as m grows.
ThresholdReport dephasing_repetition_threshold();

/// Largest noise 1 - p for which some input fidelity gains from m merged
/// rounds, with resource noise p and perfect measurements.
ThresholdReport merged_round_threshold(size_t rounds, RecurrenceVariant variant = RecurrenceVariant::DEJMPS);
/// max over F of F_out - F for m merged rounds at resource parameter p.
double merged_round_gain(size_t rounds, double p, RecurrenceVariant variant = RecurrenceVariant::DEJMPS);

// Sweeps.

struct SweepPoint {
    double x = 0;
    double value = 0;
    double error = 0;
    bool inside = false;  // regime nonempty
};

using Detector = std::function<SweepPoint(double)>;

struct SweepResult {
    Interval bracket;  // boundary lies in [lo, hi]
    std::vector<SweepPoint> points;
    bool monotone = true;
    double estimate() const { return 0.5 * (bracket.lo + bracket.hi); }
};

/// Evaluates the grid, checks that `inside` switches once (from outside at
/// low x to inside at high x), then bisects the switching cell down to tol.
/// Throws std::runtime_error when the grid does not bracket a boundary.
SweepResult sweep(const Detector &detector, const std::vector<double> &grid, double tol, size_t threads = 1);
std::vector<double> linear_grid(double lo, double hi, size_t points);
/// x,y,err,inside rows in evaluation order.
void write_sweep_csv(std::ostream &out, const SweepResult &result);

/// Common-random-number check of p^2 >= q^2: the same draws depolarize a
/// perfect pair with E(p) and with E(q) on both ends.
bool output_noise_condition(double p, double q, uint64_t samples, uint64_t seed);

struct EppSweepOptions {
    std::optional<double> q_fixed;  // q = p when empty
    size_t max_rounds = 4;
    uint64_t samples = 100000;
    uint64_t seed = 1;
    double z = 3;
    RecurrenceVariant variant = RecurrenceVariant::DEJMPS;
};
/// Independent samples of m-round recurrence trees (m = 1 .. max_rounds)
/// on E(q^2) pairs with E(p) moved onto both ends. Inside when some m gives
/// F > 1/2 + z sigma and the output condition holds.
SweepPoint epp_detector(double p, const EppSweepOptions &options);

struct RepeaterSweepOptions {
    std::optional<double> q_fixed;
    size_t segments = 4;
    double target = 0.995;
    size_t max_rounds = 40;
    uint64_t samples = 100000;
    uint64_t seed = 1;
};
/// Nested repeater on populations; inside when every level reaches the
/// target and the output condition holds.
SweepPoint repeater_detector(double p, const RepeaterSweepOptions &options);

/// Ring code with q = p: i.i.d. E(p^3) errors on five qubits, table
/// decoding; inside when the sampled logical parameter exceeds p^3.
SweepPoint ring5_detector(double p, uint64_t samples, uint64_t seed);

/// Plug-in entropy of sampled noise-moved pairs (q = p); inside when the
/// estimated yield is positive.
SweepPoint hashing_detector(double p, uint64_t samples, uint64_t seed);

}  // namespace mbqc

#endif
