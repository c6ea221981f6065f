// Copyright 2026 The clocksim Authors
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

#ifndef CLOCKSIM_METROLOGY_H
#define CLOCKSIM_METROLOGY_H

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "clocksim/clockwork.h"

namespace clocksim {

enum class FailureMode : uint8_t { UniformFullRange, AdversarialOffset };

std::string_view failure_mode_name(FailureMode mode);
/// Accepts "uniform_full_range" and "adversarial_offset".
FailureMode parse_failure_mode(std::string_view name);

/// Accuracy-limited measurement of an eigenvalue. With probability
/// `success_prob` the outcome is the true eigenvalue plus uniform noise in
/// [-delta, delta]; otherwise the failure mode picks the outcome.
struct AccuracyModel {
    double delta = 0.0;
    double success_prob = 0.75;
    FailureMode failure_mode = FailureMode::UniformFullRange;

    /// Throws std::invalid_argument unless delta >= 0 and success_prob in [3/4, 1].
    void validate() const;
};

using Rng = std::mt19937_64;

/// splitmix64 of (master, index): independent per-batch seeds, so serial and
/// parallel generation produce identical batches.
uint64_t split_seed(uint64_t master, uint64_t index);

/// Index j of the drawn eigenvalue cos(2 pi j / d), with probability 1/d for
/// j = 0 and j = d/2 and 2/d otherwise.
uint64_t sample_exact_index(const SpectralModel &model, Rng &rng);
double sample_exact(const SpectralModel &model, Rng &rng);

struct MeasuredValue {
    double value;
    double true_value;
    uint64_t true_j;
    bool success_branch;
};

/// Draws the true eigenvalue first, then applies the accuracy model.
MeasuredValue sample_with_accuracy(const AccuracyModel &accuracy, const SpectralModel &model, Rng &rng);

struct RoundedOutcome {
    int64_t j;
    int parity;
};

/// Discards |value| > 1/sqrt(2); otherwise rounds arccos(value) to the grid
/// pi j / (r s) and returns j with its parity.
std::optional<RoundedOutcome> filter_round(double value, uint64_t r, uint64_t s);

struct SampleBatch {
    std::vector<double> values;
    std::vector<double> true_values;
    uint64_t seed = 0;
    uint64_t index = 0;
    AccuracyModel model;
    uint64_t d = 0;
    uint64_t r = 0;
    uint64_t s = 0;
};

SampleBatch generate_batch(
    const AccuracyModel &accuracy, const SpectralModel &model, uint64_t r, uint64_t s, uint64_t samples, uint64_t seed);

/// Batch k is generated from split_seed(master_seed, k). `threads` <= 1 runs serially.
std::vector<SampleBatch> generate_batches(
    const AccuracyModel &accuracy,
    const SpectralModel &model,
    uint64_t r,
    uint64_t s,
    uint64_t samples,
    uint64_t batch_count,
    uint64_t master_seed,
    unsigned threads = 1);

constexpr double DECISION_THRESHOLD = 5.0 / 16.0;
constexpr double PROBABILITY_GAP = 1.0 / 8.0;
constexpr uint64_t MIN_FILTERED_COUNT = 32;

struct DecisionResult {
    int verdict = 0;
    uint64_t sample_count = 0;
    uint64_t filtered_count = 0;
    uint64_t odd_count = 0;
    double odd_fraction = 0.0;
    double threshold = DECISION_THRESHOLD;
    double confidence_bound = 1.0;
    bool inconclusive = true;
};

/// verdict = 1 iff the odd fraction of the filtered samples exceeds 5/16;
/// inconclusive when fewer than 32 samples survive the filter.
DecisionResult decide(const std::vector<double> &values, uint64_t r, uint64_t s);
DecisionResult decide(const SampleBatch &batch);

/// Hoeffding bound exp(-2 n (gap/2)^2) on misclassifying with a threshold
/// midway across a probability gap. Returns 1 for n = 0.
double chernoff_confidence(uint64_t filtered_count, double gap);

/// CSV "batch,trial,raw_value,filtered,j,parity"; j and parity are empty for
/// filtered-out samples and filtered = 1 marks kept samples.
std::string batch_csv(const std::vector<SampleBatch> &batches);

/// Decision fields plus seed and model parameters.
std::string decision_json(const DecisionResult &result, const SampleBatch &batch);

constexpr uint32_t MAX_PHASE_ANCILLAS = 14;

/// Phase estimation with m ancillas on an input spread over eigenvectors with
/// eigenphases `phases` (in [0, 1)) and amplitudes `amplitudes` (normalized).
struct PhaseEstimationSetup {
    uint32_t m = 1;
    std::vector<double> phases;
    std::vector<double> amplitudes;

    /// Throws std::invalid_argument on m out of [1, 14], phases outside
    /// [0, 1), mismatched lengths or unnormalized amplitudes.
    void validate() const;
};

/// Probability of ancilla outcome j for one eigenphase:
/// sin^2(pi 2^m delta) / (4^m sin^2(pi delta)), delta = phase - j / 2^m.
double phase_kernel(uint32_t m, double phase, uint64_t j);

/// Exact outcome distribution over j in [0, 2^m).
std::vector<double> phase_estimate_distribution(const PhaseEstimationSetup &setup);

/// Draws outcomes from a fixed distribution by inverse CDF.
class PhaseSampler {
   public:
    explicit PhaseSampler(const PhaseEstimationSetup &setup);
    uint64_t sample(Rng &rng) const;
    const std::vector<double> &distribution() const {
        return distribution_;
    }

   private:
    std::vector<double> distribution_;
    std::vector<double> cumulative_;
};

uint64_t sample_phase_estimate(const PhaseEstimationSetup &setup, uint64_t seed);
std::vector<uint64_t> sample_phase_estimates(const PhaseEstimationSetup &setup, uint64_t seed, uint64_t count);

}  // namespace clocksim

#endif
