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

#include "clocksim/metrology.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "clocksim/io.h"
#include "json.hpp"

namespace clocksim {

std::string_view failure_mode_name(FailureMode mode) {
    switch (mode) {
        case FailureMode::UniformFullRange:
            return "uniform_full_range";
        case FailureMode::AdversarialOffset:
            return "adversarial_offset";
    }
    return "?";
}

FailureMode parse_failure_mode(std::string_view name) {
    if (name == "uniform_full_range") {
        return FailureMode::UniformFullRange;
    }
    if (name == "adversarial_offset") {
        return FailureMode::AdversarialOffset;
    }
    throw std::invalid_argument("unknown failure mode '" + std::string(name) + "'");
}

void AccuracyModel::validate() const {
    if (!(delta >= 0) || !std::isfinite(delta)) {
        throw std::invalid_argument("accuracy delta must be a finite number >= 0");
    }
    if (!(success_prob >= 0.75 && success_prob <= 1.0)) {
        throw std::invalid_argument("success probability must lie in [3/4, 1]");
    }
}

uint64_t split_seed(uint64_t master, uint64_t index) {
    uint64_t z = master + (index + 1) * 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

uint64_t sample_exact_index(const SpectralModel &model, Rng &rng) {
    std::uniform_int_distribution<uint64_t> pick(0, model.d - 1);
    uint64_t k = pick(rng);
    return std::min(k, model.d - k);
}

double sample_exact(const SpectralModel &model, Rng &rng) {
    return model.entries[sample_exact_index(model, rng)].eigenvalue;
}

MeasuredValue sample_with_accuracy(const AccuracyModel &accuracy, const SpectralModel &model, Rng &rng) {
    MeasuredValue out;
    out.true_j = sample_exact_index(model, rng);
    out.true_value = model.entries[out.true_j].eigenvalue;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double delta = accuracy.delta;
    out.success_branch = unit(rng) < accuracy.success_prob;
    if (out.success_branch) {
        out.value = delta > 0 ? out.true_value + (2 * unit(rng) - 1) * delta : out.true_value;
        return out;
    }
    switch (accuracy.failure_mode) {
        case FailureMode::UniformFullRange:
            out.value = -1 - delta + unit(rng) * (2 + 2 * delta);
            break;
        case FailureMode::AdversarialOffset:
            out.value = out.true_value + 2 * delta;
            if (out.value > 1 + delta) {
                out.value = out.true_value - 2 * delta;
            }
            break;
    }
    return out;
}

std::optional<RoundedOutcome> filter_round(double value, uint64_t r, uint64_t s) {
    if (r == 0 || s == 0) {
        throw std::invalid_argument("filter_round needs r, s >= 1");
    }
    if (!(std::abs(value) <= std::numbers::sqrt2 / 2)) {
        return std::nullopt;
    }
    double angle = std::acos(std::clamp(value, -1.0, 1.0));
    double step = std::numbers::pi / (static_cast<double>(r) * static_cast<double>(s));
    auto j = static_cast<int64_t>(std::llround(angle / step));
    return RoundedOutcome{j, static_cast<int>(j & 1)};
}

SampleBatch generate_batch(
    const AccuracyModel &accuracy, const SpectralModel &model, uint64_t r, uint64_t s, uint64_t samples, uint64_t seed) {
    accuracy.validate();
    SampleBatch batch;
    batch.seed = seed;
    batch.model = accuracy;
    batch.d = model.d;
    batch.r = r;
    batch.s = s;
    batch.values.reserve(samples);
    batch.true_values.reserve(samples);
    Rng rng(seed);
    for (uint64_t k = 0; k < samples; k++) {
        MeasuredValue v = sample_with_accuracy(accuracy, model, rng);
        batch.values.push_back(v.value);
        batch.true_values.push_back(v.true_value);
    }
    return batch;
}

std::vector<SampleBatch> generate_batches(
    const AccuracyModel &accuracy,
    const SpectralModel &model,
    uint64_t r,
    uint64_t s,
    uint64_t samples,
    uint64_t batch_count,
    uint64_t master_seed,
    unsigned threads) {
    accuracy.validate();
    std::vector<SampleBatch> batches(batch_count);
    auto work = [&](uint64_t begin, uint64_t stride) {
        for (uint64_t k = begin; k < batch_count; k += stride) {
            batches[k] = generate_batch(accuracy, model, r, s, samples, split_seed(master_seed, k));
            batches[k].index = k;
        }
    };
    if (threads <= 1 || batch_count <= 1) {
        work(0, 1);
        return batches;
    }
    const unsigned n = static_cast<unsigned>(std::min<uint64_t>(threads, batch_count));
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < n; t++) {
        pool.emplace_back(work, t, n);
    }
    for (auto &th : pool) {
        th.join();
    }
    return batches;
}

DecisionResult decide(const std::vector<double> &values, uint64_t r, uint64_t s) {
    if (values.empty()) {
        throw std::invalid_argument("cannot decide on an empty batch");
    }
    DecisionResult res;
    res.sample_count = values.size();
    for (double v : values) {
        if (auto o = filter_round(v, r, s)) {
            res.filtered_count++;
            res.odd_count += static_cast<uint64_t>(o->parity);
        }
    }
    res.odd_fraction =
        res.filtered_count == 0 ? 0.0 : static_cast<double>(res.odd_count) / static_cast<double>(res.filtered_count);
    res.verdict = res.odd_fraction > DECISION_THRESHOLD ? 1 : 0;
    res.inconclusive = res.filtered_count < MIN_FILTERED_COUNT;
    res.confidence_bound = chernoff_confidence(res.filtered_count, PROBABILITY_GAP);
    return res;
}

DecisionResult decide(const SampleBatch &batch) {
    return decide(batch.values, batch.r, batch.s);
}

double chernoff_confidence(uint64_t filtered_count, double gap) {
    if (!(gap > 0 && gap < 1)) {
        throw std::invalid_argument("probability gap must lie in (0, 1)");
    }
    double half = gap / 2;
    return std::exp(-2.0 * static_cast<double>(filtered_count) * half * half);
}

std::string batch_csv(const std::vector<SampleBatch> &batches) {
    std::ostringstream out;
    out << "batch,trial,raw_value,filtered,j,parity\n";
    for (const auto &b : batches) {
        for (size_t k = 0; k < b.values.size(); k++) {
            out << b.index << "," << k << "," << format_double(b.values[k]) << ",";
            if (auto o = filter_round(b.values[k], b.r, b.s)) {
                out << "1," << o->j << "," << o->parity << "\n";
            } else {
                out << "0,,\n";
            }
        }
    }
    return out.str();
}

std::string decision_json(const DecisionResult &result, const SampleBatch &batch) {
    nlohmann::json j;
    j["verdict"] = result.verdict;
    j["inconclusive"] = result.inconclusive;
    j["sample_count"] = result.sample_count;
    j["filtered_count"] = result.filtered_count;
    j["odd_count"] = result.odd_count;
    j["odd_fraction"] = result.odd_fraction;
    j["threshold"] = result.threshold;
    j["confidence_bound"] = result.confidence_bound;
    j["seed"] = batch.seed;
    j["r"] = batch.r;
    j["s"] = batch.s;
    if (batch.d != 0) {
        j["d"] = batch.d;
        j["delta"] = batch.model.delta;
        j["success_prob"] = batch.model.success_prob;
        j["failure_mode"] = failure_mode_name(batch.model.failure_mode);
    }
    return j.dump(1) + "\n";
}

void PhaseEstimationSetup::validate() const {
    if (m < 1 || m > MAX_PHASE_ANCILLAS) {
        throw std::invalid_argument(
            "ancilla count m must lie in [1, " + std::to_string(MAX_PHASE_ANCILLAS) + "], got " + std::to_string(m));
    }
    if (phases.empty() || phases.size() != amplitudes.size()) {
        throw std::invalid_argument("phases and amplitudes must be nonempty and of equal length");
    }
    double norm = 0;
    for (size_t k = 0; k < phases.size(); k++) {
        if (!(phases[k] >= 0 && phases[k] < 1)) {
            throw std::invalid_argument("eigenphases must lie in [0, 1)");
        }
        norm += amplitudes[k] * amplitudes[k];
    }
    if (std::abs(norm - 1) > 1e-9) {
        throw std::invalid_argument("input amplitudes are not normalized");
    }
}

double phase_kernel(uint32_t m, double phase, uint64_t j) {
    const double grid = std::ldexp(1.0, static_cast<int>(m));
    double delta = phase - static_cast<double>(j) / grid;
    delta -= std::round(delta);
    if (delta == 0) {
        return 1.0;
    }
    double scaled = grid * delta;
    double num = std::sin(std::numbers::pi * (scaled - std::round(scaled)));
    double den = grid * std::sin(std::numbers::pi * delta);
    return (num * num) / (den * den);
}

std::vector<double> phase_estimate_distribution(const PhaseEstimationSetup &setup) {
    setup.validate();
    const uint64_t size = uint64_t{1} << setup.m;
    std::vector<double> dist(size, 0.0);
    for (size_t k = 0; k < setup.phases.size(); k++) {
        double w = setup.amplitudes[k] * setup.amplitudes[k];
        if (w == 0) {
            continue;
        }
        for (uint64_t j = 0; j < size; j++) {
            dist[j] += w * phase_kernel(setup.m, setup.phases[k], j);
        }
    }
    return dist;
}

PhaseSampler::PhaseSampler(const PhaseEstimationSetup &setup) : distribution_(phase_estimate_distribution(setup)) {
    cumulative_.resize(distribution_.size());
    double acc = 0;
    for (size_t j = 0; j < distribution_.size(); j++) {
        acc += distribution_[j];
        cumulative_[j] = acc;
    }
}

uint64_t PhaseSampler::sample(Rng &rng) const {
    std::uniform_real_distribution<double> unit(0.0, cumulative_.back());
    double u = unit(rng);
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    if (it == cumulative_.end()) {
        --it;
    }
    return static_cast<uint64_t>(it - cumulative_.begin());
}

uint64_t sample_phase_estimate(const PhaseEstimationSetup &setup, uint64_t seed) {
    PhaseSampler sampler(setup);
    Rng rng(seed);
    return sampler.sample(rng);
}

std::vector<uint64_t> sample_phase_estimates(const PhaseEstimationSetup &setup, uint64_t seed, uint64_t count) {
    PhaseSampler sampler(setup);
    Rng rng(seed);
    std::vector<uint64_t> out;
    out.reserve(count);
    for (uint64_t k = 0; k < count; k++) {
        out.push_back(sampler.sample(rng));
    }
    return out;
}

}  // namespace clocksim
