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

#ifndef CLOCKSIM_HARNESS_H
#define CLOCKSIM_HARNESS_H

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "clocksim/clockwork.h"
#include "clocksim/compiler.h"
#include "clocksim/metrology.h"
#include "clocksim/rtm.h"

namespace clocksim {

constexpr const char *CLOCKSIM_VERSION = "0.1.0";

/// Process exit codes shared by the harness and the command line tool.
enum ExitCode : int {
    EXIT_OK = 0,
    EXIT_USAGE = 1,
    EXIT_VALIDATION = 2,
    EXIT_BUDGET = 3,
    EXIT_IO = 4,
};

/// A pipeline failure tagged with the stage that raised it.
class StageError : public std::runtime_error {
   public:
    StageError(std::string stage, int exit_code, const std::string &message);

    const std::string &stage() const {
        return stage_;
    }
    int exit_code() const {
        return exit_code_;
    }

   private:
    std::string stage_;
    int exit_code_;
};

struct ExperimentConfig {
    std::string spec_path;
    std::string input;
    /// nullopt means auto: 1 / (r s) with r = 2 (2^(m+1) - 1).
    std::optional<double> accuracy;
    uint64_t samples = 200;
    uint64_t batches = 1;
    uint64_t seed = 0;
    std::string out_dir;
    bool merge_cells = true;
    unsigned threads = 1;
    double success_prob = 0.75;
    FailureMode failure_mode = FailureMode::UniformFullRange;
    /// Cap on circuit and clock-orbit traversal steps.
    uint64_t orbit_budget = uint64_t{1} << 28;

    /// Throws std::invalid_argument on samples = 0, batches = 0 or accuracy <= 0.
    void validate() const;
};

/// Parses the JSON config. A relative spec_path is resolved against `base_dir`.
/// Throws StageError (stage "config").
ExperimentConfig parse_experiment_config(const std::string &json_text, const std::string &base_dir = "");
ExperimentConfig load_experiment_config(const std::string &path);

struct ExperimentReport {
    ExperimentConfig config;
    uint32_t m = 0;
    uint32_t tape_cells = 0;
    uint64_t s = 0;
    uint64_t r_formula = 0;
    uint64_t r_observed = 0;
    uint64_t d = 0;
    int f_of_x = 0;
    uint64_t machine_steps = 0;
    bool restored = false;
    double delta = 0;
    double auto_delta = 0;
    bool accuracy_below_threshold = false;
    /// Decision over all samples of all batches.
    DecisionResult decision;
    uint64_t batches_agreeing = 0;
    uint64_t batches_inconclusive = 0;
    bool agreement = false;
    SpectralModel spectrum;
    LocalityReport locality;
    std::vector<SampleBatch> sample_batches;
    std::string locality_json;
    /// Wall-clock milliseconds per stage, kept out of the deterministic report.
    std::vector<std::pair<std::string, double>> timing_ms;

    double agreement_rate() const;
    /// Deterministic: byte-identical for identical config and seed.
    std::string to_json() const;
    std::string timing_json() const;
};

/// parse -> reversibility check -> ground truth -> wrapper circuit -> orbit ->
/// clock orbit -> spectrum -> sampling -> decision. Throws StageError.
ExperimentReport run_experiment(const ExperimentConfig &config);

/// Writes report.json, samples.csv, spectrum.csv, locality.json and timing.json.
void write_experiment_outputs(const ExperimentReport &report, const std::string &out_dir);

}  // namespace clocksim

#endif
