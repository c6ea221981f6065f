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

#include "clocksim/harness.h"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>

#include "clocksim/errors.h"
#include "clocksim/io.h"
#include "json.hpp"

namespace clocksim {

namespace {

using ordered_json = nlohmann::ordered_json;

template <typename Fn>
auto run_stage(
    const char *stage, std::vector<std::pair<std::string, double>> &timing, Fn &&fn) -> decltype(fn()) {
    auto start = std::chrono::steady_clock::now();
    auto record = [&] {
        std::chrono::duration<double, std::milli> ms = std::chrono::steady_clock::now() - start;
        timing.emplace_back(stage, ms.count());
    };
    try {
        if constexpr (std::is_void_v<decltype(fn())>) {
            fn();
            record();
        } else {
            auto result = fn();
            record();
            return result;
        }
    } catch (const StageError &) {
        throw;
    } catch (const BudgetExhausted &e) {
        throw StageError(stage, EXIT_BUDGET, e.what());
    } catch (const std::exception &e) {
        throw StageError(stage, EXIT_VALIDATION, e.what());
    }
}

ordered_json decision_value(const DecisionResult &d) {
    ordered_json j;
    j["verdict"] = d.verdict;
    j["inconclusive"] = d.inconclusive;
    j["sample_count"] = d.sample_count;
    j["filtered_count"] = d.filtered_count;
    j["odd_count"] = d.odd_count;
    j["odd_fraction"] = d.odd_fraction;
    j["threshold"] = d.threshold;
    j["confidence_bound"] = d.confidence_bound;
    return j;
}

}  // namespace

StageError::StageError(std::string stage, int exit_code, const std::string &message)
    : std::runtime_error("[" + stage + "] " + message), stage_(std::move(stage)), exit_code_(exit_code) {
}

void ExperimentConfig::validate() const {
    if (spec_path.empty()) {
        throw std::invalid_argument("spec_path is required");
    }
    if (samples == 0) {
        throw std::invalid_argument("samples must be >= 1");
    }
    if (batches == 0) {
        throw std::invalid_argument("batches must be >= 1");
    }
    if (accuracy && !(*accuracy > 0 && std::isfinite(*accuracy))) {
        throw std::invalid_argument("accuracy must be a positive number or \"auto\"");
    }
    if (!(success_prob >= 0.75 && success_prob <= 1.0)) {
        throw std::invalid_argument("success_prob must lie in [0.75, 1]");
    }
    if (orbit_budget == 0) {
        throw std::invalid_argument("orbit_budget must be >= 1");
    }
}

ExperimentConfig parse_experiment_config(const std::string &json_text, const std::string &base_dir) {
    ExperimentConfig cfg;
    try {
        auto j = nlohmann::json::parse(json_text);
        if (!j.is_object()) {
            throw std::invalid_argument("config must be a JSON object");
        }
        for (const auto &[key, value] : j.items()) {
            if (key == "spec_path") {
                cfg.spec_path = value.get<std::string>();
            } else if (key == "input") {
                cfg.input = value.get<std::string>();
            } else if (key == "accuracy") {
                if (value.is_string()) {
                    if (value.get<std::string>() != "auto") {
                        throw std::invalid_argument("accuracy must be a number or \"auto\"");
                    }
                    cfg.accuracy.reset();
                } else {
                    cfg.accuracy = value.get<double>();
                }
            } else if (key == "samples") {
                cfg.samples = value.get<uint64_t>();
            } else if (key == "batches") {
                cfg.batches = value.get<uint64_t>();
            } else if (key == "seed") {
                cfg.seed = value.get<uint64_t>();
            } else if (key == "out_dir") {
                cfg.out_dir = value.get<std::string>();
            } else if (key == "merge_cells") {
                cfg.merge_cells = value.get<bool>();
            } else if (key == "threads") {
                cfg.threads = value.get<unsigned>();
            } else if (key == "success_prob") {
                cfg.success_prob = value.get<double>();
            } else if (key == "failure_mode") {
                cfg.failure_mode = parse_failure_mode(value.get<std::string>());
            } else if (key == "orbit_budget") {
                cfg.orbit_budget = value.get<uint64_t>();
            } else {
                throw std::invalid_argument("unknown config key '" + key + "'");
            }
        }
        if (!base_dir.empty() && !cfg.spec_path.empty() && std::filesystem::path(cfg.spec_path).is_relative()) {
            cfg.spec_path = (std::filesystem::path(base_dir) / cfg.spec_path).lexically_normal().string();
        }
        cfg.validate();
    } catch (const std::exception &e) {
        throw StageError("config", EXIT_VALIDATION, e.what());
    }
    return cfg;
}

ExperimentConfig load_experiment_config(const std::string &path) {
    std::string text;
    try {
        text = read_text_file(path);
    } catch (const std::exception &e) {
        throw StageError("config", EXIT_IO, e.what());
    }
    return parse_experiment_config(text, std::filesystem::path(path).parent_path().string());
}

double ExperimentReport::agreement_rate() const {
    return sample_batches.empty() ? 0.0
                                  : static_cast<double>(batches_agreeing) / static_cast<double>(sample_batches.size());
}

ExperimentReport run_experiment(const ExperimentConfig &config) {
    ExperimentReport rep;
    rep.config = config;
    auto &timing = rep.timing_ms;
    run_stage("config", timing, [&] { config.validate(); });

    std::string text;
    try {
        text = read_text_file(config.spec_path);
    } catch (const std::exception &e) {
        throw StageError("load", EXIT_IO, e.what());
    }
    RtmSpec spec = run_stage("parse", timing, [&] { return parse_rtm_spec(text); });

    run_stage("reversibility", timing, [&] {
        ReversibilityReport rr = check_reversibility(spec);
        if (!rr.reversible()) {
            std::string msg = std::to_string(rr.violations.size()) + " violation(s): " + rr.violations.front().message;
            throw StageError("reversibility", EXIT_VALIDATION, msg);
        }
    });

    std::vector<Symbol> input = run_stage("input", timing, [&] { return parse_input_word(spec, config.input); });

    run_stage("ground-truth", timing, [&] {
        uint64_t budget = spec.configuration_count().value_or(config.orbit_budget);
        RunResult run = run_machine(spec, input, budget);
        if (!run.halted) {
            throw StageError("ground-truth", EXIT_BUDGET, "machine did not halt within " + std::to_string(budget) + " steps");
        }
        rep.f_of_x = run.f_of_x;
        rep.machine_steps = run.steps_used;
    });

    CompileOptions options;
    options.merge_cells = config.merge_cells;
    Circuit circuit = run_stage("compile", timing, [&] { return build_wrapper_circuit(spec, options); });
    rep.m = circuit.layout.m;
    rep.tape_cells = spec.tape_cells();
    rep.s = circuit.size();
    rep.r_formula = wrapper_period(circuit.layout.counter_bits);
    BasisState initial = initial_basis_state(circuit.layout, spec, input);

    run_stage("orbit", timing, [&] {
        BasisState cur = initial;
        for (uint64_t k = 0; k < rep.r_formula; k++) {
            apply_circuit_in_place(circuit, cur);
        }
        RegisterId sol = circuit.layout.id(RegisterKind::Solution);
        uint32_t solution = get_register(circuit.layout, cur, sol);
        set_register(circuit.layout, cur, sol, 0);
        rep.restored = cur == initial && static_cast<int>(solution) == rep.f_of_x;
        rep.r_observed = circuit_orbit_length(circuit, initial, config.orbit_budget);
    });

    ForwardOperator forward(circuit);
    run_stage("clock-orbit", timing, [&] {
        Orbit orbit = compute_orbit(forward, ClockedState{initial, 1}, config.orbit_budget);
        rep.d = orbit.d;
    });

    run_stage("spectrum", timing, [&] {
        rep.spectrum = spectral_model(rep.d);
        rep.locality = locality_report(forward);
        rep.locality_json = rep.locality.to_json(circuit);
    });

    rep.auto_delta = 1.0 / (static_cast<double>(rep.r_formula) * static_cast<double>(rep.s));
    rep.delta = config.accuracy.value_or(rep.auto_delta);
    rep.accuracy_below_threshold = rep.delta > rep.auto_delta;

    run_stage("sample", timing, [&] {
        AccuracyModel acc{rep.delta, config.success_prob, config.failure_mode};
        rep.sample_batches = generate_batches(
            acc, rep.spectrum, rep.r_formula, rep.s, config.samples, config.batches, config.seed, config.threads);
    });

    run_stage("decide", timing, [&] {
        std::vector<double> pooled;
        pooled.reserve(config.samples * config.batches);
        for (const auto &b : rep.sample_batches) {
            DecisionResult d = decide(b);
            if (d.inconclusive) {
                rep.batches_inconclusive++;
            } else if (d.verdict == rep.f_of_x) {
                rep.batches_agreeing++;
            }
            pooled.insert(pooled.end(), b.values.begin(), b.values.end());
        }
        rep.decision = decide(pooled, rep.r_formula, rep.s);
        rep.agreement = !rep.decision.inconclusive && rep.decision.verdict == rep.f_of_x;
    });
    return rep;
}

std::string ExperimentReport::to_json() const {
    ordered_json j;
    j["format"] = "clocksim-report/1";
    j["tool_version"] = CLOCKSIM_VERSION;
    ordered_json cfg;
    cfg["spec_path"] = config.spec_path;
    cfg["input"] = config.input;
    if (config.accuracy) {
        cfg["accuracy"] = *config.accuracy;
    } else {
        cfg["accuracy"] = "auto";
    }
    cfg["samples"] = config.samples;
    cfg["batches"] = config.batches;
    cfg["seed"] = config.seed;
    cfg["merge_cells"] = config.merge_cells;
    cfg["success_prob"] = config.success_prob;
    cfg["failure_mode"] = failure_mode_name(config.failure_mode);
    j["config"] = cfg;
    j["machine"] = {{"m", m}, {"tape_cells", tape_cells}, {"s", s}};
    j["ground_truth"] = {{"f_of_x", f_of_x}, {"machine_steps", machine_steps}};
    j["orbit"] = {
        {"r_formula", r_formula},
        {"r_observed", r_observed},
        {"r_expected", f_of_x == 1 ? 2 * r_formula : r_formula},
        {"restored", restored},
        {"d", d},
        {"d_expected", f_of_x == 1 ? 2 * s * r_formula : s * r_formula}};
    ordered_json spec_summary;
    spec_summary["d"] = spectrum.d;
    spec_summary["distinct_eigenvalues"] = spectrum.entries.size();
    spec_summary["gap"] = spectral_gap(spectrum.d);
    j["spectrum"] = spec_summary;
    j["accuracy"] = {
        {"delta", delta},
        {"auto_delta", auto_delta},
        {"below_threshold", accuracy_below_threshold},
        {"success_prob", config.success_prob},
        {"failure_mode", failure_mode_name(config.failure_mode)}};
    j["decision"] = decision_value(decision);
    ordered_json batches;
    batches["count"] = sample_batches.size();
    batches["agreeing"] = batches_agreeing;
    batches["inconclusive"] = batches_inconclusive;
    batches["agreement_rate"] = agreement_rate();
    batches["seeds"] = ordered_json::array();
    for (const auto &b : sample_batches) {
        batches["seeds"].push_back(b.seed);
    }
    j["batches"] = batches;
    j["locality"] = {
        {"max_support", locality.max_support},
        {"term_count", locality.term_count()},
        {"exceeds_target", locality.exceeds_target}};
    j["agreement"] = agreement;
    return j.dump(1) + "\n";
}

std::string ExperimentReport::timing_json() const {
    ordered_json j = ordered_json::object();
    for (const auto &[stage, ms] : timing_ms) {
        j[stage] = ms;
    }
    return ordered_json{{"stage_ms", j}}.dump(1) + "\n";
}

void write_experiment_outputs(const ExperimentReport &report, const std::string &out_dir) {
    try {
        std::filesystem::create_directories(out_dir);
        auto path = [&](const char *name) {
            return (std::filesystem::path(out_dir) / name).string();
        };
        write_text_file(path("report.json"), report.to_json());
        write_text_file(path("samples.csv"), batch_csv(report.sample_batches));
        write_text_file(path("spectrum.csv"), spectral_csv(report.spectrum));
        write_text_file(path("locality.json"), report.locality_json);
        write_text_file(path("timing.json"), report.timing_json());
    } catch (const std::exception &e) {
        throw StageError("write", EXIT_IO, e.what());
    }
}

}  // namespace clocksim
