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

#include "cli.h"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "clocksim/clockwork.h"
#include "clocksim/compiler.h"
#include "clocksim/errors.h"
#include "clocksim/harness.h"
#include "clocksim/io.h"
#include "clocksim/metrology.h"
#include "clocksim/rtm.h"
#include "json.hpp"

namespace clocksim {

namespace {

RtmSpec load_spec_or_throw(const std::string &path) {
    std::string text;
    try {
        text = read_text_file(path);
    } catch (const std::exception &e) {
        throw StageError("load", EXIT_IO, e.what());
    }
    try {
        return parse_rtm_spec(text);
    } catch (const ParseError &e) {
        throw StageError("parse", EXIT_VALIDATION, path + ":" + e.what());
    } catch (const std::exception &e) {
        throw StageError("parse", EXIT_VALIDATION, path + ": " + e.what());
    }
}

std::optional<double> parse_accuracy(const std::string &text) {
    if (text == "auto") {
        return std::nullopt;
    }
    size_t used = 0;
    double v = 0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception &) {
        used = 0;
    }
    if (used != text.size() || !(v > 0)) {
        throw StageError("config", EXIT_VALIDATION, "--accuracy must be \"auto\" or a positive number, got '" + text + "'");
    }
    return v;
}

std::vector<double> parse_number_list(const std::string &text, const char *what) {
    std::vector<double> out;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, ',')) {
        size_t used = 0;
        double v = 0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception &) {
            used = 0;
        }
        if (used == 0 || used != item.size()) {
            // Allow fractions such as 1/3.
            auto slash = item.find('/');
            if (slash == std::string::npos) {
                throw StageError("config", EXIT_VALIDATION, std::string("bad number in ") + what + ": '" + item + "'");
            }
            try {
                v = std::stod(item.substr(0, slash)) / std::stod(item.substr(slash + 1));
            } catch (const std::exception &) {
                throw StageError("config", EXIT_VALIDATION, std::string("bad number in ") + what + ": '" + item + "'");
            }
        }
        out.push_back(v);
    }
    if (out.empty()) {
        throw StageError("config", EXIT_VALIDATION, std::string("empty list for ") + what);
    }
    return out;
}

void emit(const std::string &text, const std::string &out_path, std::ostream &out) {
    if (out_path.empty()) {
        out << text;
        return;
    }
    try {
        write_text_file(out_path, text);
    } catch (const std::exception &e) {
        throw StageError("write", EXIT_IO, e.what());
    }
}

int cmd_validate(const std::string &path, std::ostream &out, std::ostream &err) {
    RtmSpec spec = load_spec_or_throw(path);
    ReversibilityReport report = check_reversibility(spec);
    out << report.to_json();
    if (!report.reversible()) {
        err << "error[reversibility]: " << path << ": " << report.violations.size() << " violation(s)\n";
        return EXIT_VALIDATION;
    }
    return EXIT_OK;
}

Circuit compile_or_throw(const RtmSpec &spec, bool merge, bool step_only) {
    try {
        CompileOptions options;
        options.merge_cells = merge;
        return step_only ? build_step_circuit(spec, options) : build_wrapper_circuit(spec, options);
    } catch (const std::exception &e) {
        throw StageError("compile", EXIT_VALIDATION, e.what());
    }
}

void require_reversible(const RtmSpec &spec) {
    ReversibilityReport report = check_reversibility(spec);
    if (!report.reversible()) {
        throw StageError("reversibility", EXIT_VALIDATION, report.violations.front().message);
    }
}

std::vector<Symbol> parse_input_or_throw(const RtmSpec &spec, const std::string &input) {
    try {
        return parse_input_word(spec, input);
    } catch (const std::exception &e) {
        throw StageError("input", EXIT_VALIDATION, e.what());
    }
}

int cmd_orbit(const std::string &path, const std::string &input_text, bool merge, uint64_t budget, std::ostream &out) {
    RtmSpec spec = load_spec_or_throw(path);
    require_reversible(spec);
    std::vector<Symbol> input = parse_input_or_throw(spec, input_text);
    Circuit circuit = compile_or_throw(spec, merge, false);
    BasisState initial = initial_basis_state(circuit.layout, spec, input);
    uint64_t r_formula = wrapper_period(circuit.layout.counter_bits);
    nlohmann::ordered_json j;
    try {
        RunResult run = run_machine(spec, input, spec.configuration_count().value_or(budget));
        uint64_t r = circuit_orbit_length(circuit, initial, budget);
        BasisState cur = initial;
        for (uint64_t k = 0; k < r_formula; k++) {
            apply_circuit_in_place(circuit, cur);
        }
        RegisterId sol = circuit.layout.id(RegisterKind::Solution);
        uint32_t solution = get_register(circuit.layout, cur, sol);
        set_register(circuit.layout, cur, sol, 0);
        ForwardOperator forward(circuit);
        Orbit orbit = compute_orbit(forward, ClockedState{initial, 1}, budget);
        j["m"] = circuit.layout.m;
        j["counter_bits"] = circuit.layout.counter_bits;
        j["s"] = circuit.size();
        j["halted"] = run.halted;
        j["f_of_x"] = run.f_of_x;
        j["r_formula"] = r_formula;
        j["r_observed"] = r;
        j["solution_after_r_formula"] = solution;
        j["restored"] = cur == initial;
        j["d"] = orbit.d;
        j["d_over_s"] = orbit.d / circuit.size();
    } catch (const BudgetExhausted &e) {
        throw StageError("orbit", EXIT_BUDGET, e.what());
    }
    out << j.dump(1) << "\n";
    return EXIT_OK;
}

int cmd_decide(const std::string &batch_path, uint64_t r, uint64_t s, std::ostream &out) {
    std::string text;
    try {
        text = read_text_file(batch_path);
    } catch (const std::exception &e) {
        throw StageError("load", EXIT_IO, e.what());
    }
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) {
        throw StageError("decide", EXIT_VALIDATION, batch_path + ": empty batch file");
    }
    std::vector<std::string> header;
    {
        std::istringstream h(line);
        std::string cell;
        while (std::getline(h, cell, ',')) {
            header.push_back(cell);
        }
    }
    auto col = std::find(header.begin(), header.end(), "raw_value");
    if (col == header.end()) {
        throw StageError("decide", EXIT_VALIDATION, batch_path + ": missing raw_value column");
    }
    const size_t idx = static_cast<size_t>(col - header.begin());
    std::vector<double> values;
    size_t line_no = 1;
    while (std::getline(in, line)) {
        line_no++;
        if (line.empty()) {
            continue;
        }
        std::istringstream row(line);
        std::string cell;
        for (size_t k = 0; k <= idx; k++) {
            if (!std::getline(row, cell, ',')) {
                throw StageError("decide", EXIT_VALIDATION, batch_path + ":" + std::to_string(line_no) + ": short row");
            }
        }
        try {
            values.push_back(std::stod(cell));
        } catch (const std::exception &) {
            throw StageError(
                "decide", EXIT_VALIDATION, batch_path + ":" + std::to_string(line_no) + ": bad value '" + cell + "'");
        }
    }
    if (values.empty()) {
        throw StageError("decide", EXIT_VALIDATION, batch_path + ": no samples");
    }
    DecisionResult d = decide(values, r, s);
    nlohmann::ordered_json j;
    j["verdict"] = d.verdict;
    j["inconclusive"] = d.inconclusive;
    j["sample_count"] = d.sample_count;
    j["filtered_count"] = d.filtered_count;
    j["odd_count"] = d.odd_count;
    j["odd_fraction"] = d.odd_fraction;
    j["threshold"] = d.threshold;
    j["confidence_bound"] = d.confidence_bound;
    j["r"] = r;
    j["s"] = s;
    out << j.dump(1) << "\n";
    return EXIT_OK;
}

int cmd_phase_estimate(
    uint32_t m,
    const std::string &phases_text,
    const std::string &amplitudes_text,
    uint64_t samples,
    uint64_t seed,
    std::ostream &out) {
    PhaseEstimationSetup setup;
    setup.m = m;
    setup.phases = parse_number_list(phases_text, "--phase");
    if (amplitudes_text.empty()) {
        setup.amplitudes.assign(setup.phases.size(), 1.0 / std::sqrt(static_cast<double>(setup.phases.size())));
    } else {
        setup.amplitudes = parse_number_list(amplitudes_text, "--amplitudes");
    }
    std::vector<double> dist;
    std::vector<uint64_t> counts;
    try {
        dist = phase_estimate_distribution(setup);
        if (samples > 0) {
            counts.assign(dist.size(), 0);
            for (uint64_t j : sample_phase_estimates(setup, seed, samples)) {
                counts[j]++;
            }
        }
    } catch (const std::invalid_argument &e) {
        throw StageError("phase-estimate", EXIT_VALIDATION, e.what());
    }
    out << "j,probability" << (samples > 0 ? ",count" : "") << "\n";
    for (size_t j = 0; j < dist.size(); j++) {
        out << j << "," << format_double(dist[j]);
        if (samples > 0) {
            out << "," << counts[j];
        }
        out << "\n";
    }
    return EXIT_OK;
}

}  // namespace

int cli_dispatch(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"clocksim: reversible machines, clock observables and accuracy-limited measurement"};
    app.name("clocksim");
    app.require_subcommand(1);
    app.set_version_flag("--version", CLOCKSIM_VERSION);

    std::string spec_path, input, out_path, accuracy = "auto", batch_path, phases, amplitudes, config_path;
    std::string failure_mode = "uniform_full_range";
    bool no_merge = false, step_only = false;
    uint64_t d = 0, r = 0, s = 0, samples = 200, batches = 1, seed = 0, budget = uint64_t{1} << 28;
    uint32_t m = 0;
    double success_prob = 0.75;
    unsigned threads = 1;

    auto *validate = app.add_subcommand("validate", "Check a machine for totality and reversibility");
    validate->add_option("spec", spec_path, "Machine description file")->required();

    auto *compile = app.add_subcommand("compile", "Dump the wrapper (or step) circuit as JSON");
    compile->add_option("spec", spec_path, "Machine description file")->required();
    compile->add_flag("--no-merge-cells", no_merge, "One wire per register");
    compile->add_flag("--step", step_only, "Emit the single-step circuit U instead of V");
    compile->add_option("--out", out_path, "Output file (default stdout)");

    auto *orbit = app.add_subcommand("orbit", "Traverse the wrapper and clock orbits of an input");
    orbit->add_option("spec", spec_path, "Machine description file")->required();
    orbit->add_option("--input", input, "Input word")->required();
    orbit->add_flag("--no-merge-cells", no_merge, "One wire per register");
    orbit->add_option("--budget", budget, "Traversal step budget");

    auto *spectrum = app.add_subcommand("spectrum", "Spectral table of a d-cycle clock orbit as CSV");
    spectrum->add_option("--d", d, "Orbit dimension")->required()->check(CLI::PositiveNumber);

    auto *sample = app.add_subcommand("sample", "Sample accuracy-limited measurements as CSV");
    sample->add_option("spec", spec_path, "Machine description file")->required();
    sample->add_option("--input", input, "Input word")->required();
    sample->add_option("--accuracy", accuracy, "auto or a positive number");
    sample->add_option("--samples", samples, "Samples per batch")->check(CLI::PositiveNumber);
    sample->add_option("--batches", batches, "Batch count")->check(CLI::PositiveNumber);
    sample->add_option("--seed", seed, "Master seed");
    sample->add_option("--success-prob", success_prob, "Probability of an in-interval outcome");
    sample->add_option("--failure-mode", failure_mode, "uniform_full_range or adversarial_offset");
    sample->add_flag("--no-merge-cells", no_merge, "One wire per register");
    sample->add_option("--out", out_path, "Output file (default stdout)");

    auto *decide_cmd = app.add_subcommand("decide", "Filter, round and decide from a batch CSV");
    decide_cmd->add_option("--batch", batch_path, "CSV with a raw_value column")->required();
    decide_cmd->add_option("--r", r, "Wrapper period")->required()->check(CLI::PositiveNumber);
    decide_cmd->add_option("--s", s, "Circuit size")->required()->check(CLI::PositiveNumber);

    auto *phase = app.add_subcommand("phase-estimate", "Phase-estimation outcome distribution as CSV");
    phase->add_option("--m", m, "Ancilla count")->required();
    phase->add_option("--phase", phases, "Comma-separated eigenphases in [0,1), fractions allowed")->required();
    phase->add_option("--amplitudes", amplitudes, "Comma-separated input amplitudes (default equal)");
    phase->add_option("--samples", samples, "Draw this many outcomes and add a count column")->default_val(0);
    phase->add_option("--seed", seed, "Sampling seed");

    auto *experiment = app.add_subcommand("experiment", "Run the end-to-end pipeline from a JSON config");
    experiment->add_option("--config", config_path, "Experiment config JSON")->required();
    auto *exp_seed = experiment->add_option("--seed", seed, "Override the seed");
    auto *exp_samples = experiment->add_option("--samples", samples, "Override samples per batch");
    auto *exp_batches = experiment->add_option("--batches", batches, "Override batch count");
    auto *exp_accuracy = experiment->add_option("--accuracy", accuracy, "Override accuracy: auto or a number");
    auto *exp_threads = experiment->add_option("--threads", threads, "Sampling threads");
    experiment->add_flag("--no-merge-cells", no_merge, "One wire per register");
    auto *exp_out = experiment->add_option("--out", out_path, "Output directory");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp &) {
        out << app.help();
        return EXIT_OK;
    } catch (const CLI::CallForAllHelp &) {
        out << app.help("", CLI::AppFormatMode::All);
        return EXIT_OK;
    } catch (const CLI::CallForVersion &) {
        out << CLOCKSIM_VERSION << "\n";
        return EXIT_OK;
    } catch (const CLI::ParseError &e) {
        err << "error[usage]: " << e.what() << "\n";
        return EXIT_USAGE;
    }

    try {
        if (validate->parsed()) {
            return cmd_validate(spec_path, out, err);
        }
        if (compile->parsed()) {
            RtmSpec spec = load_spec_or_throw(spec_path);
            require_reversible(spec);
            emit(circuit_to_json(compile_or_throw(spec, !no_merge, step_only)), out_path, out);
            return EXIT_OK;
        }
        if (orbit->parsed()) {
            return cmd_orbit(spec_path, input, !no_merge, budget, out);
        }
        if (spectrum->parsed()) {
            out << spectral_csv(spectral_model(d));
            return EXIT_OK;
        }
        if (sample->parsed()) {
            ExperimentConfig cfg;
            cfg.spec_path = spec_path;
            cfg.input = input;
            cfg.accuracy = parse_accuracy(accuracy);
            cfg.samples = samples;
            cfg.batches = batches;
            cfg.seed = seed;
            cfg.merge_cells = !no_merge;
            cfg.success_prob = success_prob;
            try {
                cfg.failure_mode = parse_failure_mode(failure_mode);
            } catch (const std::exception &e) {
                throw StageError("config", EXIT_VALIDATION, e.what());
            }
            ExperimentReport rep = run_experiment(cfg);
            emit(batch_csv(rep.sample_batches), out_path, out);
            return EXIT_OK;
        }
        if (decide_cmd->parsed()) {
            return cmd_decide(batch_path, r, s, out);
        }
        if (phase->parsed()) {
            return cmd_phase_estimate(m, phases, amplitudes, samples, seed, out);
        }
        if (experiment->parsed()) {
            ExperimentConfig cfg = load_experiment_config(config_path);
            if (exp_seed->count() > 0) {
                cfg.seed = seed;
            }
            if (exp_samples->count() > 0) {
                cfg.samples = samples;
            }
            if (exp_batches->count() > 0) {
                cfg.batches = batches;
            }
            if (exp_accuracy->count() > 0) {
                cfg.accuracy = parse_accuracy(accuracy);
            }
            if (exp_threads->count() > 0) {
                cfg.threads = threads;
            }
            if (no_merge) {
                cfg.merge_cells = false;
            }
            if (exp_out->count() > 0) {
                cfg.out_dir = out_path;
            }
            ExperimentReport rep = run_experiment(cfg);
            if (!cfg.out_dir.empty()) {
                write_experiment_outputs(rep, cfg.out_dir);
            }
            out << rep.to_json();
            return EXIT_OK;
        }
    } catch (const StageError &e) {
        err << "error" << e.what() << "\n";
        return e.exit_code();
    } catch (const std::exception &e) {
        err << "error[internal]: " << e.what() << "\n";
        return EXIT_VALIDATION;
    }
    err << "error[usage]: no subcommand\n";
    return EXIT_USAGE;
}

int cli_dispatch(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
    std::vector<std::string> args;
    for (int k = 1; k < argc; k++) {
        args.emplace_back(argv[k]);
    }
    return cli_dispatch(args, out, err);
}

}  // namespace clocksim
