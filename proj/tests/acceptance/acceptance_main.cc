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

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "clocksim/clockwork.h"
#include "clocksim/compiler.h"
#include "clocksim/metrology.h"
#include "clocksim/rtm.h"
#include "oracles.h"

using namespace clocksim;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Instance {
    std::string machine;
    std::vector<std::string> inputs;
};

const std::vector<Instance> &instances() {
    static const std::vector<Instance> list = {
        {"halt.rtm", {"0", "1"}},
        {"flip.rtm", {"00", "01", "10", "11"}},
        {"xor_walker.rtm", {"00", "01", "10", "11"}},
        {"stride.rtm", {"000", "001", "010", "011", "100", "101", "110", "111"}},
    };
    return list;
}

RtmSpec load(const std::string &name) {
    return load_rtm_spec(std::string(CLOCKSIM_CORPUS_DIR) + "/" + name);
}

int f_of(const RtmSpec &spec, const std::vector<Symbol> &input) {
    RunResult run = run_machine(spec, input, uint64_t{1} << 20);
    if (!run.halted) {
        throw std::runtime_error("corpus machine did not halt");
    }
    return run.f_of_x;
}

struct Criterion {
    int number;
    std::string name;
    std::function<bool(std::ostringstream &)> check;
};

bool orbit_law(std::ostringstream &detail) {
    bool ok = true;
    uint32_t machines = 0;
    for (const auto &inst : instances()) {
        RtmSpec spec = load(inst.machine);
        auto start = Clock::now();
        Circuit v = build_wrapper_circuit(spec);
        uint64_t r = wrapper_period(v.layout.counter_bits);
        bool machine_ok = v.layout.counter_bits == v.layout.m + 1 && r == 2 * ((uint64_t{1} << (v.layout.m + 1)) - 1);
        for (const auto &word : inst.inputs) {
            auto input = parse_input_word(spec, word);
            int f = f_of(spec, input);
            uint64_t observed = circuit_orbit_length(v, initial_basis_state(v.layout, spec, input), uint64_t{1} << 24);
            machine_ok = machine_ok && observed == (f == 1 ? 2 * r : r);
        }
        double t = seconds_since(start);
        machine_ok = machine_ok && t < 60;
        detail << " " << inst.machine << "(m=" << v.layout.m << ",r=" << r << "," << t << "s)";
        ok = ok && machine_ok;
        machines++;
    }
    return ok && machines >= 3;
}

bool restoration(std::ostringstream &detail) {
    bool ok = true;
    uint64_t checked = 0;
    for (bool merge : {true, false}) {
        for (const auto &inst : instances()) {
            RtmSpec spec = load(inst.machine);
            CompileOptions opts;
            opts.merge_cells = merge;
            Circuit v = build_wrapper_circuit(spec, opts);
            uint64_t r = wrapper_period(v.layout.counter_bits);
            RegisterId solution = v.layout.id(RegisterKind::Solution);
            for (const auto &word : inst.inputs) {
                auto input = parse_input_word(spec, word);
                int f = f_of(spec, input);
                BasisState initial = initial_basis_state(v.layout, spec, input);
                BasisState cur = initial;
                for (uint64_t k = 0; k < r; k++) {
                    apply_circuit_in_place(v, cur);
                }
                for (RegisterId id = 0; id < v.layout.registers.size(); id++) {
                    uint32_t want = id == solution ? static_cast<uint32_t>(f) : get_register(v.layout, initial, id);
                    ok = ok && get_register(v.layout, cur, id) == want;
                }
                checked++;
            }
        }
    }
    detail << " " << checked << " instances, merged and unmerged";
    return ok;
}

bool clock_orbit(std::ostringstream &detail) {
    bool ok = true;
    uint64_t largest = 0;
    for (const auto &inst : instances()) {
        RtmSpec spec = load(inst.machine);
        Circuit v = build_wrapper_circuit(spec);
        ForwardOperator forward(v);
        uint64_t r = wrapper_period(v.layout.counter_bits);
        for (const auto &word : inst.inputs) {
            auto input = parse_input_word(spec, word);
            int f = f_of(spec, input);
            ClockedState start{initial_basis_state(v.layout, spec, input), 1};
            Orbit orbit = compute_orbit(forward, start, uint64_t{1} << 26, true);
            uint64_t want = (f == 1 ? 2 : 1) * forward.s() * r;
            ClockedState cur = start;
            for (uint64_t k = 0; k < orbit.d; k++) {
                forward.apply_in_place(cur);
            }
            ok = ok && orbit.d == want && orbit.distinct_verified && cur == start;
            largest = std::max(largest, orbit.d);
        }
    }
    detail << " largest d=" << largest;
    return ok;
}

bool spectrum(std::ostringstream &detail) {
    auto start = Clock::now();
    bool ok = true;
    double worst = 0;
    for (uint64_t d : {2, 3, 4, 8, 64, 256, 1024}) {
        SpectralModel model = spectral_model(d);
        std::vector<double> ours = model.eigenvalues();
        std::vector<double> dense = dense_orbit_oracle(d);
        ok = ok && ours.size() == d && dense.size() == d;
        for (size_t i = 0; ok && i < d; i++) {
            worst = std::max(worst, std::abs(ours[i] - dense[i]));
        }
        for (const auto &e : model.entries) {
            bool edge = e.j == 0 || 2 * e.j == d;
            ok = ok && e.probability == Rational::make(edge ? 1 : 2, d) && e.multiplicity == (edge ? 1u : 2u);
        }
        ok = ok && model.total_probability() == Rational::make(1, 1);
    }
    double t = seconds_since(start);
    detail << " max |error|=" << worst << ", " << t << "s";
    return ok && worst <= 1e-9 && t < 120;
}

bool spectral_gap_check(std::ostringstream &detail) {
    bool ok = true;
    double worst = 0;
    for (uint64_t d = 64; d <= (uint64_t{1} << 20); d *= 2) {
        for (uint64_t dd : {d, d + 1, d + 3}) {
            double quad = std::pow(2 * std::numbers::pi / static_cast<double>(dd), 2) / 2;
            double exact = 1 - std::cos(2 * std::numbers::pi / static_cast<double>(dd));
            double rel = std::abs(spectral_gap(dd) - quad) / quad;
            ok = ok && rel <= 0.1 && std::abs(spectral_gap(dd) - exact) <= 1e-12;
            worst = std::max(worst, rel);
        }
    }
    detail << " worst relative deviation " << worst;
    return ok;
}

bool accuracy_guarantee(std::ostringstream &detail) {
    const uint64_t trials = 100000;
    SpectralModel model = spectral_model(28 * 1022);
    double sigma = oracles::binomial_sigma(0.75, trials);
    bool ok = true;
    for (FailureMode mode : {FailureMode::UniformFullRange, FailureMode::AdversarialOffset}) {
        AccuracyModel acc{1.0 / (14 * 1022), 0.75, mode};
        Rng rng(split_seed(2026, static_cast<uint64_t>(mode)));
        uint64_t within = 0;
        for (uint64_t k = 0; k < trials; k++) {
            MeasuredValue mv = sample_with_accuracy(acc, model, rng);
            within += std::abs(mv.value - mv.true_value) <= acc.delta ? 1 : 0;
        }
        double rate = static_cast<double>(within) / trials;
        detail << " " << failure_mode_name(mode) << "=" << rate;
        ok = ok && rate >= 0.75 - 3 * sigma;
    }
    return ok;
}

struct DecisionInstance {
    std::string machine;
    std::string input;
};

bool decision(std::ostringstream &detail) {
    auto start = Clock::now();
    const std::vector<DecisionInstance> cases = {
        {"halt.rtm", "0"}, {"flip.rtm", "00"}, {"flip.rtm", "10"}, {"xor_walker.rtm", "01"}, {"xor_walker.rtm", "11"}};
    const std::vector<uint64_t> sizes = {50, 100, 200, 400};
    std::vector<uint64_t> wrong(sizes.size(), 0);
    std::vector<double> bound(sizes.size(), 0);
    uint64_t trials_per_size = 0;
    uint64_t agree = 0, total = 0;
    bool ok = true;
    for (size_t c = 0; c < cases.size(); c++) {
        RtmSpec spec = load(cases[c].machine);
        auto input = parse_input_word(spec, cases[c].input);
        int f = f_of(spec, input);
        Circuit v = build_wrapper_circuit(spec);
        uint64_t r = wrapper_period(v.layout.counter_bits);
        uint64_t s = v.size();
        SpectralModel model = spectral_model((f == 1 ? 2 : 1) * s * r);
        AccuracyModel acc{1.0 / static_cast<double>(r * s), 0.75, FailureMode::UniformFullRange};

        auto batches = generate_batches(acc, model, r, s, 200, 200, 1000 + c);
        uint64_t filtered = 0, odd = 0;
        for (const auto &b : batches) {
            DecisionResult res = decide(b);
            filtered += res.filtered_count;
            odd += res.odd_count;
            agree += res.verdict == f ? 1 : 0;
            total++;
        }
        double frac = static_cast<double>(odd) / static_cast<double>(filtered);
        double target = f == 1 ? 3.0 / 8 : 1.0 / 4;
        double sigma = oracles::binomial_sigma(target, static_cast<double>(filtered));
        ok = ok && (f == 1 ? frac >= target - 3 * sigma : frac <= target + 3 * sigma);
        detail << " " << cases[c].machine << ":" << cases[c].input << " f=" << f << " odd=" << frac;

        for (size_t k = 0; k < sizes.size(); k++) {
            auto sized = generate_batches(acc, model, r, s, sizes[k], 200, 5000 + 10 * c + k);
            for (const auto &b : sized) {
                DecisionResult res = decide(b);
                wrong[k] += res.verdict == f ? 0 : 1;
                bound[k] += res.confidence_bound;
            }
        }
        trials_per_size += 200;
    }
    detail << " misclassification";
    for (size_t k = 0; k < sizes.size(); k++) {
        double rate = static_cast<double>(wrong[k]) / static_cast<double>(trials_per_size);
        double hoeffding = bound[k] / static_cast<double>(trials_per_size);
        detail << " n=" << sizes[k] << ":" << rate << "<=" << hoeffding;
        ok = ok && rate <= hoeffding;
        if (k > 0) {
            ok = ok && wrong[k] <= wrong[k - 1];
        }
    }
    double agreement = static_cast<double>(agree) / static_cast<double>(total);
    double t = seconds_since(start);
    detail << " agreement=" << agreement << " " << t << "s";
    return ok && agreement >= 0.99 && t < 300;
}

bool phase_estimation(std::ostringstream &detail) {
    bool ok = true;
    for (uint32_t m : {3u, 5u, 8u}) {
        uint64_t grid = uint64_t{1} << m;
        for (uint64_t k = 0; k < grid; k += grid / 8) {
            PhaseEstimationSetup exact{m, {static_cast<double>(k) / static_cast<double>(grid)}, {1.0}};
            auto dist = phase_estimate_distribution(exact);
            ok = ok && std::abs(dist[k] - 1) < 1e-12;
        }
    }
    const uint64_t draws = 10000;
    for (uint32_t m : {4u, 8u}) {
        PhaseEstimationSetup setup{m, {1.0 / 3}, {1.0}};
        auto dist = phase_estimate_distribution(setup);
        auto oracle = oracles::qpe_statevector_distribution(m, {1.0 / 3}, {1.0});
        for (size_t j = 0; j < dist.size(); j++) {
            ok = ok && std::abs(dist[j] - oracle[j]) < 1e-9;
        }
        auto samples = sample_phase_estimates(setup, 77 + m, draws);
        std::vector<uint64_t> counts(dist.size(), 0);
        for (uint64_t x : samples) {
            counts[x]++;
        }
        double tail_p = 0;
        uint64_t tail_count = 0;
        uint32_t bins = 0, bad = 0;
        auto check_bin = [&](double p, uint64_t count) {
            double expected = p * draws;
            double sigma = std::sqrt(draws * p * (1 - p));
            bins++;
            if (std::abs(static_cast<double>(count) - expected) > 3 * sigma) {
                bad++;
            }
        };
        for (size_t j = 0; j < dist.size(); j++) {
            if (dist[j] * draws < 5) {
                tail_p += dist[j];
                tail_count += counts[j];
            } else {
                check_bin(dist[j], counts[j]);
            }
        }
        if (tail_p > 0) {
            check_bin(tail_p, tail_count);
        }
        uint64_t nearest = static_cast<uint64_t>(std::llround(static_cast<double>(uint64_t{1} << m) / 3.0));
        double nearest_p = dist[nearest];
        ok = ok && bad == 0 && std::abs(nearest_p - oracle[nearest]) < 1e-12 &&
             nearest_p >= 4 / (std::numbers::pi * std::numbers::pi);
        detail << " m=" << m << " bins=" << bins << " outside3sigma=" << bad << " p_nearest=" << nearest_p;
    }
    return ok;
}

bool locality(std::ostringstream &detail) {
    bool ok = true;
    for (const auto &inst : instances()) {
        RtmSpec spec = load(inst.machine);
        Circuit v = build_wrapper_circuit(spec);
        LocalityReport rep = locality_report(ForwardOperator(v));
        ok = ok && rep.max_support == 4 && !rep.exceeds_target;
        CompileOptions unmerged;
        unmerged.merge_cells = false;
        Circuit u = build_wrapper_circuit(spec, unmerged);
        LocalityReport wide = locality_report(ForwardOperator(u));
        detail << " " << inst.machine << " merged=" << rep.max_support << " unmerged=" << wide.max_support;
    }
    return ok;
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {1, "orbit length law", orbit_law},
        {2, "register restoration", restoration},
        {3, "clock orbit dimension", clock_orbit},
        {4, "spectrum vs dense oracle", spectrum},
        {5, "spectral gap", spectral_gap_check},
        {6, "accuracy guarantee", accuracy_guarantee},
        {7, "decision separation and decay", decision},
        {8, "phase estimation", phase_estimation},
        {9, "merged locality", locality},
    };
    int failures = 0;
    for (const auto &c : criteria) {
        std::ostringstream detail;
        bool pass = false;
        auto start = Clock::now();
        try {
            pass = c.check(detail);
        } catch (const std::exception &e) {
            detail << " exception: " << e.what();
        }
        std::printf(
            "%s criterion %d %s (%.2fs):%s\n",
            pass ? "PASS" : "FAIL",
            c.number,
            c.name.c_str(),
            seconds_since(start),
            detail.str().c_str());
        std::fflush(stdout);
        failures += pass ? 0 : 1;
    }
    return failures == 0 ? 0 : 1;
}
