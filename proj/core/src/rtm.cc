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

#include "clocksim/rtm.h"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

#include "clocksim/errors.h"
#include "json.hpp"

namespace clocksim {

namespace {

constexpr size_t MAX_REPORTED_COLLISIONS = 16;

bool mul_overflows(uint64_t a, uint64_t b, uint64_t *out) {
    return __builtin_mul_overflow(a, b, out);
}

std::optional<uint64_t> tape_space(const RtmSpec &spec) {
    uint64_t total = 1;
    for (uint32_t i = 0; i < spec.tape_cells(); i++) {
        if (mul_overflows(total, spec.num_symbols(), &total)) {
            return std::nullopt;
        }
    }
    return total;
}

std::string describe(const RtmSpec &spec, const MachineConfig &c) {
    std::ostringstream out;
    out << "(" << spec.states()[c.head_state].name << ", " << c.tape_index << ", " << format_tape(spec, c.tape) << ")";
    return out.str();
}

nlohmann::json config_json(const MachineConfig &c) {
    nlohmann::json j;
    j["head_state"] = c.head_state;
    j["tape_index"] = c.tape_index;
    j["tape"] = c.tape;
    return j;
}

}  // namespace

std::string_view state_kind_name(StateKind kind) {
    switch (kind) {
        case StateKind::ReadWrite:
            return "rw";
        case StateKind::MoveRight:
            return "right";
        case StateKind::MoveLeft:
            return "left";
        case StateKind::Final:
            return "final";
    }
    return "?";
}

RtmSpec::RtmSpec(
    std::vector<StateDecl> states,
    std::vector<std::string> alphabet,
    std::vector<Transition> transitions,
    StateId initial_state,
    uint32_t tape_cells,
    uint32_t result_cell)
    : states_(std::move(states)),
      alphabet_(std::move(alphabet)),
      transitions_(std::move(transitions)),
      initial_state_(initial_state),
      tape_cells_(tape_cells),
      result_cell_(result_cell) {
    if (states_.empty()) {
        throw std::invalid_argument("machine has no states");
    }
    if (alphabet_.empty()) {
        throw std::invalid_argument("machine has an empty alphabet");
    }
    if (tape_cells_ == 0) {
        throw std::invalid_argument("tape_cells must be positive");
    }
    if (result_cell_ < 1 || result_cell_ > tape_cells_) {
        throw std::invalid_argument("result_cell must lie in [1, tape_cells]");
    }
    if (initial_state_ >= states_.size()) {
        throw std::invalid_argument("initial state out of range");
    }
    for (size_t a = 0; a < states_.size(); a++) {
        for (size_t b = a + 1; b < states_.size(); b++) {
            if (states_[a].name == states_[b].name) {
                throw std::invalid_argument("duplicate state '" + states_[a].name + "'");
            }
        }
    }
    for (size_t a = 0; a < alphabet_.size(); a++) {
        for (size_t b = a + 1; b < alphabet_.size(); b++) {
            if (alphabet_[a] == alphabet_[b]) {
                throw std::invalid_argument("duplicate symbol '" + alphabet_[a] + "'");
            }
        }
        if (alphabet_[a] == "1") {
            accept_symbol_ = static_cast<Symbol>(a);
        }
    }

    move_index_.assign(states_.size(), -1);
    rw_index_.assign(states_.size() * alphabet_.size(), -1);
    for (size_t k = 0; k < transitions_.size(); k++) {
        const auto &t = transitions_[k];
        if (const auto *mv = std::get_if<MoveRule>(&t)) {
            if (mv->from >= states_.size() || mv->to >= states_.size()) {
                throw std::invalid_argument("move rule references an unknown state");
            }
            StateKind expected = mv->dir == +1 ? StateKind::MoveRight : StateKind::MoveLeft;
            if (mv->dir != +1 && mv->dir != -1) {
                throw std::invalid_argument("move direction must be +1 or -1");
            }
            if (states_[mv->from].kind != expected) {
                throw std::invalid_argument(
                    "kind mismatch: move from '" + states_[mv->from].name + "' which is " +
                    std::string(state_kind_name(states_[mv->from].kind)));
            }
            if (move_index_[mv->from] != -1) {
                throw std::invalid_argument("duplicate move rule for '" + states_[mv->from].name + "'");
            }
            move_index_[mv->from] = static_cast<int32_t>(k);
        } else {
            const auto &rw = std::get<ReadWriteRule>(t);
            if (rw.from >= states_.size() || rw.to >= states_.size()) {
                throw std::invalid_argument("read-write rule references an unknown state");
            }
            if (rw.read >= alphabet_.size() || rw.write >= alphabet_.size()) {
                throw std::invalid_argument("read-write rule references an unknown symbol");
            }
            if (states_[rw.from].kind != StateKind::ReadWrite) {
                throw std::invalid_argument(
                    "kind mismatch: read-write from '" + states_[rw.from].name + "' which is " +
                    std::string(state_kind_name(states_[rw.from].kind)));
            }
            auto &slot = rw_index_[rw.from * alphabet_.size() + rw.read];
            if (slot != -1) {
                throw std::invalid_argument(
                    "duplicate read-write rule for ('" + states_[rw.from].name + "', '" + alphabet_[rw.read] + "')");
            }
            slot = static_cast<int32_t>(k);
        }
    }
}

const MoveRule *RtmSpec::move_rule(StateId from) const {
    int32_t k = move_index_[from];
    return k < 0 ? nullptr : &std::get<MoveRule>(transitions_[k]);
}

const ReadWriteRule *RtmSpec::rw_rule(StateId from, Symbol read) const {
    int32_t k = rw_index_[from * alphabet_.size() + read];
    return k < 0 ? nullptr : &std::get<ReadWriteRule>(transitions_[k]);
}

std::optional<StateId> RtmSpec::find_state(std::string_view name) const {
    for (size_t k = 0; k < states_.size(); k++) {
        if (states_[k].name == name) {
            return static_cast<StateId>(k);
        }
    }
    return std::nullopt;
}

std::optional<Symbol> RtmSpec::find_symbol(std::string_view name) const {
    for (size_t k = 0; k < alphabet_.size(); k++) {
        if (alphabet_[k] == name) {
            return static_cast<Symbol>(k);
        }
    }
    return std::nullopt;
}

std::optional<uint64_t> RtmSpec::configuration_count() const {
    auto tapes = tape_space(*this);
    if (!tapes) {
        return std::nullopt;
    }
    uint64_t total;
    if (mul_overflows(*tapes, num_states(), &total) || mul_overflows(total, tape_cells_, &total)) {
        return std::nullopt;
    }
    return total;
}

bool MachineConfig::same_configuration(const MachineConfig &other) const {
    return head_state == other.head_state && tape_index == other.tape_index && tape == other.tape;
}

uint64_t pack_configuration(const RtmSpec &spec, const MachineConfig &config) {
    uint64_t tape_code = 0;
    for (size_t i = config.tape.size(); i-- > 0;) {
        tape_code = tape_code * spec.num_symbols() + config.tape[i];
    }
    uint64_t head_pos = uint64_t{config.head_state} * spec.tape_cells() + (config.tape_index - 1);
    return head_pos * *tape_space(spec) + tape_code;
}

MachineConfig unpack_configuration(const RtmSpec &spec, uint64_t index) {
    uint64_t tapes = *tape_space(spec);
    MachineConfig c;
    uint64_t tape_code = index % tapes;
    uint64_t head_pos = index / tapes;
    c.tape_index = static_cast<uint32_t>(head_pos % spec.tape_cells()) + 1;
    c.head_state = static_cast<StateId>(head_pos / spec.tape_cells());
    c.tape.resize(spec.tape_cells());
    for (auto &cell : c.tape) {
        cell = static_cast<Symbol>(tape_code % spec.num_symbols());
        tape_code /= spec.num_symbols();
    }
    return c;
}

MachineConfig initial_config(const RtmSpec &spec, const std::vector<Symbol> &input) {
    if (input.size() > spec.tape_cells()) {
        throw std::invalid_argument(
            "input of length " + std::to_string(input.size()) + " exceeds " + std::to_string(spec.tape_cells()) +
            " tape cells");
    }
    MachineConfig c;
    c.head_state = spec.initial_state();
    c.tape_index = 1;
    c.tape.assign(spec.tape_cells(), 0);
    for (size_t i = 0; i < input.size(); i++) {
        if (input[i] >= spec.num_symbols()) {
            throw std::invalid_argument("input symbol out of range");
        }
        c.tape[i] = input[i];
    }
    return c;
}

std::vector<Symbol> parse_input_word(const RtmSpec &spec, std::string_view text) {
    std::vector<std::string> tokens;
    bool separated = text.find_first_of(" \t,") != std::string_view::npos;
    if (separated) {
        std::string cur;
        for (char ch : text) {
            if (ch == ' ' || ch == '\t' || ch == ',') {
                if (!cur.empty()) {
                    tokens.push_back(cur);
                    cur.clear();
                }
            } else {
                cur.push_back(ch);
            }
        }
        if (!cur.empty()) {
            tokens.push_back(cur);
        }
    } else {
        for (char ch : text) {
            tokens.emplace_back(1, ch);
        }
    }
    std::vector<Symbol> word;
    for (const auto &tok : tokens) {
        auto sym = spec.find_symbol(tok);
        if (!sym) {
            throw std::invalid_argument("input symbol '" + tok + "' is not in the alphabet");
        }
        word.push_back(*sym);
    }
    if (word.size() > spec.tape_cells()) {
        throw std::invalid_argument("input longer than the tape");
    }
    return word;
}

std::string format_tape(const RtmSpec &spec, const std::vector<Symbol> &tape) {
    bool single_char = std::all_of(spec.alphabet().begin(), spec.alphabet().end(), [](const std::string &s) {
        return s.size() == 1;
    });
    std::string out;
    for (size_t i = 0; i < tape.size(); i++) {
        if (!single_char && i > 0) {
            out += ',';
        }
        out += spec.alphabet()[tape[i]];
    }
    return out;
}

MachineConfig step_machine(const RtmSpec &spec, const MachineConfig &config) {
    const StateId p = config.head_state;
    if (spec.is_final(p)) {
        throw MachineError("cannot step: head state '" + spec.states()[p].name + "' is final");
    }
    MachineConfig next = config;
    next.steps++;
    if (spec.is_moving(p)) {
        const MoveRule *rule = spec.move_rule(p);
        if (rule == nullptr) {
            throw MachineError("no move rule for state '" + spec.states()[p].name + "'");
        }
        const uint32_t n = spec.tape_cells();
        // 1-based index arithmetic modulo N.
        uint32_t zero_based = config.tape_index - 1;
        zero_based = rule->dir > 0 ? (zero_based + 1) % n : (zero_based + n - 1) % n;
        next.tape_index = zero_based + 1;
        next.head_state = rule->to;
        return next;
    }
    Symbol scanned = config.tape[config.tape_index - 1];
    const ReadWriteRule *rule = spec.rw_rule(p, scanned);
    if (rule == nullptr) {
        throw MachineError(
            "no read-write rule for ('" + spec.states()[p].name + "', '" + spec.alphabet()[scanned] + "')");
    }
    next.tape[config.tape_index - 1] = rule->write;
    next.head_state = rule->to;
    return next;
}

int read_result(const RtmSpec &spec, const MachineConfig &config) {
    auto accept = spec.accept_symbol();
    return accept && config.tape[spec.result_cell() - 1] == *accept ? 1 : 0;
}

RunResult run_machine(const RtmSpec &spec, const std::vector<Symbol> &input, uint64_t max_steps) {
    MachineConfig c = initial_config(spec, input);
    while (!spec.is_final(c.head_state) && c.steps < max_steps) {
        c = step_machine(spec, c);
    }
    RunResult result;
    result.halted = spec.is_final(c.head_state);
    result.steps_used = c.steps;
    result.f_of_x = read_result(spec, c);
    result.final_config = std::move(c);
    return result;
}

namespace {

void check_totality(const RtmSpec &spec, ReversibilityReport &report) {
    for (StateId p = 0; p < spec.num_states(); p++) {
        const auto &name = spec.states()[p].name;
        if (spec.is_moving(p) && spec.move_rule(p) == nullptr) {
            report.violations.push_back(
                {ViolationKind::NonTotal, "step map undefined: moving state '" + name + "' has no move rule", {}, {}});
        }
        if (spec.is_read_write(p)) {
            for (Symbol a = 0; a < spec.num_symbols(); a++) {
                if (spec.rw_rule(p, a) == nullptr) {
                    report.violations.push_back(
                        {ViolationKind::NonTotal,
                         "step map undefined/non-total on ('" + name + "', '" + spec.alphabet()[a] + "') configurations",
                         {},
                         {}});
                }
            }
        }
    }
}

bool step_defined(const RtmSpec &spec, const MachineConfig &c) {
    StateId p = c.head_state;
    if (spec.is_final(p)) {
        return false;
    }
    if (spec.is_moving(p)) {
        return spec.move_rule(p) != nullptr;
    }
    return spec.rw_rule(p, c.tape[c.tape_index - 1]) != nullptr;
}

void check_exhaustive(const RtmSpec &spec, uint64_t total, ReversibilityReport &report) {
    // preimage_of[image] = preimage + 1, or 0 when unseen.
    std::vector<uint64_t> preimage_of(total, 0);
    for (uint64_t k = 0; k < total; k++) {
        MachineConfig c = unpack_configuration(spec, k);
        if (!step_defined(spec, c)) {
            continue;
        }
        report.configurations_checked++;
        MachineConfig image = step_machine(spec, c);
        uint64_t key = pack_configuration(spec, image);
        if (preimage_of[key] == 0) {
            preimage_of[key] = k + 1;
            continue;
        }
        report.collision_count++;
        if (report.collision_count <= MAX_REPORTED_COLLISIONS) {
            MachineConfig first = unpack_configuration(spec, preimage_of[key] - 1);
            image.steps = 0;
            Violation v;
            v.kind = ViolationKind::Collision;
            v.message = "backward-determinism violation: " + describe(spec, first) + " and " + describe(spec, c) +
                        " both step to " + describe(spec, image);
            v.image = image;
            v.preimages = {first, c};
            report.violations.push_back(std::move(v));
        }
    }
    report.exhaustive = true;
}

// Rule-level condition equivalent to injectivity of the step map on a cyclic
// tape: a state entered by a move is entered by no other rule, and distinct
// read-write rules entering the same state write distinct symbols.
void check_local(const RtmSpec &spec, ReversibilityReport &report) {
    std::map<StateId, std::vector<const Transition *>> by_target;
    for (const auto &t : spec.transitions()) {
        StateId to = std::visit([](const auto &r) { return r.to; }, t);
        by_target[to].push_back(&t);
    }
    for (const auto &[target, rules] : by_target) {
        for (size_t a = 0; a < rules.size(); a++) {
            for (size_t b = a + 1; b < rules.size(); b++) {
                const auto *ra = std::get_if<ReadWriteRule>(rules[a]);
                const auto *rb = std::get_if<ReadWriteRule>(rules[b]);
                if (ra != nullptr && rb != nullptr && ra->write != rb->write) {
                    continue;
                }
                report.collision_count++;
                if (report.collision_count <= MAX_REPORTED_COLLISIONS) {
                    report.violations.push_back(
                        {ViolationKind::Collision,
                         "backward-determinism violation: two rules enter '" + spec.states()[target].name +
                             "' with indistinguishable images",
                         {},
                         {}});
                }
            }
        }
    }
}

void trace_boundary_wraps(const RtmSpec &spec, uint64_t tapes, uint64_t budget, ReversibilityReport &report) {
    uint64_t wrapped_runs = 0;
    std::string first_example;
    for (uint64_t code = 0; code < tapes; code++) {
        MachineConfig c;
        c.head_state = spec.initial_state();
        c.tape_index = 1;
        c.tape.resize(spec.tape_cells());
        uint64_t rest = code;
        for (auto &cell : c.tape) {
            cell = static_cast<Symbol>(rest % spec.num_symbols());
            rest /= spec.num_symbols();
        }
        std::string start = format_tape(spec, c.tape);
        while (c.steps < budget && step_defined(spec, c)) {
            const MoveRule *mv = spec.is_moving(c.head_state) ? spec.move_rule(c.head_state) : nullptr;
            bool wraps = mv != nullptr && ((mv->dir > 0 && c.tape_index == spec.tape_cells()) ||
                                           (mv->dir < 0 && c.tape_index == 1));
            if (wraps) {
                if (wrapped_runs++ == 0) {
                    first_example = "run on tape " + start + " moves '" + spec.states()[c.head_state].name +
                                    "' across the tape boundary at cell " + std::to_string(c.tape_index);
                }
                break;
            }
            c = step_machine(spec, c);
        }
    }
    if (wrapped_runs > 0) {
        report.warnings.push_back(
            "boundary move wraps modulo N on " + std::to_string(wrapped_runs) + " input tape(s); e.g. " +
            first_example);
    }
}

void check_simulation_hazards(const RtmSpec &spec, ReversibilityReport &report) {
    // The compiled step circuit fixes a configuration only if no rule of the
    // relevant kind enters its head state; a halted initial state must be
    // entered by nothing, a read-write one by no move.
    StateId init = spec.initial_state();
    if (spec.is_moving(init)) {
        return;
    }
    for (const auto &t : spec.transitions()) {
        const auto *mv = std::get_if<MoveRule>(&t);
        const auto *rw = std::get_if<ReadWriteRule>(&t);
        bool enters = (mv != nullptr && mv->to == init) || (rw != nullptr && rw->to == init && spec.is_final(init));
        if (enters) {
            report.warnings.push_back(
                "initial state '" + spec.states()[init].name +
                "' is entered by a rule; the compiled step circuit will not start from it faithfully");
            return;
        }
    }
}

}  // namespace

ReversibilityReport check_reversibility(const RtmSpec &spec) {
    ReversibilityReport report;
    check_totality(spec, report);
    auto total = spec.configuration_count();
    if (total && *total <= EXHAUSTIVE_CONFIGURATION_CAP) {
        check_exhaustive(spec, *total, report);
        trace_boundary_wraps(spec, *tape_space(spec), *total, report);
    } else {
        check_local(spec, report);
        report.warnings.push_back("configuration space too large for exhaustive enumeration; checked rule-level conditions");
    }
    check_simulation_hazards(spec, report);
    return report;
}

std::string ReversibilityReport::to_json() const {
    nlohmann::json j;
    j["reversible"] = reversible();
    j["exhaustive"] = exhaustive;
    j["configurations_checked"] = configurations_checked;
    j["collision_count"] = collision_count;
    j["warnings"] = warnings;
    j["violations"] = nlohmann::json::array();
    for (const auto &v : violations) {
        nlohmann::json e;
        e["kind"] = v.kind == ViolationKind::NonTotal ? "non_total" : "collision";
        e["message"] = v.message;
        if (v.image) {
            e["image"] = config_json(*v.image);
            e["preimages"] = nlohmann::json::array();
            for (const auto &p : v.preimages) {
                e["preimages"].push_back(config_json(p));
            }
        }
        j["violations"].push_back(std::move(e));
    }
    return j.dump(2) + "\n";
}

}  // namespace clocksim
