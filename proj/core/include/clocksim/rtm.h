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

#ifndef CLOCKSIM_RTM_H
#define CLOCKSIM_RTM_H

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace clocksim {

using StateId = uint32_t;
using Symbol = uint32_t;

/// Every state is exclusively read-and-write, right-moving, left-moving or final.
enum class StateKind : uint8_t { ReadWrite, MoveRight, MoveLeft, Final };

std::string_view state_kind_name(StateKind kind);

/// p -> (q, dir) with dir = +1 or -1.
struct MoveRule {
    StateId from;
    StateId to;
    int dir;
    bool operator==(const MoveRule &) const = default;
};

/// (p, a) -> (q, b).
struct ReadWriteRule {
    StateId from;
    Symbol read;
    StateId to;
    Symbol write;
    bool operator==(const ReadWriteRule &) const = default;
};

using Transition = std::variant<MoveRule, ReadWriteRule>;

struct StateDecl {
    std::string name;
    StateKind kind;
};

/// A reversible Turing machine in moving/read-write normal form over a cyclic
/// tape of `tape_cells` cells. Tape positions are 1-based. Immutable.
///
/// The constructor checks structural invariants (ids in range, rule kinds
/// match their source state, at most one rule per moving state and per
/// (read-write state, symbol)). It does not check totality or reversibility;
/// see check_reversibility.
class RtmSpec {
   public:
    RtmSpec(
        std::vector<StateDecl> states,
        std::vector<std::string> alphabet,
        std::vector<Transition> transitions,
        StateId initial_state,
        uint32_t tape_cells,
        uint32_t result_cell = 1);

    const std::vector<StateDecl> &states() const {
        return states_;
    }
    const std::vector<std::string> &alphabet() const {
        return alphabet_;
    }
    const std::vector<Transition> &transitions() const {
        return transitions_;
    }
    StateId initial_state() const {
        return initial_state_;
    }
    uint32_t tape_cells() const {
        return tape_cells_;
    }
    uint32_t result_cell() const {
        return result_cell_;
    }
    size_t num_states() const {
        return states_.size();
    }
    size_t num_symbols() const {
        return alphabet_.size();
    }
    StateKind kind(StateId s) const {
        return states_[s].kind;
    }
    bool is_final(StateId s) const {
        return states_[s].kind == StateKind::Final;
    }
    bool is_moving(StateId s) const {
        return states_[s].kind == StateKind::MoveRight || states_[s].kind == StateKind::MoveLeft;
    }
    bool is_read_write(StateId s) const {
        return states_[s].kind == StateKind::ReadWrite;
    }

    const MoveRule *move_rule(StateId from) const;
    const ReadWriteRule *rw_rule(StateId from, Symbol read) const;

    std::optional<StateId> find_state(std::string_view name) const;
    std::optional<Symbol> find_symbol(std::string_view name) const;

    /// The symbol named "1", whose presence in the result cell means acceptance.
    std::optional<Symbol> accept_symbol() const {
        return accept_symbol_;
    }

    /// |Q| * N * |Sigma|^N, or nullopt on 64-bit overflow.
    std::optional<uint64_t> configuration_count() const;

   private:
    std::vector<StateDecl> states_;
    std::vector<std::string> alphabet_;
    std::vector<Transition> transitions_;
    StateId initial_state_;
    uint32_t tape_cells_;
    uint32_t result_cell_;
    std::optional<Symbol> accept_symbol_;
    std::vector<int32_t> move_index_;  // per state, index into transitions_ or -1
    std::vector<int32_t> rw_index_;    // per (state, symbol)
};

struct MachineConfig {
    StateId head_state = 0;
    uint32_t tape_index = 1;
    std::vector<Symbol> tape;
    uint64_t steps = 0;

    bool operator==(const MachineConfig &) const = default;
    /// Same head, position and tape; ignores the step count.
    bool same_configuration(const MachineConfig &other) const;
};

struct RunResult {
    bool halted = false;
    MachineConfig final_config;
    int f_of_x = 0;
    uint64_t steps_used = 0;

    bool operator==(const RunResult &) const = default;
};

enum class ViolationKind : uint8_t { NonTotal, Collision };

struct Violation {
    ViolationKind kind;
    std::string message;
    /// For collisions: the shared image and (up to) two of its preimages.
    std::optional<MachineConfig> image;
    std::vector<MachineConfig> preimages;
};

struct ReversibilityReport {
    std::vector<Violation> violations;
    /// Not violations: tape-boundary wraps along runs, simulation hazards, skipped checks.
    std::vector<std::string> warnings;
    uint64_t configurations_checked = 0;
    bool exhaustive = false;
    /// Total collisions found; `violations` stores at most a bounded number of them.
    uint64_t collision_count = 0;

    bool reversible() const {
        return violations.empty();
    }
    std::string to_json() const;
};

/// Parses the line-oriented machine description format. Throws ParseError.
RtmSpec parse_rtm_spec(std::string_view text);
/// Reads and parses a file. Throws std::runtime_error on I/O failure.
RtmSpec load_rtm_spec(const std::string &path);

/// Largest configuration space enumerated exhaustively by check_reversibility.
constexpr uint64_t EXHAUSTIVE_CONFIGURATION_CAP = 4'000'000;

ReversibilityReport check_reversibility(const RtmSpec &spec);

/// Machine configuration with `input` written from cell 1, blanks elsewhere.
MachineConfig initial_config(const RtmSpec &spec, const std::vector<Symbol> &input);

/// Splits on whitespace/commas if present, otherwise one symbol per character.
std::vector<Symbol> parse_input_word(const RtmSpec &spec, std::string_view text);
std::string format_tape(const RtmSpec &spec, const std::vector<Symbol> &tape);

/// One transition. Throws MachineError if the head is final or no rule applies.
MachineConfig step_machine(const RtmSpec &spec, const MachineConfig &config);

/// Steps until a final state or `max_steps` steps. Throws MachineError on a
/// non-total machine; budget exhaustion is reported through `halted = false`.
RunResult run_machine(const RtmSpec &spec, const std::vector<Symbol> &input, uint64_t max_steps);

/// 1 iff the result cell holds the accept symbol.
int read_result(const RtmSpec &spec, const MachineConfig &config);

/// Mixed-radix index of a configuration in [0, configuration_count()).
uint64_t pack_configuration(const RtmSpec &spec, const MachineConfig &config);
MachineConfig unpack_configuration(const RtmSpec &spec, uint64_t index);

}  // namespace clocksim

#endif
