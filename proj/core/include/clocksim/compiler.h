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

#ifndef CLOCKSIM_COMPILER_H
#define CLOCKSIM_COMPILER_H

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "clocksim/rtm.h"

namespace clocksim {

/// A qudit cell. Merged layouts pack several registers into one wire.
struct Wire {
    uint32_t id;
    uint32_t dimension;
};

enum class RegisterKind : uint8_t { Head, TapeIndex, Acc, Tape, Solution, OperationMode, IdleCounter, Counter };

/// Where a register lives: value = (wire value / stride) % dimension.
struct RegisterSlot {
    RegisterKind kind;
    uint32_t tape_cell;  // 1-based for RegisterKind::Tape, else 0
    uint32_t wire;
    uint32_t stride;
    uint32_t dimension;

    std::string name() const;
};

using RegisterId = uint32_t;

/// Operation modes of the wrapper circuit, written as the two mode bits.
enum OperationMode : uint32_t {
    MODE_COMPUTE = 0,        // 00: U, counter++
    MODE_IDLE = 1,           // 01: counter++, idle_counter++
    MODE_REVERSE_IDLE = 2,   // 10: counter--, idle_counter--
    MODE_UNCOMPUTE = 3,      // 11: U^dagger, counter--
};

struct RegisterLayout {
    std::vector<Wire> wires;
    std::vector<RegisterSlot> registers;
    /// ceil(log2 D), D = |Q| * N * |Sigma| * |Sigma|^N.
    uint32_t m = 0;
    uint64_t machine_space = 0;
    bool merged = false;
    /// Width of counter and idle_counter in bits; 0 for a bare step layout.
    uint32_t counter_bits = 0;

    std::optional<RegisterId> find(RegisterKind kind, uint32_t tape_cell = 0) const;
    RegisterId id(RegisterKind kind, uint32_t tape_cell = 0) const;
    const RegisterSlot &slot(RegisterId id) const {
        return registers[id];
    }
    bool has_wrapper_registers() const {
        return counter_bits > 0;
    }
    uint32_t counter_dimension() const {
        return uint32_t{1} << counter_bits;
    }
    /// Product of wire dimensions. Throws LayoutOverflow past 2^62.
    uint64_t state_space() const;
};

struct BasisState {
    std::vector<uint32_t> values;  // one local value per wire

    bool operator==(const BasisState &) const = default;
};

uint32_t get_register(const RegisterLayout &layout, const BasisState &state, RegisterId reg);
void set_register(const RegisterLayout &layout, BasisState &state, RegisterId reg, uint32_t value);
/// Mixed-radix index with wire 0 least significant.
uint64_t pack_state(const RegisterLayout &layout, const BasisState &state);
BasisState unpack_state(const RegisterLayout &layout, uint64_t index);

/// A permutation of the joint basis of its support wires. The local index of
/// a support assignment is mixed-radix with support[0] least significant.
class PermGate {
   public:
    /// Throws BijectionError unless `table` is a permutation of [0, prod(dims)).
    PermGate(std::vector<uint32_t> support, std::vector<uint32_t> dims, std::vector<uint32_t> table, std::string label);

    const std::vector<uint32_t> &support() const {
        return support_;
    }
    const std::vector<uint32_t> &dims() const {
        return dims_;
    }
    const std::vector<uint32_t> &table() const {
        return table_;
    }
    const std::string &label() const {
        return label_;
    }

    void apply(std::vector<uint32_t> &wire_values) const;
    void apply_inverse(std::vector<uint32_t> &wire_values) const;
    PermGate inverse() const;

   private:
    std::vector<uint32_t> support_;
    std::vector<uint32_t> dims_;
    std::vector<uint32_t> table_;
    std::vector<uint32_t> inverse_table_;
    std::string label_;
};

struct Circuit {
    RegisterLayout layout;
    std::vector<PermGate> gates;

    size_t size() const {
        return gates.size();
    }
};

struct CompileOptions {
    /// Merge registers into qudit cells so that every gate touches <= 2 wires.
    bool merge_cells = true;
    /// Override the counter width (default m + 1). Narrower widths throw LayoutOverflow.
    std::optional<uint32_t> counter_bits;
};

/// Apply the controlled gate's forward map when operation_mode == mode
/// (inverse map when `inverse`).
struct ModeControl {
    uint32_t mode;
    bool inverse;
};

/// ceil(log2(|Q| * N * |Sigma|^(N+1))).
uint32_t machine_register_bits(const RtmSpec &spec);

/// Orbit length of the wrapper circuit on a "false" input: 2 (2^bits - 1).
uint64_t wrapper_period(uint32_t counter_bits);

RegisterLayout make_step_layout(const RtmSpec &spec, bool merge_cells);
RegisterLayout make_wrapper_layout(const RtmSpec &spec, const CompileOptions &options);

/// Extends a partial injection on [0, n) (entries < 0 are undefined) to a
/// permutation: points outside both domain and image stay fixed, and each
/// maximal chain y -> ... -> x with y not an image and x not in the domain is
/// closed by mapping x back to y. Throws BijectionError if not injective.
std::vector<uint32_t> complete_partial_injection(const std::vector<int64_t> &partial);

/// Gate over the wires holding `regs`. `fn` rewrites the register values in
/// place (in the order of `regs`); other registers sharing those wires pass
/// through. Throws BijectionError if the result is not a permutation.
PermGate make_register_gate(
    const RegisterLayout &layout,
    std::span<const RegisterId> regs,
    std::string label,
    const std::function<void(std::span<uint32_t>)> &fn);

/// U_moving on {head, tape_index}: |p,i> -> |q,i+-1 mod N> for moving states.
/// With `controls`, acts only in the listed operation modes.
PermGate build_moving_gate(
    const RtmSpec &spec, const RegisterLayout &layout, std::span<const ModeControl> controls = {});

/// W_r/w on {head, ACC}: |p,a> -> |q,b> for read-write rules.
PermGate build_rw_core_gate(
    const RtmSpec &spec, const RegisterLayout &layout, std::span<const ModeControl> controls = {});

/// Lambda_i(SWAP(ACC, tape[i])): swaps ACC and tape cell i when tape_index = i.
PermGate build_controlled_swap(const RegisterLayout &layout, uint32_t cell);

/// U_r/w = prod_i Lambda_i(SWAP) . W_r/w . prod_i Lambda_i(SWAP); 2N + 1 gates.
std::vector<PermGate> build_rw_gates(
    const RtmSpec &spec, const RegisterLayout &layout, std::span<const ModeControl> controls = {});

/// U = U_r/w U_moving over {head, tape_index, ACC, tape}.
Circuit build_step_circuit(const RtmSpec &spec, const CompileOptions &options = {});

/// The self-looping circuit V: compute, idle, reverse idle and uncompute
/// phases driven by operation_mode, counter and idle_counter.
Circuit build_wrapper_circuit(const RtmSpec &spec, const CompileOptions &options = {});

/// |x> on the tape, head in the initial state at cell 1, everything else 0.
BasisState initial_basis_state(const RegisterLayout &layout, const RtmSpec &spec, const std::vector<Symbol> &input);

MachineConfig read_machine_config(const RegisterLayout &layout, const BasisState &state);
void write_machine_config(const RegisterLayout &layout, const MachineConfig &config, BasisState &state);

void apply_circuit_in_place(const Circuit &circuit, BasisState &state);
BasisState apply_circuit(const Circuit &circuit, const BasisState &state);
BasisState apply_circuit_inverse(const Circuit &circuit, const BasisState &state);

/// Smallest r >= 1 with V^r(initial) = initial. Throws BudgetExhausted.
uint64_t circuit_orbit_length(const Circuit &circuit, const BasisState &initial, uint64_t budget);

/// Deterministic JSON dump (layout, header, gate tables).
std::string circuit_to_json(const Circuit &circuit);

}  // namespace clocksim

#endif
