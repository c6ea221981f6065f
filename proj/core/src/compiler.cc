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

#include "clocksim/compiler.h"

#include <algorithm>
#include <stdexcept>

#include "clocksim/errors.h"
#include "json.hpp"

namespace clocksim {

namespace {

constexpr uint64_t MAX_GATE_TABLE = uint64_t{1} << 24;
constexpr uint32_t MAX_COUNTER_BITS = 20;

struct RegisterSpec {
    RegisterKind kind;
    uint32_t tape_cell;
    uint32_t dimension;
};

void add_wire(RegisterLayout &layout, std::initializer_list<RegisterSpec> regs) {
    uint32_t wire = static_cast<uint32_t>(layout.wires.size());
    uint64_t stride = 1;
    for (const auto &r : regs) {
        layout.registers.push_back({r.kind, r.tape_cell, wire, static_cast<uint32_t>(stride), r.dimension});
        stride *= r.dimension;
    }
    if (stride > 0xFFFFFFFFull || stride < 2) {
        throw LayoutOverflow("wire dimension " + std::to_string(stride) + " is out of range");
    }
    layout.wires.push_back({wire, static_cast<uint32_t>(stride)});
}

void add_unmerged_machine_wires(RegisterLayout &layout, const RtmSpec &spec, bool skip_result_cell) {
    const auto sigma = static_cast<uint32_t>(spec.num_symbols());
    for (uint32_t cell = 1; cell <= spec.tape_cells(); cell++) {
        if (skip_result_cell && cell == spec.result_cell()) {
            continue;
        }
        add_wire(layout, {{RegisterKind::Tape, cell, sigma}});
    }
}

// Dimension-1 registers (a one-state machine, a single tape cell) still get a
// wire of dimension >= 2 by padding; the padding values are never reached.
uint32_t at_least_two(size_t n) {
    return static_cast<uint32_t>(std::max<size_t>(n, 2));
}

uint32_t local_index(const PermGate &gate, const std::vector<uint32_t> &values) {
    uint32_t idx = 0;
    uint32_t radix = 1;
    for (size_t k = 0; k < gate.support().size(); k++) {
        idx += values[gate.support()[k]] * radix;
        radix *= gate.dims()[k];
    }
    return idx;
}

void store_local(const PermGate &gate, uint32_t idx, std::vector<uint32_t> &values) {
    for (size_t k = 0; k < gate.support().size(); k++) {
        values[gate.support()[k]] = idx % gate.dims()[k];
        idx /= gate.dims()[k];
    }
}

std::vector<uint32_t> invert_table(const std::vector<uint32_t> &table) {
    std::vector<uint32_t> inv(table.size());
    for (uint32_t k = 0; k < table.size(); k++) {
        inv[table[k]] = k;
    }
    return inv;
}

std::string mode_label(std::span<const ModeControl> controls) {
    if (controls.empty()) {
        return "";
    }
    std::string out = "[";
    for (size_t k = 0; k < controls.size(); k++) {
        static const char *names[] = {"00", "01", "10", "11"};
        if (k > 0) {
            out += ",";
        }
        out += names[controls[k].mode & 3];
        out += controls[k].inverse ? ":inverse" : ":forward";
    }
    return out + "]";
}

// Applies `perm` (or its inverse) to a pair of registers packed as a * radix + b,
// conditioned on the operation mode when `controls` is nonempty.
PermGate make_pair_gate(
    const RegisterLayout &layout,
    RegisterId first,
    RegisterId second,
    uint32_t radix,
    const std::vector<uint32_t> &perm,
    std::span<const ModeControl> controls,
    std::string label) {
    std::vector<uint32_t> inv = invert_table(perm);
    std::vector<RegisterId> regs = {first, second};
    if (!controls.empty()) {
        regs.push_back(layout.id(RegisterKind::OperationMode));
    }
    std::vector<ModeControl> ctl(controls.begin(), controls.end());
    return make_register_gate(layout, regs, label + mode_label(controls), [&](std::span<uint32_t> v) {
        const std::vector<uint32_t> *map = &perm;
        if (!ctl.empty()) {
            map = nullptr;
            for (const auto &c : ctl) {
                if (v[2] == c.mode) {
                    map = c.inverse ? &inv : &perm;
                }
            }
            if (map == nullptr) {
                return;
            }
        }
        if (v[1] >= radix || uint64_t{v[0]} * radix >= map->size()) {
            return;  // padding values of a dimension-1 register
        }
        uint32_t packed = v[0] * radix + v[1];
        uint32_t out = (*map)[packed];
        v[0] = out / radix;
        v[1] = out % radix;
    });
}

}  // namespace

std::string RegisterSlot::name() const {
    switch (kind) {
        case RegisterKind::Head:
            return "head";
        case RegisterKind::TapeIndex:
            return "tape_index";
        case RegisterKind::Acc:
            return "ACC";
        case RegisterKind::Tape:
            return "tape[" + std::to_string(tape_cell) + "]";
        case RegisterKind::Solution:
            return "solution";
        case RegisterKind::OperationMode:
            return "operation_mode";
        case RegisterKind::IdleCounter:
            return "idle_counter";
        case RegisterKind::Counter:
            return "counter";
    }
    return "?";
}

std::optional<RegisterId> RegisterLayout::find(RegisterKind kind, uint32_t tape_cell) const {
    for (size_t k = 0; k < registers.size(); k++) {
        if (registers[k].kind == kind && registers[k].tape_cell == tape_cell) {
            return static_cast<RegisterId>(k);
        }
    }
    return std::nullopt;
}

RegisterId RegisterLayout::id(RegisterKind kind, uint32_t tape_cell) const {
    auto r = find(kind, tape_cell);
    if (!r) {
        throw std::invalid_argument("layout has no register " + RegisterSlot{kind, tape_cell, 0, 0, 0}.name());
    }
    return *r;
}

uint64_t RegisterLayout::state_space() const {
    uint64_t total = 1;
    for (const auto &w : wires) {
        if (__builtin_mul_overflow(total, w.dimension, &total) || total > (uint64_t{1} << 62)) {
            throw LayoutOverflow("register space exceeds 2^62 basis states");
        }
    }
    return total;
}

uint32_t get_register(const RegisterLayout &layout, const BasisState &state, RegisterId reg) {
    const auto &s = layout.slot(reg);
    return (state.values[s.wire] / s.stride) % s.dimension;
}

void set_register(const RegisterLayout &layout, BasisState &state, RegisterId reg, uint32_t value) {
    const auto &s = layout.slot(reg);
    if (value >= s.dimension) {
        throw std::invalid_argument("value out of range for register " + s.name());
    }
    uint32_t &w = state.values[s.wire];
    uint32_t old = (w / s.stride) % s.dimension;
    w = w - old * s.stride + value * s.stride;
}

uint64_t pack_state(const RegisterLayout &layout, const BasisState &state) {
    uint64_t idx = 0;
    for (size_t k = layout.wires.size(); k-- > 0;) {
        idx = idx * layout.wires[k].dimension + state.values[k];
    }
    return idx;
}

BasisState unpack_state(const RegisterLayout &layout, uint64_t index) {
    BasisState s;
    s.values.resize(layout.wires.size());
    for (size_t k = 0; k < layout.wires.size(); k++) {
        s.values[k] = static_cast<uint32_t>(index % layout.wires[k].dimension);
        index /= layout.wires[k].dimension;
    }
    return s;
}

PermGate::PermGate(
    std::vector<uint32_t> support, std::vector<uint32_t> dims, std::vector<uint32_t> table, std::string label)
    : support_(std::move(support)), dims_(std::move(dims)), table_(std::move(table)), label_(std::move(label)) {
    if (support_.empty() || support_.size() != dims_.size()) {
        throw std::invalid_argument("gate '" + label_ + "': support and dimension lists must be nonempty and equal length");
    }
    uint64_t total = 1;
    for (uint32_t d : dims_) {
        if (d < 2) {
            throw std::invalid_argument("gate '" + label_ + "': wire dimension must be >= 2");
        }
        total *= d;
    }
    if (table_.size() != total) {
        throw BijectionError("gate '" + label_ + "': table size does not match support dimensions");
    }
    std::vector<bool> hit(total, false);
    for (uint32_t v : table_) {
        if (v >= total || hit[v]) {
            throw BijectionError("gate '" + label_ + "': table is not a bijection");
        }
        hit[v] = true;
    }
    inverse_table_ = invert_table(table_);
}

void PermGate::apply(std::vector<uint32_t> &wire_values) const {
    store_local(*this, table_[local_index(*this, wire_values)], wire_values);
}

void PermGate::apply_inverse(std::vector<uint32_t> &wire_values) const {
    store_local(*this, inverse_table_[local_index(*this, wire_values)], wire_values);
}

PermGate PermGate::inverse() const {
    return PermGate(support_, dims_, inverse_table_, label_ + "^-1");
}

uint32_t machine_register_bits(const RtmSpec &spec) {
    uint64_t d = uint64_t{spec.num_states()} * spec.tape_cells() * spec.num_symbols();
    for (uint32_t i = 0; i < spec.tape_cells(); i++) {
        if (__builtin_mul_overflow(d, spec.num_symbols(), &d) || d > (uint64_t{1} << 62)) {
            throw LayoutOverflow("machine register space exceeds 2^62");
        }
    }
    uint32_t m = 0;
    while ((uint64_t{1} << m) < d) {
        m++;
    }
    return m;
}

uint64_t wrapper_period(uint32_t counter_bits) {
    return 2 * ((uint64_t{1} << counter_bits) - 1);
}

RegisterLayout make_step_layout(const RtmSpec &spec, bool merge_cells) {
    RegisterLayout layout;
    layout.merged = merge_cells;
    layout.m = machine_register_bits(spec);
    layout.machine_space = uint64_t{1} << layout.m;
    const uint32_t q = at_least_two(spec.num_states());
    const uint32_t n = spec.tape_cells();
    const auto sigma = static_cast<uint32_t>(spec.num_symbols());
    add_wire(layout, {{RegisterKind::Head, 0, q}});
    if (merge_cells) {
        add_wire(layout, {{RegisterKind::TapeIndex, 0, n}, {RegisterKind::Acc, 0, sigma}});
    } else {
        add_wire(layout, {{RegisterKind::TapeIndex, 0, at_least_two(n)}});
        add_wire(layout, {{RegisterKind::Acc, 0, sigma}});
    }
    add_unmerged_machine_wires(layout, spec, false);
    return layout;
}

RegisterLayout make_wrapper_layout(const RtmSpec &spec, const CompileOptions &options) {
    const uint32_t m = machine_register_bits(spec);
    const uint32_t bits = options.counter_bits.value_or(m + 1);
    if (bits < m + 1) {
        throw LayoutOverflow(
            "counter width " + std::to_string(bits) + " bits cannot reach 2^(m+1)-1 with m = " + std::to_string(m));
    }
    if (bits > MAX_COUNTER_BITS) {
        throw LayoutOverflow("counter width " + std::to_string(bits) + " bits exceeds the table-based gate limit");
    }
    RegisterLayout layout;
    layout.merged = options.merge_cells;
    layout.m = m;
    layout.counter_bits = bits;
    {
        uint64_t d = uint64_t{spec.num_states()} * spec.tape_cells() * spec.num_symbols();
        for (uint32_t i = 0; i < spec.tape_cells(); i++) {
            d *= spec.num_symbols();
        }
        layout.machine_space = d;
    }
    const uint32_t q = static_cast<uint32_t>(spec.num_states());
    const uint32_t n = spec.tape_cells();
    const auto sigma = static_cast<uint32_t>(spec.num_symbols());
    const uint32_t c = uint32_t{1} << bits;
    if (options.merge_cells) {
        add_wire(
            layout,
            {{RegisterKind::Head, 0, q},
             {RegisterKind::OperationMode, 0, 4},
             {RegisterKind::Tape, spec.result_cell(), sigma}});
        add_wire(layout, {{RegisterKind::TapeIndex, 0, n}, {RegisterKind::Acc, 0, sigma}});
        add_unmerged_machine_wires(layout, spec, true);
        add_wire(layout, {{RegisterKind::Counter, 0, c}, {RegisterKind::Solution, 0, 2}});
        add_wire(layout, {{RegisterKind::IdleCounter, 0, c}});
    } else {
        add_wire(layout, {{RegisterKind::Head, 0, at_least_two(q)}});
        add_wire(layout, {{RegisterKind::TapeIndex, 0, at_least_two(n)}});
        add_wire(layout, {{RegisterKind::Acc, 0, sigma}});
        add_unmerged_machine_wires(layout, spec, false);
        add_wire(layout, {{RegisterKind::Solution, 0, 2}});
        add_wire(layout, {{RegisterKind::OperationMode, 0, 4}});
        add_wire(layout, {{RegisterKind::IdleCounter, 0, c}});
        add_wire(layout, {{RegisterKind::Counter, 0, c}});
    }
    return layout;
}

std::vector<uint32_t> complete_partial_injection(const std::vector<int64_t> &partial) {
    const size_t n = partial.size();
    std::vector<uint32_t> perm(n);
    std::vector<bool> in_image(n, false);
    for (size_t x = 0; x < n; x++) {
        int64_t y = partial[x];
        if (y < 0) {
            continue;
        }
        if (static_cast<size_t>(y) >= n) {
            throw BijectionError("partial map leaves its domain");
        }
        if (in_image[y]) {
            throw BijectionError("partial map is not injective: two points map to " + std::to_string(y));
        }
        in_image[y] = true;
        perm[x] = static_cast<uint32_t>(y);
    }
    for (size_t x = 0; x < n; x++) {
        if (partial[x] < 0 && !in_image[x]) {
            perm[x] = static_cast<uint32_t>(x);
        }
    }
    for (size_t start = 0; start < n; start++) {
        if (partial[start] < 0 || in_image[start]) {
            continue;
        }
        size_t end = start;
        while (partial[end] >= 0) {
            end = static_cast<size_t>(partial[end]);
        }
        perm[end] = static_cast<uint32_t>(start);
    }
    return perm;
}

PermGate make_register_gate(
    const RegisterLayout &layout,
    std::span<const RegisterId> regs,
    std::string label,
    const std::function<void(std::span<uint32_t>)> &fn) {
    std::vector<uint32_t> support;
    for (RegisterId r : regs) {
        support.push_back(layout.slot(r).wire);
    }
    std::sort(support.begin(), support.end());
    support.erase(std::unique(support.begin(), support.end()), support.end());
    std::vector<uint32_t> dims;
    uint64_t total = 1;
    for (uint32_t w : support) {
        dims.push_back(layout.wires[w].dimension);
        total *= layout.wires[w].dimension;
        if (total > MAX_GATE_TABLE) {
            throw LayoutOverflow("gate '" + label + "' support exceeds " + std::to_string(MAX_GATE_TABLE) + " basis states");
        }
    }

    std::vector<uint32_t> values(layout.wires.size(), 0);
    std::vector<uint32_t> regvals(regs.size());
    std::vector<uint32_t> table(total);
    for (uint32_t idx = 0; idx < total; idx++) {
        uint32_t rest = idx;
        for (size_t k = 0; k < support.size(); k++) {
            values[support[k]] = rest % dims[k];
            rest /= dims[k];
        }
        for (size_t k = 0; k < regs.size(); k++) {
            const auto &s = layout.slot(regs[k]);
            regvals[k] = (values[s.wire] / s.stride) % s.dimension;
        }
        fn(regvals);
        for (size_t k = 0; k < regs.size(); k++) {
            const auto &s = layout.slot(regs[k]);
            if (regvals[k] >= s.dimension) {
                throw BijectionError("gate '" + label + "' produced an out-of-range value for " + s.name());
            }
            uint32_t old = (values[s.wire] / s.stride) % s.dimension;
            values[s.wire] = values[s.wire] - old * s.stride + regvals[k] * s.stride;
        }
        uint32_t out = 0;
        uint32_t radix = 1;
        for (size_t k = 0; k < support.size(); k++) {
            out += values[support[k]] * radix;
            radix *= dims[k];
        }
        table[idx] = out;
    }
    return PermGate(std::move(support), std::move(dims), std::move(table), std::move(label));
}

PermGate build_moving_gate(const RtmSpec &spec, const RegisterLayout &layout, std::span<const ModeControl> controls) {
    const uint32_t n = spec.tape_cells();
    std::vector<int64_t> partial(spec.num_states() * n, -1);
    for (const auto &t : spec.transitions()) {
        const auto *mv = std::get_if<MoveRule>(&t);
        if (mv == nullptr) {
            continue;
        }
        for (uint32_t i = 0; i < n; i++) {
            uint32_t j = mv->dir > 0 ? (i + 1) % n : (i + n - 1) % n;
            partial[mv->from * n + i] = int64_t{mv->to} * n + j;
        }
    }
    std::vector<uint32_t> perm;
    try {
        perm = complete_partial_injection(partial);
    } catch (const BijectionError &e) {
        throw BijectionError(std::string("U_moving: ") + e.what() + " (non-reversible machine)");
    }
    return make_pair_gate(
        layout, layout.id(RegisterKind::Head), layout.id(RegisterKind::TapeIndex), n, perm, controls, "move");
}

PermGate build_rw_core_gate(const RtmSpec &spec, const RegisterLayout &layout, std::span<const ModeControl> controls) {
    const auto sigma = static_cast<uint32_t>(spec.num_symbols());
    std::vector<int64_t> partial(spec.num_states() * sigma, -1);
    for (const auto &t : spec.transitions()) {
        if (const auto *rw = std::get_if<ReadWriteRule>(&t)) {
            partial[rw->from * sigma + rw->read] = int64_t{rw->to} * sigma + rw->write;
        }
    }
    std::vector<uint32_t> perm;
    try {
        perm = complete_partial_injection(partial);
    } catch (const BijectionError &e) {
        throw BijectionError(std::string("W_r/w: ") + e.what() + " (non-reversible machine)");
    }
    return make_pair_gate(
        layout, layout.id(RegisterKind::Head), layout.id(RegisterKind::Acc), sigma, perm, controls, "rw");
}

PermGate build_controlled_swap(const RegisterLayout &layout, uint32_t cell) {
    const RegisterId regs[] = {
        layout.id(RegisterKind::TapeIndex), layout.id(RegisterKind::Acc), layout.id(RegisterKind::Tape, cell)};
    const uint32_t target = cell - 1;
    return make_register_gate(
        layout, regs, "swap(ACC,tape[" + std::to_string(cell) + "])|tape_index=" + std::to_string(cell),
        [target](std::span<uint32_t> v) {
            if (v[0] == target) {
                std::swap(v[1], v[2]);
            }
        });
}

std::vector<PermGate> build_rw_gates(
    const RtmSpec &spec, const RegisterLayout &layout, std::span<const ModeControl> controls) {
    std::vector<PermGate> gates;
    for (uint32_t cell = 1; cell <= spec.tape_cells(); cell++) {
        gates.push_back(build_controlled_swap(layout, cell));
    }
    gates.push_back(build_rw_core_gate(spec, layout, controls));
    for (uint32_t cell = 1; cell <= spec.tape_cells(); cell++) {
        gates.push_back(build_controlled_swap(layout, cell));
    }
    return gates;
}

Circuit build_step_circuit(const RtmSpec &spec, const CompileOptions &options) {
    Circuit circuit{make_step_layout(spec, options.merge_cells), {}};
    circuit.gates.push_back(build_moving_gate(spec, circuit.layout));
    for (auto &g : build_rw_gates(spec, circuit.layout)) {
        circuit.gates.push_back(std::move(g));
    }
    return circuit;
}

Circuit build_wrapper_circuit(const RtmSpec &spec, const CompileOptions &options) {
    Circuit circuit{make_wrapper_layout(spec, options), {}};
    const RegisterLayout &layout = circuit.layout;
    auto &gates = circuit.gates;
    const RegisterId mode = layout.id(RegisterKind::OperationMode);
    const RegisterId counter = layout.id(RegisterKind::Counter);
    const RegisterId idle = layout.id(RegisterKind::IdleCounter);
    const RegisterId head = layout.id(RegisterKind::Head);
    const RegisterId solution = layout.id(RegisterKind::Solution);
    const RegisterId result = layout.id(RegisterKind::Tape, spec.result_cell());
    const uint32_t c = layout.counter_dimension();
    const uint32_t all_ones = c - 1;
    std::vector<bool> final_state(spec.num_states());
    for (StateId s = 0; s < spec.num_states(); s++) {
        final_state[s] = spec.is_final(s);
    }
    const std::optional<Symbol> accept = spec.accept_symbol();

    // Payload: U in mode 00, U^dagger in mode 11. U = U_r/w U_moving, so U^dagger
    // runs the read-write block inverted first and the inverse move last.
    const ModeControl forward_move[] = {{MODE_COMPUTE, false}};
    const ModeControl rw_both[] = {{MODE_COMPUTE, false}, {MODE_UNCOMPUTE, true}};
    const ModeControl inverse_move[] = {{MODE_UNCOMPUTE, true}};
    gates.push_back(build_moving_gate(spec, layout, forward_move));
    for (auto &g : build_rw_gates(spec, layout, rw_both)) {
        gates.push_back(std::move(g));
    }
    gates.push_back(build_moving_gate(spec, layout, inverse_move));

    {
        const RegisterId regs[] = {mode, counter};
        gates.push_back(make_register_gate(layout, regs, "counter:inc[00,01],dec[10,11]", [c](std::span<uint32_t> v) {
            v[1] = v[0] <= MODE_IDLE ? (v[1] + 1) % c : (v[1] + c - 1) % c;
        }));
    }
    {
        // idle_counter is untouched in mode 11; it is 0 there on the orbit and a
        // saturating decrement would not be injective.
        const RegisterId regs[] = {mode, idle};
        gates.push_back(make_register_gate(layout, regs, "idle_counter:inc[01],dec[10]", [c](std::span<uint32_t> v) {
            if (v[0] == MODE_IDLE) {
                v[1] = (v[1] + 1) % c;
            } else if (v[0] == MODE_REVERSE_IDLE) {
                v[1] = (v[1] + c - 1) % c;
            }
        }));
    }
    {
        const RegisterId regs[] = {mode, counter, result, solution};
        gates.push_back(make_register_gate(
            layout, regs, "solution+=1|mode=01,counter=1..1,result=accept", [all_ones, accept](std::span<uint32_t> v) {
                if (v[0] == MODE_IDLE && v[1] == all_ones && accept && v[2] == *accept) {
                    v[3] ^= 1;
                }
            }));
    }

    auto swap_modes = [](uint32_t &m, uint32_t a, uint32_t b) {
        if (m == a) {
            m = b;
        } else if (m == b) {
            m = a;
        }
    };
    {
        const RegisterId regs[] = {mode, idle, head};
        gates.push_back(make_register_gate(
            layout, regs, "mode 00<->01|idle_counter=0,head=final", [&](std::span<uint32_t> v) {
                if (v[1] == 0 && v[2] < final_state.size() && final_state[v[2]]) {
                    swap_modes(v[0], MODE_COMPUTE, MODE_IDLE);
                }
            }));
    }
    {
        const RegisterId regs[] = {mode, counter};
        gates.push_back(make_register_gate(layout, regs, "mode 11<->00|counter=0", [&](std::span<uint32_t> v) {
            if (v[1] == 0) {
                swap_modes(v[0], MODE_UNCOMPUTE, MODE_COMPUTE);
            }
        }));
    }
    {
        const RegisterId regs[] = {mode, idle, head};
        gates.push_back(make_register_gate(
            layout, regs, "mode 10<->11|idle_counter=0,head=final", [&](std::span<uint32_t> v) {
                if (v[1] == 0 && v[2] < final_state.size() && final_state[v[2]]) {
                    swap_modes(v[0], MODE_REVERSE_IDLE, MODE_UNCOMPUTE);
                }
            }));
    }
    {
        const RegisterId regs[] = {mode, counter};
        gates.push_back(make_register_gate(layout, regs, "mode 01<->10|counter=1..1", [&](std::span<uint32_t> v) {
            if (v[1] == all_ones) {
                swap_modes(v[0], MODE_IDLE, MODE_REVERSE_IDLE);
            }
        }));
    }
    return circuit;
}

BasisState initial_basis_state(const RegisterLayout &layout, const RtmSpec &spec, const std::vector<Symbol> &input) {
    BasisState state;
    state.values.assign(layout.wires.size(), 0);
    write_machine_config(layout, initial_config(spec, input), state);
    return state;
}

MachineConfig read_machine_config(const RegisterLayout &layout, const BasisState &state) {
    MachineConfig c;
    c.head_state = get_register(layout, state, layout.id(RegisterKind::Head));
    c.tape_index = get_register(layout, state, layout.id(RegisterKind::TapeIndex)) + 1;
    for (uint32_t cell = 1; auto r = layout.find(RegisterKind::Tape, cell); cell++) {
        c.tape.push_back(get_register(layout, state, *r));
    }
    return c;
}

void write_machine_config(const RegisterLayout &layout, const MachineConfig &config, BasisState &state) {
    set_register(layout, state, layout.id(RegisterKind::Head), config.head_state);
    set_register(layout, state, layout.id(RegisterKind::TapeIndex), config.tape_index - 1);
    set_register(layout, state, layout.id(RegisterKind::Acc), 0);
    for (uint32_t cell = 1; cell <= config.tape.size(); cell++) {
        set_register(layout, state, layout.id(RegisterKind::Tape, cell), config.tape[cell - 1]);
    }
}

void apply_circuit_in_place(const Circuit &circuit, BasisState &state) {
    if (state.values.size() != circuit.layout.wires.size()) {
        throw std::invalid_argument("basis state does not match the circuit layout");
    }
    for (const auto &g : circuit.gates) {
        g.apply(state.values);
    }
}

BasisState apply_circuit(const Circuit &circuit, const BasisState &state) {
    BasisState out = state;
    apply_circuit_in_place(circuit, out);
    return out;
}

BasisState apply_circuit_inverse(const Circuit &circuit, const BasisState &state) {
    if (state.values.size() != circuit.layout.wires.size()) {
        throw std::invalid_argument("basis state does not match the circuit layout");
    }
    BasisState out = state;
    for (size_t k = circuit.gates.size(); k-- > 0;) {
        circuit.gates[k].apply_inverse(out.values);
    }
    return out;
}

uint64_t circuit_orbit_length(const Circuit &circuit, const BasisState &initial, uint64_t budget) {
    BasisState cur = initial;
    for (uint64_t r = 1; r <= budget; r++) {
        apply_circuit_in_place(circuit, cur);
        if (cur == initial) {
            return r;
        }
    }
    throw BudgetExhausted("no recurrence within " + std::to_string(budget) + " circuit applications");
}

std::string circuit_to_json(const Circuit &circuit) {
    nlohmann::json j;
    const auto &layout = circuit.layout;
    j["format"] = "clocksim-circuit/1";
    j["m"] = layout.m;
    j["merged_cells"] = layout.merged;
    j["gate_count"] = circuit.gates.size();
    if (layout.has_wrapper_registers()) {
        j["counter_bits"] = layout.counter_bits;
        j["idle_counter_mode_11"] = "unchanged";
        j["mode_change_order"] = {"00<->01", "11<->00", "10<->11", "01<->10"};
    }
    j["wires"] = nlohmann::json::array();
    for (const auto &w : layout.wires) {
        nlohmann::json wj;
        wj["id"] = w.id;
        wj["dimension"] = w.dimension;
        wj["registers"] = nlohmann::json::array();
        for (const auto &r : layout.registers) {
            if (r.wire == w.id) {
                wj["registers"].push_back({{"name", r.name()}, {"stride", r.stride}, {"dimension", r.dimension}});
            }
        }
        j["wires"].push_back(std::move(wj));
    }
    j["gates"] = nlohmann::json::array();
    for (const auto &g : circuit.gates) {
        j["gates"].push_back(
            {{"label", g.label()}, {"support", g.support()}, {"dimensions", g.dims()}, {"table", g.table()}});
    }
    return j.dump(1) + "\n";
}

}  // namespace clocksim
