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

#include "oracles.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

#include "clocksim/errors.h"

namespace clocksim::oracles {

namespace {

using cd = std::complex<double>;

void hadamard(std::vector<cd> &psi, uint32_t q) {
    const size_t bit = size_t{1} << q;
    const double h = 1 / std::sqrt(2.0);
    for (size_t x = 0; x < psi.size(); x++) {
        if ((x & bit) == 0) {
            cd a = psi[x], b = psi[x | bit];
            psi[x] = h * (a + b);
            psi[x | bit] = h * (a - b);
        }
    }
}

void controlled_phase(std::vector<cd> &psi, uint32_t a, uint32_t b, double angle) {
    const size_t mask = (size_t{1} << a) | (size_t{1} << b);
    const cd w = std::polar(1.0, angle);
    for (size_t x = 0; x < psi.size(); x++) {
        if ((x & mask) == mask) {
            psi[x] *= w;
        }
    }
}

void swap_qubits(std::vector<cd> &psi, uint32_t a, uint32_t b) {
    const size_t ba = size_t{1} << a, bb = size_t{1} << b;
    for (size_t x = 0; x < psi.size(); x++) {
        if ((x & ba) != 0 && (x & bb) == 0) {
            std::swap(psi[x], psi[(x & ~ba) | bb]);
        }
    }
}

}  // namespace

std::vector<double> qpe_statevector_distribution(
    uint32_t m, const std::vector<double> &phases, const std::vector<double> &amplitudes) {
    const size_t dim = size_t{1} << m;
    std::vector<double> dist(dim, 0.0);
    for (size_t k = 0; k < phases.size(); k++) {
        std::vector<cd> psi(dim, 0.0);
        psi[0] = 1.0;
        for (uint32_t q = 0; q < m; q++) {
            hadamard(psi, q);
        }
        // Controlled U^(2^q) on an eigenvector kicks back exp(2 pi i phi 2^q) onto qubit q.
        for (uint32_t q = 0; q < m; q++) {
            const cd w = std::polar(1.0, 2 * std::numbers::pi * phases[k] * std::ldexp(1.0, static_cast<int>(q)));
            for (size_t x = 0; x < dim; x++) {
                if ((x >> q) & 1) {
                    psi[x] *= w;
                }
            }
        }
        // Inverse QFT: reverse qubit order, then H and inverse controlled rotations.
        for (uint32_t q = 0; q < m / 2; q++) {
            swap_qubits(psi, q, m - 1 - q);
        }
        for (uint32_t q = 0; q < m; q++) {
            for (uint32_t c = 0; c < q; c++) {
                controlled_phase(psi, c, q, -std::numbers::pi / std::ldexp(1.0, static_cast<int>(q - c)));
            }
            hadamard(psi, q);
        }
        const double w = amplitudes[k] * amplitudes[k];
        for (size_t x = 0; x < dim; x++) {
            dist[x] += w * std::norm(psi[x]);
        }
    }
    return dist;
}

std::vector<double> fourier_overlaps(uint32_t d) {
    std::vector<double> out;
    for (uint32_t k = 0; k < d; k++) {
        std::vector<cd> v(d);
        for (uint32_t x = 0; x < d; x++) {
            v[x] = std::polar(1 / std::sqrt(static_cast<double>(d)), 2 * std::numbers::pi * k * x / d);
        }
        // C e_x = e_{x+1}, so (C v)[x] = v[x-1] = w^-k v[x].
        const cd eig = std::polar(1.0, -2 * std::numbers::pi * k / d);
        for (uint32_t x = 0; x < d; x++) {
            if (std::abs(v[(x + d - 1) % d] - eig * v[x]) > 1e-9) {
                throw std::logic_error("Fourier vector is not a shift eigenvector");
            }
        }
        out.push_back(std::norm(v[0]));
    }
    return out;
}

std::optional<std::pair<StateId, uint32_t>> moving_image(const RtmSpec &spec, StateId state, uint32_t index) {
    for (const auto &t : spec.transitions()) {
        if (const auto *mv = std::get_if<MoveRule>(&t); mv != nullptr && mv->from == state) {
            const uint32_t n = spec.tape_cells();
            // 1-based i -> i + dir, wrapped into 1..n.
            int64_t j = static_cast<int64_t>(index) + mv->dir;
            if (j < 1) {
                j += n;
            }
            if (j > n) {
                j -= n;
            }
            return std::make_pair(mv->to, static_cast<uint32_t>(j));
        }
    }
    return std::nullopt;
}

namespace {

struct Draft {
    std::vector<StateDecl> states;
    std::vector<Transition> transitions;
    StateId initial = 0;
};

std::optional<Draft> draft_machine(std::mt19937_64 &rng, uint32_t max_states) {
    std::uniform_int_distribution<uint32_t> count(2, std::max<uint32_t>(2, max_states));
    const uint32_t q = count(rng);
    Draft dr;
    std::uniform_int_distribution<int> kind(0, 3);
    for (uint32_t k = 0; k < q; k++) {
        auto kd = static_cast<StateKind>(kind(rng));
        dr.states.push_back({"s" + std::to_string(k), kd});
    }
    dr.states[q - 1].kind = StateKind::Final;
    std::vector<StateId> all(q);
    for (StateId k = 0; k < q; k++) {
        all[k] = k;
    }
    std::shuffle(all.begin(), all.end(), rng);
    std::vector<bool> move_target(q, false);
    size_t next = 0;
    for (StateId p = 0; p < q; p++) {
        if (dr.states[p].kind == StateKind::MoveRight || dr.states[p].kind == StateKind::MoveLeft) {
            StateId t = all[next++];
            move_target[t] = true;
            dr.transitions.push_back(MoveRule{p, t, dr.states[p].kind == StateKind::MoveRight ? 1 : -1});
        }
    }
    std::vector<std::pair<StateId, Symbol>> codomain;
    for (StateId t = 0; t < q; t++) {
        if (!move_target[t]) {
            codomain.push_back({t, 0});
            codomain.push_back({t, 1});
        }
    }
    std::shuffle(codomain.begin(), codomain.end(), rng);
    size_t used = 0;
    for (StateId p = 0; p < q; p++) {
        if (dr.states[p].kind != StateKind::ReadWrite) {
            continue;
        }
        for (Symbol a = 0; a < 2; a++) {
            if (used == codomain.size()) {
                return std::nullopt;
            }
            auto [t, b] = codomain[used++];
            dr.transitions.push_back(ReadWriteRule{p, a, t, b});
        }
    }
    dr.initial = std::uniform_int_distribution<StateId>(0, q - 1)(rng);
    return dr;
}

}  // namespace

RtmSpec random_reversible_machine(std::mt19937_64 &rng, uint32_t max_states, uint32_t tape_cells) {
    for (;;) {
        if (auto dr = draft_machine(rng, max_states)) {
            return RtmSpec(dr->states, {"0", "1"}, dr->transitions, dr->initial, tape_cells, 1);
        }
    }
}

std::optional<RtmSpec> random_irreversible_machine(std::mt19937_64 &rng, uint32_t max_states, uint32_t tape_cells) {
    for (int attempt = 0; attempt < 100; attempt++) {
        auto dr = draft_machine(rng, max_states);
        if (!dr) {
            continue;
        }
        std::vector<size_t> rw, mv;
        for (size_t k = 0; k < dr->transitions.size(); k++) {
            (std::holds_alternative<ReadWriteRule>(dr->transitions[k]) ? rw : mv).push_back(k);
        }
        if (rw.size() >= 2) {
            auto &a = std::get<ReadWriteRule>(dr->transitions[rw[0]]);
            const auto &b = std::get<ReadWriteRule>(dr->transitions[rw[1]]);
            a.to = b.to;
            a.write = b.write;
        } else if (mv.size() >= 2) {
            auto &a = std::get<MoveRule>(dr->transitions[mv[0]]);
            a.to = std::get<MoveRule>(dr->transitions[mv[1]]).to;
        } else {
            continue;
        }
        return RtmSpec(dr->states, {"0", "1"}, dr->transitions, dr->initial, tape_cells, 1);
    }
    return std::nullopt;
}

bool brute_force_injective(const RtmSpec &spec) {
    const uint64_t total = *spec.configuration_count();
    std::map<std::vector<uint32_t>, uint64_t> images;
    for (uint64_t idx = 0; idx < total; idx++) {
        MachineConfig c = unpack_configuration(spec, idx);
        if (spec.is_final(c.head_state)) {
            continue;
        }
        MachineConfig n;
        try {
            n = step_machine(spec, c);
        } catch (const MachineError &) {
            return false;
        }
        std::vector<uint32_t> key = n.tape;
        key.push_back(n.head_state);
        key.push_back(n.tape_index);
        if (!images.emplace(key, idx).second) {
            return false;
        }
    }
    return true;
}

double binomial_sigma(double p, double n) {
    return std::sqrt(p * (1 - p) / n);
}

}  // namespace clocksim::oracles
