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

#ifndef CLOCKSIM_TESTS_ORACLES_H
#define CLOCKSIM_TESTS_ORACLES_H

#include <complex>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "clocksim/rtm.h"

namespace clocksim::oracles {

/// Outcome distribution of textbook phase estimation, simulated gate by gate
/// on a 2^m statevector: Hadamards, controlled U^(2^k) as phase kickback,
/// then the inverse quantum Fourier transform built from H, controlled
/// phases and swaps. Mixed over eigencomponents by |amplitude|^2.
std::vector<double> qpe_statevector_distribution(
    uint32_t m, const std::vector<double> &phases, const std::vector<double> &amplitudes);

/// |<v_k|e_0>|^2 for the Fourier eigenvectors v_k of the d-cycle shift,
/// computed by explicit vectors; also checks C v_k = w^-k v_k to 1e-9.
std::vector<double> fourier_overlaps(uint32_t d);

/// Image of (state, 1-based index) under the moving rules, or nullopt when
/// the state is not moving, written directly from the wraparound rule.
std::optional<std::pair<StateId, uint32_t>> moving_image(const RtmSpec &spec, StateId state, uint32_t index);

/// Random machine in normal form that is reversible by construction: move
/// targets are distinct and entered by nothing else, and read-write rules
/// map injectively into pairs (q, b) with q not a move target.
RtmSpec random_reversible_machine(std::mt19937_64 &rng, uint32_t max_states, uint32_t tape_cells);

/// Same construction with one read-write rule redirected onto another
/// rule's image, or one move redirected onto another move's target.
std::optional<RtmSpec> random_irreversible_machine(std::mt19937_64 &rng, uint32_t max_states, uint32_t tape_cells);

/// Exhaustive injectivity of the step map on all configurations, by brute force.
bool brute_force_injective(const RtmSpec &spec);

/// Binomial standard deviation of an empirical frequency.
double binomial_sigma(double p, double n);

}  // namespace clocksim::oracles

#endif
