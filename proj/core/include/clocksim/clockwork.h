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

#ifndef CLOCKSIM_CLOCKWORK_H
#define CLOCKSIM_CLOCKWORK_H

#include <cstdint>
#include <string>
#include <vector>

#include "clocksim/compiler.h"

namespace clocksim {

/// A circuit state together with a one-hot clock of s two-level wires.
/// `clock_pos` is the 1-based index of the excited clock wire.
struct ClockedState {
    BasisState circuit_state;
    uint32_t clock_pos = 1;

    bool operator==(const ClockedState &) const = default;
};

/// Decodes a clock register given wire by wire. Throws std::invalid_argument
/// unless exactly one wire is excited.
uint32_t clock_position_from_bits(const std::vector<uint8_t> &clock_bits);
std::vector<uint8_t> clock_bits(uint32_t clock_pos, size_t s);

/// F = sum_j V_j (x) |1><0|_{j+1} (x) |0><1|_j, with j = s wrapping to 1.
/// Represented as a map on (basis state, clock position) pairs. Holds a
/// reference: the circuit must outlive the operator.
class ForwardOperator {
   public:
    explicit ForwardOperator(const Circuit &circuit);

    const Circuit &circuit() const {
        return *circuit_;
    }
    size_t s() const {
        return circuit_->gates.size();
    }
    /// Applies V_{clock_pos} and advances the clock. Throws on an invalid clock.
    ClockedState apply(const ClockedState &state) const;
    void apply_in_place(ClockedState &state) const;

   private:
    const Circuit *circuit_;
};

ClockedState apply_forward(const ForwardOperator &forward, const ClockedState &state);

struct Orbit {
    ClockedState initial;
    uint64_t d = 0;
    /// True when every state before recurrence was checked pairwise distinct.
    bool distinct_verified = false;
};

/// Traverses the cycle of F through `initial`. Throws BudgetExhausted if no
/// recurrence within `budget` applications, and std::logic_error if a state
/// other than `initial` repeats.
Orbit compute_orbit(
    const ForwardOperator &forward, const ClockedState &initial, uint64_t budget, bool verify_distinct = true);

/// Nonnegative fraction in lowest terms.
struct Rational {
    uint64_t num = 0;
    uint64_t den = 1;

    static Rational make(uint64_t num, uint64_t den);
    double to_double() const {
        return static_cast<double>(num) / static_cast<double>(den);
    }
    Rational operator+(const Rational &other) const;
    bool operator==(const Rational &) const = default;
    std::string to_string() const;
};

struct SpectralEntry {
    uint64_t j;
    double eigenvalue;
    uint32_t multiplicity;
    Rational probability;
};

/// Spectrum of A = (F + F^dagger)/2 on a d-cycle and the outcome law of the
/// orbit's initial vector: lambda_j = cos(2 pi j / d) for j = 0..floor(d/2).
struct SpectralModel {
    uint64_t d = 0;
    std::vector<SpectralEntry> entries;

    Rational total_probability() const;
    /// Eigenvalues with multiplicity, ascending.
    std::vector<double> eigenvalues() const;
};

/// cos(2 pi j / d) with quadrant reduction, so exact for multiples of d/4.
double cos_two_pi_fraction(uint64_t j, uint64_t d);

SpectralModel spectral_model(uint64_t d);

/// 1 - cos(2 pi / d), computed as 2 sin^2(pi / d).
double spectral_gap(uint64_t d);

constexpr uint64_t DENSE_ORACLE_CAP = 4096;

/// Eigenvalues of the d x d matrix (C + C^T)/2 for the cyclic shift C, by
/// dense symmetric diagonalization, ascending. Throws std::invalid_argument
/// for d = 0 or d > DENSE_ORACLE_CAP.
std::vector<double> dense_orbit_oracle(uint64_t d);

/// Eigenvalues of a dense symmetric matrix (row-major, n x n), ascending.
/// Householder tridiagonalization followed by implicit QL iteration.
std::vector<double> symmetric_eigenvalues(std::vector<double> matrix, size_t n);

/// Observable terms beyond this many wires are flagged.
constexpr uint32_t LOCALITY_TARGET = 4;

struct LocalityReport {
    /// |supp(V_j)| + clock wires touched by term j.
    std::vector<uint32_t> term_supports;
    std::vector<uint32_t> gate_supports;
    uint32_t clock_wires_per_term = 0;
    uint32_t max_support = 0;
    bool exceeds_target = false;

    size_t term_count() const {
        return term_supports.size();
    }
    std::string to_json(const Circuit &circuit) const;
};

LocalityReport locality_report(const ForwardOperator &forward);

struct NormBound {
    /// n^k: bound on the number of k-local terms and on ||A|| for unit-norm terms.
    uint64_t power;
    /// n choose k.
    uint64_t binomial;
};

/// Requires 1 <= k <= n. Throws std::overflow_error if n^k exceeds 64 bits.
NormBound norm_bound(uint64_t n, uint64_t k);

/// pi / norm, the largest t with ||A|| t <= pi. Throws std::invalid_argument
/// for a nonpositive or non-finite norm.
double choose_time_scale(double norm);

/// CSV with header "j,eigenvalue,multiplicity,probability".
std::string spectral_csv(const SpectralModel &model);

}  // namespace clocksim

#endif
