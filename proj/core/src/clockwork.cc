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

#include "clocksim/clockwork.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "clocksim/errors.h"
#include "clocksim/io.h"
#include "json.hpp"

namespace clocksim {

namespace {

struct ClockedStateHash {
    size_t operator()(const ClockedState &s) const {
        uint64_t h = 0x9E3779B97F4A7C15ull ^ s.clock_pos;
        for (uint32_t v : s.circuit_state.values) {
            h ^= v + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2);
        }
        return static_cast<size_t>(h);
    }
};

void check_clock(const ClockedState &state, size_t s) {
    if (state.clock_pos < 1 || state.clock_pos > s) {
        throw std::invalid_argument(
            "clock position " + std::to_string(state.clock_pos) + " outside [1, " + std::to_string(s) + "]");
    }
}

}  // namespace

uint32_t clock_position_from_bits(const std::vector<uint8_t> &clock_bits) {
    uint32_t pos = 0;
    for (size_t k = 0; k < clock_bits.size(); k++) {
        if (clock_bits[k] > 1) {
            throw std::invalid_argument("clock wire values must be 0 or 1");
        }
        if (clock_bits[k] == 1) {
            if (pos != 0) {
                throw std::invalid_argument("clock register is not one-hot: several wires excited");
            }
            pos = static_cast<uint32_t>(k + 1);
        }
    }
    if (pos == 0) {
        throw std::invalid_argument("clock register is not one-hot: no wire excited");
    }
    return pos;
}

std::vector<uint8_t> clock_bits(uint32_t clock_pos, size_t s) {
    if (clock_pos < 1 || clock_pos > s) {
        throw std::invalid_argument("clock position out of range");
    }
    std::vector<uint8_t> bits(s, 0);
    bits[clock_pos - 1] = 1;
    return bits;
}

ForwardOperator::ForwardOperator(const Circuit &circuit) : circuit_(&circuit) {
    if (circuit.gates.empty()) {
        throw std::invalid_argument("forward operator needs at least one gate");
    }
}

void ForwardOperator::apply_in_place(ClockedState &state) const {
    const size_t s = this->s();
    check_clock(state, s);
    if (state.circuit_state.values.size() != circuit_->layout.wires.size()) {
        throw std::invalid_argument("basis state does not match the circuit layout");
    }
    circuit_->gates[state.clock_pos - 1].apply(state.circuit_state.values);
    state.clock_pos = state.clock_pos == s ? 1 : state.clock_pos + 1;
}

ClockedState ForwardOperator::apply(const ClockedState &state) const {
    ClockedState out = state;
    apply_in_place(out);
    return out;
}

ClockedState apply_forward(const ForwardOperator &forward, const ClockedState &state) {
    return forward.apply(state);
}

Orbit compute_orbit(const ForwardOperator &forward, const ClockedState &initial, uint64_t budget, bool verify_distinct) {
    check_clock(initial, forward.s());
    std::unordered_set<ClockedState, ClockedStateHash> seen;
    if (verify_distinct) {
        seen.insert(initial);
    }
    ClockedState cur = initial;
    for (uint64_t j = 1; j <= budget; j++) {
        forward.apply_in_place(cur);
        if (cur == initial) {
            return Orbit{initial, j, verify_distinct};
        }
        if (verify_distinct && !seen.insert(cur).second) {
            throw std::logic_error("forward operator revisited a state before returning to the initial state");
        }
    }
    throw BudgetExhausted("no clock-orbit recurrence within " + std::to_string(budget) + " applications of F");
}

Rational Rational::make(uint64_t num, uint64_t den) {
    if (den == 0) {
        throw std::invalid_argument("zero denominator");
    }
    uint64_t g = std::gcd(num, den);
    if (g == 0) {
        return Rational{0, 1};
    }
    return Rational{num / g, den / g};
}

Rational Rational::operator+(const Rational &other) const {
    uint64_t g = std::gcd(den, other.den);
    unsigned __int128 n = static_cast<unsigned __int128>(num) * (other.den / g) +
                          static_cast<unsigned __int128>(other.num) * (den / g);
    unsigned __int128 d = static_cast<unsigned __int128>(den / g) * other.den;
    unsigned __int128 a = n, b = d;
    while (b != 0) {
        unsigned __int128 t = a % b;
        a = b;
        b = t;
    }
    if (a > 1) {
        n /= a;
        d /= a;
    }
    if (n > UINT64_MAX || d > UINT64_MAX) {
        throw std::overflow_error("rational overflow");
    }
    return Rational{static_cast<uint64_t>(n), static_cast<uint64_t>(d)};
}

std::string Rational::to_string() const {
    return std::to_string(num) + "/" + std::to_string(den);
}

Rational SpectralModel::total_probability() const {
    Rational total{0, 1};
    for (const auto &e : entries) {
        total = total + e.probability;
    }
    return total;
}

std::vector<double> SpectralModel::eigenvalues() const {
    std::vector<double> out;
    for (const auto &e : entries) {
        out.insert(out.end(), e.multiplicity, e.eigenvalue);
    }
    std::sort(out.begin(), out.end());
    return out;
}

double cos_two_pi_fraction(uint64_t j, uint64_t d) {
    if (d == 0) {
        throw std::invalid_argument("d must be positive");
    }
    unsigned __int128 r = j % d;
    const unsigned __int128 dd = d;
    if (2 * r > dd) {
        r = dd - r;
    }
    // r in [0, d/2]
    if (r == 0) {
        return 1.0;
    }
    if (2 * r == dd) {
        return -1.0;
    }
    if (4 * r == dd) {
        return 0.0;
    }
    const double pi = std::numbers::pi;
    if (4 * r < dd) {
        return std::cos(2 * pi * static_cast<double>(r) / static_cast<double>(d));
    }
    return -std::cos(pi * static_cast<double>(dd - 2 * r) / static_cast<double>(d));
}

SpectralModel spectral_model(uint64_t d) {
    if (d == 0) {
        throw std::invalid_argument("orbit dimension must be positive");
    }
    SpectralModel model;
    model.d = d;
    for (uint64_t j = 0; j <= d / 2; j++) {
        bool single = j == 0 || 2 * j == d;
        model.entries.push_back(
            {j, cos_two_pi_fraction(j, d), single ? 1u : 2u, Rational::make(single ? 1 : 2, d)});
    }
    return model;
}

double spectral_gap(uint64_t d) {
    if (d == 0) {
        throw std::invalid_argument("orbit dimension must be positive");
    }
    double s = std::sin(std::numbers::pi / static_cast<double>(d));
    return 2 * s * s;
}

std::vector<double> dense_orbit_oracle(uint64_t d) {
    if (d == 0 || d > DENSE_ORACLE_CAP) {
        throw std::invalid_argument(
            "dense oracle dimension must be in [1, " + std::to_string(DENSE_ORACLE_CAP) + "], got " + std::to_string(d));
    }
    const size_t n = d;
    std::vector<double> a(n * n, 0.0);
    for (size_t i = 0; i < n; i++) {
        size_t k = (i + 1) % n;
        a[k * n + i] += 0.5;
        a[i * n + k] += 0.5;
    }
    return symmetric_eigenvalues(std::move(a), n);
}

std::vector<double> symmetric_eigenvalues(std::vector<double> a, size_t n) {
    if (a.size() != n * n) {
        throw std::invalid_argument("matrix size does not match dimension");
    }
    if (n == 0) {
        return {};
    }
    auto at = [&](size_t i, size_t j) -> double & {
        return a[i * n + j];
    };
    std::vector<double> d(n, 0.0), e(n, 0.0);

    // Householder reduction to tridiagonal form, lower triangle only.
    for (size_t i = n - 1; i > 0; i--) {
        const size_t l = i - 1;
        double h = 0.0;
        if (l > 0) {
            double scale = 0.0;
            for (size_t k = 0; k <= l; k++) {
                scale += std::abs(at(i, k));
            }
            if (scale == 0.0) {
                e[i] = at(i, l);
            } else {
                for (size_t k = 0; k <= l; k++) {
                    at(i, k) /= scale;
                    h += at(i, k) * at(i, k);
                }
                double f = at(i, l);
                double g = f >= 0 ? -std::sqrt(h) : std::sqrt(h);
                e[i] = scale * g;
                h -= f * g;
                at(i, l) = f - g;
                f = 0.0;
                for (size_t j = 0; j <= l; j++) {
                    g = 0.0;
                    for (size_t k = 0; k <= j; k++) {
                        g += at(j, k) * at(i, k);
                    }
                    for (size_t k = j + 1; k <= l; k++) {
                        g += at(k, j) * at(i, k);
                    }
                    e[j] = g / h;
                    f += e[j] * at(i, j);
                }
                const double hh = f / (h + h);
                for (size_t j = 0; j <= l; j++) {
                    f = at(i, j);
                    g = e[j] - hh * f;
                    e[j] = g;
                    for (size_t k = 0; k <= j; k++) {
                        at(j, k) -= f * e[k] + g * at(i, k);
                    }
                }
            }
        } else {
            e[i] = at(i, l);
        }
        d[i] = h;
    }
    for (size_t i = 0; i < n; i++) {
        d[i] = at(i, i);
    }

    // Implicit QL with Wilkinson-style shifts on the tridiagonal (d, e).
    for (size_t i = 1; i < n; i++) {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;
    const double eps = std::numeric_limits<double>::epsilon();
    for (size_t l = 0; l < n; l++) {
        int iter = 0;
        size_t m;
        do {
            for (m = l; m + 1 < n; m++) {
                double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= eps * dd) {
                    break;
                }
            }
            if (m != l) {
                if (iter++ == 100) {
                    throw std::runtime_error("symmetric eigensolver did not converge");
                }
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
                double s = 1.0, c = 1.0, p = 0.0;
                bool deflated = false;
                for (size_t i = m; i-- > l;) {
                    double f = s * e[i];
                    double b = c * e[i];
                    r = std::hypot(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        deflated = true;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                }
                if (deflated) {
                    continue;
                }
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
    std::sort(d.begin(), d.end());
    return d;
}

LocalityReport locality_report(const ForwardOperator &forward) {
    LocalityReport report;
    const size_t s = forward.s();
    report.clock_wires_per_term = static_cast<uint32_t>(std::min<size_t>(s, 2));
    for (const auto &g : forward.circuit().gates) {
        auto gate_support = static_cast<uint32_t>(g.support().size());
        uint32_t term = gate_support + report.clock_wires_per_term;
        report.gate_supports.push_back(gate_support);
        report.term_supports.push_back(term);
        report.max_support = std::max(report.max_support, term);
    }
    report.exceeds_target = report.max_support > LOCALITY_TARGET;
    return report;
}

std::string LocalityReport::to_json(const Circuit &circuit) const {
    nlohmann::json j;
    j["term_count"] = term_count();
    j["clock_wires_per_term"] = clock_wires_per_term;
    j["max_support"] = max_support;
    j["target"] = LOCALITY_TARGET;
    j["exceeds_target"] = exceeds_target;
    j["terms"] = nlohmann::json::array();
    for (size_t k = 0; k < term_supports.size(); k++) {
        nlohmann::json t;
        t["j"] = k + 1;
        t["support"] = term_supports[k];
        if (k < circuit.gates.size()) {
            t["label"] = circuit.gates[k].label();
            t["wires"] = circuit.gates[k].support();
        }
        j["terms"].push_back(std::move(t));
    }
    return j.dump(1) + "\n";
}

NormBound norm_bound(uint64_t n, uint64_t k) {
    if (k < 1 || k > n) {
        throw std::invalid_argument("norm bound requires 1 <= k <= n");
    }
    uint64_t power = 1;
    for (uint64_t i = 0; i < k; i++) {
        if (__builtin_mul_overflow(power, n, &power)) {
            throw std::overflow_error(
                std::to_string(n) + "^" + std::to_string(k) + " does not fit in 64 bits");
        }
    }
    unsigned __int128 binom = 1;
    for (uint64_t i = 0; i < k; i++) {
        binom = binom * (n - i) / (i + 1);
    }
    return NormBound{power, static_cast<uint64_t>(binom)};
}

double choose_time_scale(double norm) {
    if (!(norm > 0) || !std::isfinite(norm)) {
        throw std::invalid_argument("time scale needs a positive finite norm bound");
    }
    return std::numbers::pi / norm;
}

std::string spectral_csv(const SpectralModel &model) {
    std::ostringstream out;
    out << "j,eigenvalue,multiplicity,probability\n";
    for (const auto &e : model.entries) {
        out << e.j << "," << format_double(e.eigenvalue) << "," << e.multiplicity << ","
            << format_double(e.probability.to_double()) << "\n";
    }
    return out.str();
}

}  // namespace clocksim
