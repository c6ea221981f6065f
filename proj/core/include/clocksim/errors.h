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

#ifndef CLOCKSIM_ERRORS_H
#define CLOCKSIM_ERRORS_H

#include <cstddef>
#include <stdexcept>
#include <string>

namespace clocksim {

/// A machine description failed to parse. Line and column are 1-based.
class ParseError : public std::runtime_error {
   public:
    ParseError(size_t line, size_t column, const std::string &message);

    size_t line() const {
        return line_;
    }
    size_t column() const {
        return column_;
    }

   private:
    size_t line_;
    size_t column_;
};

/// The machine could not be stepped (no applicable rule, or stepped while halted).
class MachineError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// A gate table or gate builder failed to produce a bijection.
class BijectionError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// The register layout cannot hold the values the wrapper circuit needs.
class LayoutOverflow : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// An iteration (orbit traversal, machine run) hit its step budget.
class BudgetExhausted : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

}  // namespace clocksim

#endif
