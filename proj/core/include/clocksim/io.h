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

#ifndef CLOCKSIM_IO_H
#define CLOCKSIM_IO_H

#include <string>
#include <string_view>

namespace clocksim {

/// Throws std::runtime_error naming the path on failure.
std::string read_text_file(const std::string &path);
void write_text_file(const std::string &path, std::string_view contents);

/// Shortest decimal representation that round-trips; "-0" is printed as "0".
std::string format_double(double value);

}  // namespace clocksim

#endif
