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

#ifndef CLOCKSIM_TOOLS_CLI_H
#define CLOCKSIM_TOOLS_CLI_H

#include <ostream>
#include <string>
#include <vector>

namespace clocksim {

/// Runs one `clocksim` subcommand. Machine-readable output goes to `out`,
/// stage-tagged diagnostics to `err`. Returns the process exit code.
int cli_dispatch(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);
int cli_dispatch(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

}  // namespace clocksim

#endif
