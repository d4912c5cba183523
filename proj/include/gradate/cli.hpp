// Copyright 2026 The gradate Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GRADATE_CLI_HPP_
#define GRADATE_CLI_HPP_

#include <iosfwd>
#include <string>
#include <vector>

namespace gradate {

/// Runs one subcommand (synth, inject, train, score, eval, ablate).
/// `args` excludes the program name. Returns 0 on success, 2 on usage
/// errors and 1 on runtime failures, after printing a single
/// "error: <kind>: <message>" line to `err`.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run_command(int argc, const char* const* argv);

}  // namespace gradate

#endif  // GRADATE_CLI_HPP_
