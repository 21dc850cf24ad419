// Copyright 2026 The trajcert Authors.
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


// Command-line entry point, callable in-process.
//
// Exit codes: 0 success; 1 usage or input error; 2 inconclusive (no
// certificate found, or refused); 3 a certificate was found but simulation
// found a violation.

#ifndef TRAJCERT_CLI_HPP_
#define TRAJCERT_CLI_HPP_

#include <ostream>
#include <string>
#include <vector>

namespace trajcert {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitInconclusive = 2;
inline constexpr int kExitValidation = 3;

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
// args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace trajcert

#endif  // TRAJCERT_CLI_HPP_
