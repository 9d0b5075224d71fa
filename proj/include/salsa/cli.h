// Copyright 2026 The SALSA Workbench Authors.
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

#ifndef SALSA_CLI_H_
#define SALSA_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace salsa::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitUsage = 2;

// Entry point of the `salsa` tool. args excludes the program name.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

// Expands `--config FILE` into flags. Keys of the JSON object become
// `--key value` unless the flag is already present; a nested object named
// after the subcommand applies to that subcommand only. Booleans become bare
// flags, arrays repeat the flag.
std::vector<std::string> merge_config(const std::vector<std::string> &args);

}  // namespace salsa::cli

#endif  // SALSA_CLI_H_
