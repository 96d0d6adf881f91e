// Copyright 2026 The risklens Authors
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

#ifndef RISKLENS_TOOLS_CLI_COMMANDS_H_
#define RISKLENS_TOOLS_CLI_COMMANDS_H_

#include <exception>
#include <ostream>
#include <string>
#include <vector>

namespace risklens::cli {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;      // bad arguments or configuration
inline constexpr int kExitData = 2;       // unreadable or inconsistent data
inline constexpr int kExitTransport = 3;  // model endpoint failures
inline constexpr int kExitEval = 4;       // evaluation inputs do not line up

int ExitCodeFor(const std::exception& e);

// Runs one command. `args` excludes the program name.
int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace risklens::cli

#endif  // RISKLENS_TOOLS_CLI_COMMANDS_H_
