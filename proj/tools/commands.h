// Copyright 2026 The mmspeaker Authors.
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


// Subcommand wiring for the mmspeaker command-line tool.

#ifndef MMSPEAKER_TOOLS_COMMANDS_H_
#define MMSPEAKER_TOOLS_COMMANDS_H_

#include "absl/status/status.h"

namespace mmspeaker::cli {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitFile = 3;
inline constexpr int kExitData = 4;

int ExitCodeFor(const absl::Status& status);

int RunCli(int argc, char** argv);

}  // namespace mmspeaker::cli

#endif  // MMSPEAKER_TOOLS_COMMANDS_H_
