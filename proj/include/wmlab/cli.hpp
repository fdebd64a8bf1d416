// Copyright 2026 the wmlab authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef WMLAB_CLI_HPP
#define WMLAB_CLI_HPP

#include <string>
#include <vector>

namespace wmlab::cli {

// Exit codes shared by all commands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;    // bad flags or config
inline constexpr int kExitFailure = 2;  // runtime/file errors
inline constexpr int kExitNotWatermarked = 4;  // extract: verdict or BER failed

// Full command-line entry point: args excludes the program name.
int run(const std::vector<std::string>& args);
int run(int argc, const char* const* argv);

}  // namespace wmlab::cli

#endif  // WMLAB_CLI_HPP
