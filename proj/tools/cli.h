// Copyright 2026 The ESBQ Authors. All Rights Reserved.
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

#ifndef ESBQ_TOOLS_CLI_H_
#define ESBQ_TOOLS_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace esbq::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

inline constexpr unsigned long long kDefaultSeed = 20220417ULL;

// Runs one `esbq` invocation. args excludes the program name. Machine
// readable output is buffered and written to `out` only on success.
int dispatch(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err);

// Shortest decimal string that parses back to the same double.
std::string format_double(double v);

}  // namespace esbq::cli

#endif  // ESBQ_TOOLS_CLI_H_
