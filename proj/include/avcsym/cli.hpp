/**
 * Copyright 2026 The avcsym Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace avcsym::cli {

// Exit codes of `check`: the channel is safe to use, the channel can be
// symmetrized by the jammer, or the command failed.
inline constexpr int kExitNotSymmetrizable = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitSymmetrizable = 2;

// Default threshold for `check`, 2^-10.
inline constexpr double kDefaultEpsilon = 0.0009765625;

// "start:stop:step" (inclusive, values computed as start + k*step),
// "start:stop:halving" (start, start/2, ... down to stop) or a single value.
// Throws InvalidArgument for malformed or empty ranges.
std::vector<double> parse_range(const std::string& text);

// Integer-valued range; every element must be a whole number >= 0.
std::vector<std::size_t> parse_count_range(const std::string& text);

// Runs one command line (without the program name). Primary output goes to
// `out`, diagnostics to `err`; the return value is the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace avcsym::cli
