/*
 *    Copyright 2026 The icsize Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef ICSIZE_CLI_HPP
#define ICSIZE_CLI_HPP

#include "icsize/program.hpp"

#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace icsize::cli
{

inline constexpr int exit_ok = 0;
inline constexpr int exit_internal = 1;
inline constexpr int exit_input = 2;

/// `arm` (4 bytes), `pisa` (8 bytes) or `custom:<bytes>`.
IsaProfile resolve_isa(std::string_view preset);

/// Runs `icsize` with the given arguments (args[0] is the program name).
/// Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace icsize::cli

#endif
