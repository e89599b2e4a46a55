/*
 * Copyright 2026 The Autoreview Authors
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

#include "autoreview/error.hpp"

namespace autoreview {

/// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;  // review failed validation / attempts exhausted
inline constexpr int kExitConfig = 2;   // usage or configuration error
inline constexpr int kExitRuntime = 3;  // backend, transport or I/O failure

int exit_code_for(ErrorCode code) noexcept;

/// Entry point behind the `autoreview` binary. args[0] is the program name.
///
///   generate  --paper FILE [--config FILE] [--mock SCRIPT]
///   validate  --review FILE
///   attack    --kind {abstract-swap|informal} --corpus MANIFEST --seed N [--mock SCRIPT]
///   eval robustness --runs DIR [--runs DIR ...] [--rubric FILE] [--adjudications FILE]
///   stats summarize --worksheet FILE
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_command(int argc, const char* const* argv);

}  // namespace autoreview
