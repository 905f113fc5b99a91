// Copyright 2026 The fqsvt Authors
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

#pragma once

// Experiment drivers behind the `fqsvt` executable. Each command reads a
// strict JSON config, writes its artifacts into an output directory and
// returns a process exit code.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>

#include "fqsvt/io.hpp"

namespace fqsvt::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitNumerical = 1;
inline constexpr int kExitConfig = 2;

struct Context {
  std::uint64_t seed = 0;
  std::filesystem::path out;
  std::ostream* log = nullptr;     // progress and diagnostics; may be null
  std::ostream* report = nullptr;  // result tables (verify); may be null
};

int cmd_phases(const json& config, const Context& ctx);
int cmd_project(const json& config, const Context& ctx);
int cmd_baselines(const json& config, const Context& ctx);
int cmd_bosehubbard(const json& config, const Context& ctx);
int cmd_verify(const json& config, const Context& ctx);

/// Creates the output directory and writes manifest.json (command, seed,
/// config echo).
void begin_output(const Context& ctx, const std::string& command, const json& config);

/// Runs a command by name, mapping ConfigError / InvalidInput to 2 and
/// NumericalError or any other failure to 1. The message goes to ctx.log.
int dispatch(const std::string& command, const json& config, const Context& ctx);

/// Entry point of the executable.
int main(int argc, char** argv);

}  // namespace fqsvt::cli
