// Copyright 2026 The barstress Authors.
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

// Run configuration for the barstress command-line tool.
//
// A run is described by one JSON document. Values are layered, later layers
// winning: built-in defaults, --config file, command positionals, dotted-key
// flags (--welch.window_len 5), and the global flags (--out, --seed, ...).
// Every key must exist in the defaults, so typos are reported instead of
// silently ignored.

#ifndef BARSTRESS_TOOLS_CLI_CONFIG_H_
#define BARSTRESS_TOOLS_CLI_CONFIG_H_

#include <stdexcept>
#include <string>
#include <string_view>

#include "json.hpp"

namespace barstress_cli {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitIo = 3;
inline constexpr int kExitNonConvergence = 4;

class CliError : public std::runtime_error {
 public:
  CliError(int exit_code, const std::string& message)
      : std::runtime_error(message), exit_code_(exit_code) {}
  int exit_code() const { return exit_code_; }

 private:
  int exit_code_;
};

[[noreturn]] inline void UsageError(const std::string& message) {
  throw CliError(kExitUsage, message);
}
[[noreturn]] inline void IoError(const std::string& message) {
  throw CliError(kExitIo, message);
}

Json DefaultConfig();

// Recursively merges `layer` into `config`. `where` names the layer in
// diagnostics.
void MergeLayer(Json& config, const Json& layer, std::string_view where);

// Sets a dotted key path from its textual value. The text is parsed as JSON
// when possible (numbers, booleans, arrays), otherwise taken as a string.
void ApplyOverride(Json& config, std::string_view dotted_key, std::string_view text);

// Parses a config file; the document must carry schema_version == 1.
Json LoadConfigFile(const std::string& path);

std::string ReadFile(const std::string& path);
Json ParseJson(std::string_view text, const std::string& origin);

}  // namespace barstress_cli

#endif  // BARSTRESS_TOOLS_CLI_CONFIG_H_
