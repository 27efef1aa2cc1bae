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

#ifndef BARSTRESS_TOOLS_CLI_COMMANDS_H_
#define BARSTRESS_TOOLS_CLI_COMMANDS_H_

#include "cli_config.h"

namespace barstress_cli {

// Each command reads the merged configuration, computes everything in
// memory, then writes its artifacts into config["out"]. Returns the process
// exit code; failures are reported by throwing CliError.
int RunPsd(const Json& config);
int RunBar(const Json& config);
int RunFit(const Json& config);
int RunTopo(const Json& config);
int RunSynth(const Json& config);
int RunReport(const Json& config);

}  // namespace barstress_cli

#endif  // BARSTRESS_TOOLS_CLI_COMMANDS_H_
