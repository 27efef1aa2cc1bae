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

// Montage assets: the bundled default layout and JSON montage files.
//
// Montage JSON:
//   {"name": "...", "electrodes": [{"label": "Fz", "x": 0.0, "y": 0.45,
//                                   "kind": "eeg"}, ...]}
// where kind is "eeg" (default) or "reference".

#ifndef BARSTRESS_CORE_MONTAGE_H_
#define BARSTRESS_CORE_MONTAGE_H_

#include <string>
#include <string_view>

#include "core/signal.h"

namespace barstress {

Montage MontageFromJson(std::string_view text);
std::string MontageToJson(const Montage& montage);

// Resolves a montage by name or path:
//   1. an existing file path is parsed as montage JSON;
//   2. if BARSTRESS_MONTAGE_DIR is set and <dir>/<name>.json exists, that
//      file is used;
//   3. "default" resolves to Montage::Default().
// Anything else throws kIo.
Montage LoadMontage(const std::string& name_or_path);

}  // namespace barstress

#endif  // BARSTRESS_CORE_MONTAGE_H_
