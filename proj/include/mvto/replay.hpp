// Copyright 2026 The MVTO Authors.
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

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mvto/history.hpp"
#include "mvto/types.hpp"

namespace mvto::harness {

/// One line of a replay script: `step <thread> <b|r|w|c|a> [obj] [val]`.
struct ScriptStep {
  std::uint32_t thread = 0;
  history::EventKind op = history::EventKind::kBegin;
  ObjectId object = 0;
  std::optional<Value> value;
  std::size_t line = 0;
};

/// Parses a script. Objects are `x<n>` or bare integers. Throws
/// history::ParseError for malformed lines, operations on a thread with no
/// open transaction, a second begin, reads after writes, a write without a
/// value, or objects beyond `object_count` (when given).
std::vector<ScriptStep> parse_script(std::string_view text,
                                     std::optional<std::size_t> object_count = std::nullopt);
std::vector<ScriptStep> read_script(const std::string& path,
                                    std::optional<std::size_t> object_count = std::nullopt);

struct ReplayOptions {
  /// Defaults to the largest object the script mentions.
  std::optional<std::size_t> object_count;
  std::optional<std::size_t> gc_threshold;
};

/// Executes the script on one OS thread per script thread, admitting
/// exactly one step at a time in script order. Returns the recorded history.
history::History replay(const std::vector<ScriptStep>& steps, const ReplayOptions& options = {});

}  // namespace mvto::harness
