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

#include <cstdint>
#include <stdexcept>
#include <string>

namespace mvto {

/// Transaction id. Doubles as the timestamp of every version the
/// transaction creates. 0 is reserved for the initializing transaction.
using Timestamp = std::uint64_t;

/// Position of a t-object in the global lock order, 1-based.
using ObjectId = std::uint32_t;

using Value = std::int64_t;

inline constexpr Timestamp kInitialTs = 0;

/// Thrown when a caller breaks the API contract: operating on a finished
/// transaction, reading after writing, unknown object ids, bad config.
class UsageError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Thrown when an internal invariant of the protocol does not hold. Seeing
/// one means a bug in this library, never a caller mistake.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Witness for a failed version check: some transaction `reader` read the
/// version created by `creator`, and the committing transaction `committer`
/// falls strictly between them.
struct Conflict {
  ObjectId object = 0;
  Timestamp creator = 0;
  Timestamp committer = 0;
  Timestamp reader = 0;

  friend bool operator==(const Conflict&, const Conflict&) = default;
};

std::string to_string(const Conflict& c);

}  // namespace mvto
