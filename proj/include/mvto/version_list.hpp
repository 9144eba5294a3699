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

#include <optional>
#include <vector>

#include "mvto/ticket_mutex.hpp"
#include "mvto/types.hpp"

namespace mvto {

/// One committed version of a t-object.
struct VersionTuple {
  Timestamp ts = kInitialTs;
  Value value = 0;
  /// Ids of transactions that read this version. Sorted, no duplicates.
  std::vector<Timestamp> readers;
  /// Creator of the next present version of the same object. Only
  /// maintained when garbage collection is enabled.
  std::optional<Timestamp> next_ts;

  void add_reader(Timestamp reader);

  friend bool operator==(const VersionTuple&, const VersionTuple&) = default;
};

/// Versions of one object, sorted by ts ascending with distinct ts.
using VersionList = std::vector<VersionTuple>;

/// The version with the largest ts strictly below `ts`, or nullptr.
const VersionTuple* find_version(const VersionList& versions, Timestamp ts);
VersionTuple* find_version(VersionList& versions, Timestamp ts);

/// First tuple ⟨j, rl⟩ with a reader k in rl such that j < ts < k.
std::optional<Conflict> find_conflict(const VersionList& versions, ObjectId obj, Timestamp ts);

/// True when committing `ts` to this object keeps every earlier read
/// consistent, i.e. no version/reader pair straddles `ts`.
inline bool check_versions(const VersionList& versions, Timestamp ts) {
  return !find_conflict(versions, 0, ts).has_value();
}

/// Sorted insertion. Throws InvariantViolation on a duplicate ts.
void insert_version(VersionList& versions, VersionTuple tuple);

/// A shared t-object: its version list and the lock guarding it.
struct TObject {
  ObjectId id = 0;
  VersionList versions;
  mutable TicketMutex mutex;
};

}  // namespace mvto
