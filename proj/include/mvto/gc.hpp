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
#include <set>
#include <vector>

#include "mvto/version_list.hpp"

// Version garbage collection.
//
// Every tuple carries next_ts, the creator of the next present version. A
// tuple t may be dropped once a newer version exists (next_ts set) and no
// live transaction has an id in the open range (t.ts, t.next_ts): any such
// transaction could still select t as its read target, and none can be
// created later because new ids exceed every committed timestamp.
//
// All functions here expect the caller to hold the object's lock; collect()
// additionally expects the live-list lock.
namespace mvto::gc {

struct GcConfig {
  /// Collection runs on an object when it holds more than this many
  /// versions. Must be at least 1.
  std::size_t threshold = 8;
};

void validate(const GcConfig& config);

/// Inserts ⟨ts, value⟩ and splices it into the next_ts chain: the new tuple
/// inherits its predecessor's next_ts and the predecessor now points at ts.
void insert_tuple(VersionList& versions, Timestamp ts, Value value);

inline bool needs_collection(const VersionList& versions, const GcConfig& config) {
  return versions.size() > config.threshold;
}

/// True when no live id lies strictly between ts and next_ts.
bool is_garbage(const VersionTuple& tuple, const std::set<Timestamp>& live);

/// Deletes every garbage tuple and redirects the surviving predecessor's
/// next_ts past it. The newest version (next_ts empty) always survives.
/// Returns the timestamps of the deleted tuples in ascending order.
std::vector<Timestamp> collect(VersionList& versions, const std::set<Timestamp>& live);

}  // namespace mvto::gc
