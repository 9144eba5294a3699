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

#include "mvto/gc.hpp"

#include <string>

namespace mvto::gc {

void validate(const GcConfig& config) {
  if (config.threshold < 1) throw UsageError("gc threshold must be at least 1");
}

void insert_tuple(VersionList& versions, Timestamp ts, Value value) {
  VersionTuple cur{ts, value, {}, std::nullopt};
  if (VersionTuple* prev = find_version(versions, ts)) {
    cur.next_ts = prev->next_ts;
    prev->next_ts = ts;
  }
  insert_version(versions, std::move(cur));
}

bool is_garbage(const VersionTuple& tuple, const std::set<Timestamp>& live) {
  if (!tuple.next_ts) return false;
  auto it = live.upper_bound(tuple.ts);
  return it == live.end() || *it >= *tuple.next_ts;
}

std::vector<Timestamp> collect(VersionList& versions, const std::set<Timestamp>& live) {
  std::vector<Timestamp> deleted;
  VersionList kept;
  kept.reserve(versions.size());
  for (VersionTuple& t : versions) {
    if (!is_garbage(t, live)) {
      kept.push_back(std::move(t));
      continue;
    }
    if (!kept.empty()) kept.back().next_ts = t.next_ts;
    deleted.push_back(t.ts);
  }
  versions = std::move(kept);
  return deleted;
}

}  // namespace mvto::gc
