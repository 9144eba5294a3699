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

#include "mvto/version_list.hpp"

#include <algorithm>
#include <string>

namespace mvto {

std::string to_string(const Conflict& c) {
  return "x" + std::to_string(c.object) + ": " + std::to_string(c.creator) + " < " +
         std::to_string(c.committer) + " < " + std::to_string(c.reader);
}

void VersionTuple::add_reader(Timestamp reader) {
  auto it = std::ranges::lower_bound(readers, reader);
  if (it == readers.end() || *it != reader) readers.insert(it, reader);
}

namespace {

template <typename List>
auto* find_in(List& versions, Timestamp ts) {
  // First tuple with ts >= the reader; the one before it is the target.
  auto it = std::ranges::lower_bound(versions, ts, {}, &VersionTuple::ts);
  return it == versions.begin() ? nullptr : &*std::prev(it);
}

}  // namespace

const VersionTuple* find_version(const VersionList& versions, Timestamp ts) {
  return find_in(versions, ts);
}

VersionTuple* find_version(VersionList& versions, Timestamp ts) { return find_in(versions, ts); }

std::optional<Conflict> find_conflict(const VersionList& versions, ObjectId obj, Timestamp ts) {
  for (const VersionTuple& t : versions) {
    if (t.ts >= ts) break;
    // readers is sorted, so the largest reader decides.
    if (!t.readers.empty() && t.readers.back() > ts) {
      auto k = std::ranges::upper_bound(t.readers, ts);
      return Conflict{obj, t.ts, ts, *k};
    }
  }
  return std::nullopt;
}

void insert_version(VersionList& versions, VersionTuple tuple) {
  auto it = std::ranges::lower_bound(versions, tuple.ts, {}, &VersionTuple::ts);
  if (it != versions.end() && it->ts == tuple.ts) {
    throw InvariantViolation("duplicate version ts " + std::to_string(tuple.ts));
  }
  versions.insert(it, std::move(tuple));
}

}  // namespace mvto
