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
#include <optional>

#include "mvto/types.hpp"

namespace mvto {

/// Rank of a shared lock in the global acquisition order. Objects use their
/// id (1..n); the live list ranks above every object.
using LockRank = std::uint32_t;

/// Hooks invoked by Stm at each operation's linearization point. Event hooks
/// run inside the critical section that orders the operation: begin under
/// the live-list lock, read under the object lock, commit and abort under
/// the live-list lock with all written objects still held.
///
/// Implementations must be thread-safe; hooks are called concurrently from
/// every thread driving a transaction.
class Observer {
 public:
  virtual ~Observer() = default;

  virtual void on_begin(Timestamp /*tx*/) {}
  virtual void on_read(Timestamp /*tx*/, ObjectId /*obj*/, Value /*v*/) {}
  virtual void on_write(Timestamp /*tx*/, ObjectId /*obj*/, Value /*v*/) {}
  virtual void on_commit(Timestamp /*tx*/) {}
  /// `conflict` is set when the abort came from a failed version check.
  virtual void on_abort(Timestamp /*tx*/, const std::optional<Conflict>& /*conflict*/) {}

  /// Marks the start of a tryCommit; lock acquisitions until the matching
  /// on_commit/on_abort belong to that commit.
  virtual void on_commit_start(Timestamp /*tx*/) {}
  virtual void on_lock(Timestamp /*tx*/, LockRank /*rank*/) {}

  /// A version tuple was removed by garbage collection while `committer`
  /// was inserting its own versions.
  virtual void on_version_deleted(Timestamp /*committer*/, ObjectId /*obj*/,
                                  Timestamp /*version_ts*/) {}
};

}  // namespace mvto
