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
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "mvto/history.hpp"
#include "mvto/observer.hpp"

namespace mvto::history {

/// A version deletion, positioned relative to the recorded events: it
/// happened after event `position - 1` and before event `position`.
struct DeletionRecord {
  std::size_t position = 0;
  Timestamp committer = 0;
  std::string object;
  Timestamp version_ts = 0;
};

struct AbortRecord {
  Timestamp tx = 0;
  std::optional<Conflict> conflict;
};

/// Thread-safe observer that turns Stm callbacks into a History. Appends
/// are serialized by an internal mutex; since each callback runs inside the
/// lock that orders its operation, the recorded order extends the
/// lock-derived order of the run.
class Recorder : public Observer {
 public:
  void on_begin(Timestamp tx) override;
  void on_read(Timestamp tx, ObjectId obj, Value v) override;
  void on_write(Timestamp tx, ObjectId obj, Value v) override;
  void on_commit(Timestamp tx) override;
  void on_abort(Timestamp tx, const std::optional<Conflict>& conflict) override;
  void on_version_deleted(Timestamp committer, ObjectId obj, Timestamp version_ts) override;

  /// Appends an event after checking it against the well-formedness rules.
  /// A violation marks the recording invalid; the event is still kept.
  void record(Event e);

  History history() const;
  std::vector<DeletionRecord> deletions() const;
  std::vector<AbortRecord> aborts() const;
  bool valid() const;
  /// First well-formedness violation, if any.
  std::optional<std::string> violation() const;

 private:
  mutable std::mutex mu_;
  History history_;
  std::unordered_map<Timestamp, TxPhase> phase_;
  std::vector<DeletionRecord> deletions_;
  std::vector<AbortRecord> aborts_;
  std::optional<std::string> violation_;
};

}  // namespace mvto::history
