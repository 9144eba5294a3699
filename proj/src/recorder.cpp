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

#include "mvto/recorder.hpp"

namespace mvto::history {

void Recorder::on_begin(Timestamp tx) { record(begin_event(tx)); }

void Recorder::on_read(Timestamp tx, ObjectId obj, Value v) { record(read_event(tx, object_name(obj), v)); }

void Recorder::on_write(Timestamp tx, ObjectId obj, Value v) { record(write_event(tx, object_name(obj), v)); }

void Recorder::on_commit(Timestamp tx) { record(commit_event(tx)); }

void Recorder::on_abort(Timestamp tx, const std::optional<Conflict>& conflict) {
  {
    std::lock_guard guard(mu_);
    aborts_.push_back(AbortRecord{tx, conflict});
  }
  record(abort_event(tx));
}

void Recorder::on_version_deleted(Timestamp committer, ObjectId obj, Timestamp version_ts) {
  std::lock_guard guard(mu_);
  deletions_.push_back(DeletionRecord{history_.size(), committer, object_name(obj), version_ts});
}

void Recorder::record(Event e) {
  std::lock_guard guard(mu_);
  if (auto err = advance_phase(phase_[e.tx], e.kind); err && !violation_) {
    violation_ = "event " + std::to_string(history_.size()) + " (" + format_event(e) + "): " + *err;
  }
  history_.append(std::move(e));
}

History Recorder::history() const {
  std::lock_guard guard(mu_);
  return history_;
}

std::vector<DeletionRecord> Recorder::deletions() const {
  std::lock_guard guard(mu_);
  return deletions_;
}

std::vector<AbortRecord> Recorder::aborts() const {
  std::lock_guard guard(mu_);
  return aborts_;
}

bool Recorder::valid() const {
  std::lock_guard guard(mu_);
  return !violation_;
}

std::optional<std::string> Recorder::violation() const {
  std::lock_guard guard(mu_);
  return violation_;
}

}  // namespace mvto::history
