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

#include "mvto/stm.hpp"

#include <algorithm>
#include <string>

namespace mvto {

const char* to_string(TxStatus status) {
  switch (status) {
    case TxStatus::kLive:
      return "live";
    case TxStatus::kCommitted:
      return "committed";
    case TxStatus::kAborted:
      return "aborted";
  }
  return "?";
}

Stm::Stm(StmConfig config, Observer* observer)
    : config_(config), object_count_(config.object_count), observer_(observer), objects_(config.object_count) {
  if (object_count_ == 0) throw UsageError("object count must be positive");
  if (config_.gc) gc::validate(*config_.gc);
  for (std::size_t i = 0; i < object_count_; ++i) {
    objects_[i].id = static_cast<ObjectId>(i + 1);
    objects_[i].versions.push_back(VersionTuple{kInitialTs, 0, {}, std::nullopt});
  }
}

TObject& Stm::object(ObjectId obj) {
  if (obj == 0 || obj > object_count_) throw UsageError("unknown object x" + std::to_string(obj));
  return objects_[obj - 1];
}

const TObject& Stm::object(ObjectId obj) const {
  if (obj == 0 || obj > object_count_) throw UsageError("unknown object x" + std::to_string(obj));
  return objects_[obj - 1];
}

void Stm::require_live(const Transaction& tx, const char* op) const {
  if (!tx.live()) {
    throw UsageError(std::string(op) + " on " + to_string(tx.status()) + " transaction " +
                     std::to_string(tx.id()));
  }
}

Transaction Stm::begin() {
  std::lock_guard guard(live_mutex_);
  const Timestamp id = counter_++;
  live_.insert(id);
  if (observer_) {
    observer_->on_lock(id, live_list_rank());
    observer_->on_begin(id);
  }
  return Transaction(id);
}

Value Stm::read(Transaction& tx, ObjectId obj) {
  require_live(tx, "read");
  if (!tx.write_set_.empty()) {
    throw UsageError("transaction " + std::to_string(tx.id()) + " reads after writing");
  }
  TObject& x = object(obj);
  Value value;
  {
    std::lock_guard guard(x.mutex);
    if (observer_) observer_->on_lock(tx.id(), obj);
    VersionTuple* version = find_version(x.versions, tx.id());
    if (version == nullptr) {
      throw InvariantViolation("no version of x" + std::to_string(obj) + " below " +
                               std::to_string(tx.id()));
    }
    version->add_reader(tx.id());
    value = version->value;
    if (observer_) observer_->on_read(tx.id(), obj, value);
  }
  auto seen = std::ranges::find(tx.read_set_, obj, &Transaction::Entry::first);
  if (seen == tx.read_set_.end()) tx.read_set_.emplace_back(obj, value);
  return value;
}

void Stm::write(Transaction& tx, ObjectId obj, Value value) {
  require_live(tx, "write");
  object(obj);  // range check
  auto it = std::ranges::find(tx.write_set_, obj, &Transaction::Entry::first);
  if (it == tx.write_set_.end()) {
    tx.write_set_.emplace_back(obj, value);
  } else {
    it->second = value;
  }
  if (observer_) observer_->on_write(tx.id(), obj, value);
}

void Stm::remove_id(Timestamp id) {
  if (live_.erase(id) == 0) {
    throw InvariantViolation("transaction " + std::to_string(id) + " missing from live list");
  }
}

void Stm::lock_object(const Transaction& tx, TObject& obj,
                      std::vector<std::unique_lock<TicketMutex>>& held) {
  held.emplace_back(obj.mutex);
  if (observer_) observer_->on_lock(tx.id(), obj.id);
}

CommitResult Stm::try_commit(Transaction& tx) {
  require_live(tx, "tryCommit");
  if (observer_) observer_->on_commit_start(tx.id());

  if (tx.write_set_.empty()) {
    std::lock_guard guard(live_mutex_);
    if (observer_) observer_->on_lock(tx.id(), live_list_rank());
    remove_id(tx.id());
    tx.status_ = TxStatus::kCommitted;
    if (observer_) observer_->on_commit(tx.id());
    return CommitResult{true, std::nullopt};
  }

  std::vector<Transaction::Entry> writes = tx.write_set_;
  std::ranges::sort(writes, {}, &Transaction::Entry::first);

  std::vector<std::unique_lock<TicketMutex>> held;
  held.reserve(writes.size());
  std::unique_lock live_guard(live_mutex_, std::defer_lock);
  auto lock_live = [&] {
    if (live_guard.owns_lock()) return;
    live_guard.lock();
    if (observer_) observer_->on_lock(tx.id(), live_list_rank());
  };

  for (const auto& [obj, value] : writes) {
    TObject& x = object(obj);
    lock_object(tx, x, held);
    if (auto conflict = find_conflict(x.versions, obj, tx.id())) {
      lock_live();
      remove_id(tx.id());
      tx.status_ = TxStatus::kAborted;
      if (observer_) observer_->on_abort(tx.id(), conflict);
      return CommitResult{false, conflict};
    }
  }

  for (const auto& [obj, value] : writes) {
    TObject& x = object(obj);
    if (!config_.gc) {
      insert_version(x.versions, VersionTuple{tx.id(), value, {}, std::nullopt});
      inserted_.fetch_add(1, std::memory_order_relaxed);
      continue;
    }
    gc::insert_tuple(x.versions, tx.id(), value);
    inserted_.fetch_add(1, std::memory_order_relaxed);
    if (gc::needs_collection(x.versions, *config_.gc)) {
      // The live-list lock stays held until remove_id below.
      lock_live();
      for (Timestamp ts : gc::collect(x.versions, live_)) {
        deleted_.fetch_add(1, std::memory_order_relaxed);
        if (observer_) observer_->on_version_deleted(tx.id(), obj, ts);
      }
    }
  }

  lock_live();
  remove_id(tx.id());
  tx.status_ = TxStatus::kCommitted;
  if (observer_) observer_->on_commit(tx.id());
  return CommitResult{true, std::nullopt};
}

void Stm::try_abort(Transaction& tx) {
  require_live(tx, "tryAbort");
  std::lock_guard guard(live_mutex_);
  if (observer_) observer_->on_lock(tx.id(), live_list_rank());
  remove_id(tx.id());
  tx.status_ = TxStatus::kAborted;
  tx.write_set_.clear();
  if (observer_) observer_->on_abort(tx.id(), std::nullopt);
}

VersionList Stm::versions(ObjectId obj) const {
  const TObject& x = object(obj);
  std::lock_guard guard(x.mutex);
  return x.versions;
}

std::vector<Timestamp> Stm::live_ids() const {
  std::lock_guard guard(live_mutex_);
  return {live_.begin(), live_.end()};
}

Timestamp Stm::next_timestamp() const {
  std::lock_guard guard(live_mutex_);
  return counter_;
}

}  // namespace mvto
