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

#include <atomic>
#include <cstddef>
#include <mutex>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "mvto/gc.hpp"
#include "mvto/observer.hpp"
#include "mvto/ticket_mutex.hpp"
#include "mvto/types.hpp"
#include "mvto/version_list.hpp"

namespace mvto {

struct StmConfig {
  std::size_t object_count = 1;
  /// Enables version garbage collection when set.
  std::optional<gc::GcConfig> gc;
};

enum class TxStatus { kLive, kCommitted, kAborted };

const char* to_string(TxStatus status);

/// Handle of one transaction. Owned by a single thread at a time.
class Transaction {
 public:
  using Entry = std::pair<ObjectId, Value>;

  Timestamp id() const { return id_; }
  TxStatus status() const { return status_; }
  bool live() const { return status_ == TxStatus::kLive; }
  const std::vector<Entry>& read_set() const { return read_set_; }
  /// At most one entry per object; a later write replaces the value.
  const std::vector<Entry>& write_set() const { return write_set_; }

 private:
  friend class Stm;
  explicit Transaction(Timestamp id) : id_(id) {}

  Timestamp id_;
  TxStatus status_ = TxStatus::kLive;
  std::vector<Entry> read_set_;
  std::vector<Entry> write_set_;
};

struct CommitResult {
  bool committed = false;
  /// Set on abort: the version/reader pair that forbade the commit.
  std::optional<Conflict> conflict;

  explicit operator bool() const { return committed; }
};

/// Multi-version timestamp-ordering STM over a fixed set of integer objects.
///
/// Reads pick the newest version older than the reader and never abort.
/// Writes are buffered until tryCommit, which locks the written objects in
/// ascending id order and aborts only if some reader k already read a
/// version j with j < id < k. The live list ranks above every object in the
/// lock order, which makes the protocol deadlock-free.
class Stm {
 public:
  explicit Stm(StmConfig config, Observer* observer = nullptr);

  Stm(const Stm&) = delete;
  Stm& operator=(const Stm&) = delete;

  Transaction begin();
  Value read(Transaction& tx, ObjectId obj);
  void write(Transaction& tx, ObjectId obj, Value value);
  CommitResult try_commit(Transaction& tx);
  void try_abort(Transaction& tx);

  std::size_t object_count() const { return object_count_; }
  bool gc_enabled() const { return config_.gc.has_value(); }
  const StmConfig& config() const { return config_; }
  LockRank live_list_rank() const { return static_cast<LockRank>(object_count_ + 1); }

  /// Snapshot of an object's version list, taken under its lock.
  VersionList versions(ObjectId obj) const;
  std::vector<Timestamp> live_ids() const;
  /// The id the next begin() will hand out.
  Timestamp next_timestamp() const;
  std::uint64_t versions_inserted() const { return inserted_.load(std::memory_order_relaxed); }
  std::uint64_t versions_deleted() const { return deleted_.load(std::memory_order_relaxed); }

 private:
  TObject& object(ObjectId obj);
  const TObject& object(ObjectId obj) const;
  void require_live(const Transaction& tx, const char* op) const;
  void lock_object(const Transaction& tx, TObject& obj, std::vector<std::unique_lock<TicketMutex>>& held);
  // Caller holds live_mutex_.
  void remove_id(Timestamp id);

  StmConfig config_;
  std::size_t object_count_;
  Observer* observer_;
  std::vector<TObject> objects_;

  mutable TicketMutex live_mutex_;
  Timestamp counter_ = 1;
  std::set<Timestamp> live_;

  std::atomic<std::uint64_t> inserted_{0};
  std::atomic<std::uint64_t> deleted_{0};
};

}  // namespace mvto
