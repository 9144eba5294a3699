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

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mvto/checker.hpp"
#include "mvto/history.hpp"
#include "mvto/recorder.hpp"
#include "mvto/types.hpp"

namespace mvto::harness {

struct Range {
  std::uint32_t min = 0;
  std::uint32_t max = 0;
};

/// Parses "A..B" or a single number "A".
Range parse_range(const std::string& text);

struct WorkloadConfig {
  std::uint32_t threads = 4;
  std::uint32_t transactions_per_thread = 50;
  std::uint32_t objects = 8;
  Range reads{1, 4};
  Range writes{1, 3};
  double read_only_fraction = 0.25;
  /// Unset disables garbage collection.
  std::optional<std::size_t> gc_threshold = 8;
  std::uint64_t seed = 1;
  std::optional<std::string> dump_path;
  std::chrono::milliseconds watchdog{30'000};
  /// Yield the CPU after every operation so transactions overlap even on
  /// few cores.
  bool yield_between_ops = true;
};

/// Throws UsageError for zero counts, empty ranges, or a fraction outside [0, 1].
void validate(const WorkloadConfig& config);

/// Operations of one generated transaction. Reads come first, then writes.
struct TxScript {
  std::vector<ObjectId> reads;
  std::vector<ObjectId> writes;

  bool read_only() const { return writes.empty(); }
  friend bool operator==(const TxScript&, const TxScript&) = default;
};

/// Per-thread transaction scripts. Identical for identical seed and config.
std::vector<std::vector<TxScript>> generate_scripts(const WorkloadConfig& config);

/// Value written by transaction `tx` as its `op`-th operation, on `obj`.
/// Distinct for distinct arguments and never 0.
Value encode_value(Timestamp tx, ObjectId obj, std::uint32_t op);

struct RunReport {
  std::uint64_t committed_read_only = 0;
  std::uint64_t committed_update = 0;
  std::uint64_t aborted_read_only = 0;
  std::uint64_t aborted_update = 0;
  /// Indexed by object id - 1.
  std::vector<std::uint64_t> deletions_per_object;
  std::uint64_t versions_deleted = 0;

  bool watchdog_expired = false;
  std::uint64_t lock_acquisitions = 0;
  std::uint64_t lock_order_violations = 0;
  /// Aborts that carried no version-check witness.
  std::uint64_t unattributed_aborts = 0;
  std::vector<Conflict> abort_witnesses;

  checker::Verdict verdict;
  history::History history;
  std::vector<history::DeletionRecord> deletions;
  std::optional<std::string> recorder_violation;
  /// Exceptions escaping worker threads.
  std::vector<std::string> errors;
  std::chrono::duration<double> wall_time{};

  bool ok() const;
  std::string to_text() const;
  /// One `key=value` line per field.
  std::string to_key_values() const;
};

/// Runs the workload on fresh STM state, one OS thread per worker, records
/// the history, and checks it under the timestamp version order.
RunReport run(const WorkloadConfig& config);

}  // namespace mvto::harness
