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

#include <string>
#include <vector>

#include "mvto/history.hpp"
#include "mvto/recorder.hpp"

// Oracles over recorded histories. They only look at events, never at STM
// internals, and assume transaction ids are timestamps.
namespace mvto::harness {

struct InvariantReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

/// Transactions begin in ascending id order and ids are never reused.
InvariantReport check_timestamp_order(const history::History& h);

/// Each read returns the value of the committed writer of that object with
/// the largest id below the reader, as of the read.
InvariantReport check_read_rule(const history::History& h);

/// For every reads-from pair (j wrote x, k read it) and every committed
/// writer i of x: never j < i < k.
InvariantReport check_write_rule(const history::History& h);

/// A transaction with no writes never aborts unless it asked to.
InvariantReport check_read_only_never_aborts(const history::History& h);

/// Replays deletions against the history: a deleted version must never be
/// the read target (largest committed writer below the id) of a transaction
/// that is live at the time of deletion or that begins later, and must not
/// be deleted twice.
InvariantReport check_gc_safety(const history::History& h,
                                const std::vector<history::DeletionRecord>& deletions);

}  // namespace mvto::harness
