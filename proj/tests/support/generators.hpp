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
#include <random>
#include <vector>

#include "mvto/history.hpp"
#include "mvto/recorder.hpp"

// Random inputs shared by the unit and acceptance suites.
namespace mvto::testing {

using Rng = std::mt19937_64;

/// Serial history T1 T2 ... Tn where every read returns the last committed
/// write. Some transactions abort. Written values are unique.
history::History random_legal_sequential(Rng& rng, std::uint32_t txs, std::uint32_t objects);

/// Changes one read of `s` to another committed value of the same object so
/// the result stays valid but is no longer legal. Nullopt when `s` has no
/// read with an alternative value.
std::optional<history::History> mutate_to_illegal(Rng& rng, const history::History& s);

/// Arbitrary well-formed history: random interleaving, optional begin events,
/// random values, some transactions left live.
history::History random_well_formed(Rng& rng, std::uint32_t txs, std::uint32_t objects);

struct InterleavedRun {
  history::History history;
  std::vector<history::DeletionRecord> deletions;
  std::vector<history::AbortRecord> aborts;
  std::uint64_t read_only_aborts = 0;
};

/// Drives the STM from one thread, stepping a randomly chosen live
/// transaction each time. Transactions start at random points, so their
/// lifetimes overlap freely. Some transactions stay live at the end.
InterleavedRun random_interleaved_run(Rng& rng, std::uint32_t txs, std::uint32_t objects,
                                      std::optional<std::size_t> gc_threshold = std::nullopt);

}  // namespace mvto::testing
