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
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mvto/history.hpp"
#include "mvto/types.hpp"

// Opacity checking through the opacity graph.
//
// Given a history H and a version order << (a total order per object over
// the versions written by committed transactions), OPG(H, <<) has a vertex
// per transaction of the completion of H plus the initial transaction 0,
// and three kinds of edges:
//
//   rt  Ti -> Tj  Ti is complete in H and its last event precedes Tj's first.
//   rf  Ti -> Tj  Tj read a value Ti wrote.
//   mv  for a read rk(x, v) of Tj's version and another committed writer Ti
//       of x: Ti -> Tj if xi << xj, else Tk -> Ti.
//
// A valid history is opaque iff some version order gives an acyclic graph;
// a topological sort then yields the equivalent legal t-sequential history.
namespace mvto::checker {

using history::Event;
using history::History;

/// Thrown when a history cannot be analysed: it is not well-formed, or two
/// committed transactions wrote the same value to the same object (which
/// makes reads-from ambiguous).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Per object, the committed writers (including 0) in version order.
struct VersionOrder {
  std::map<std::string, std::vector<Timestamp>> objects;

  friend bool operator==(const VersionOrder&, const VersionOrder&) = default;
};

std::string to_string(const VersionOrder& order);

enum class EdgeKind : std::uint8_t { kRealTime, kReadsFrom, kMultiVersion };

const char* to_string(EdgeKind kind);

struct Edge {
  Timestamp from = 0;
  Timestamp to = 0;
  EdgeKind kind = EdgeKind::kRealTime;

  friend auto operator<=>(const Edge&, const Edge&) = default;
};

struct OpacityGraph {
  /// Ascending; always starts with 0.
  std::vector<Timestamp> vertices;
  /// Sorted, no duplicates. The same pair may appear under several kinds.
  std::vector<Edge> edges;

  bool has_edge(Timestamp from, Timestamp to, EdgeKind kind) const;
  std::vector<Edge> edges_of(EdgeKind kind) const;
};

enum class Termination { kNone, kCommitted, kAborted };

struct TxInfo {
  Timestamp id = 0;
  std::size_t first = 0;
  std::size_t last = 0;
  Termination termination = Termination::kNone;
  /// Last value written per object.
  std::map<std::string, Value> writes;

  bool committed() const { return termination == Termination::kCommitted; }
  bool complete() const { return termination != Termination::kNone; }
};

struct ReadInfo {
  std::size_t index = 0;
  Timestamp tx = 0;
  std::string object;
  Value value = 0;
};

/// Facts about a history that every check consumes.
class Analysis {
 public:
  /// Throws InputError on ill-formed input or ambiguous reads-from.
  explicit Analysis(const History& h);

  const History& history() const { return *history_; }
  const std::map<Timestamp, TxInfo>& transactions() const { return txs_; }
  const std::vector<ReadInfo>& reads() const { return reads_; }
  /// Committed writers per object, ascending, including 0 for every object
  /// the history mentions.
  const std::map<std::string, std::vector<Timestamp>>& writers() const { return writers_; }
  /// The committed transaction (or 0 for value 0) that wrote `value` to
  /// `object`, if any.
  std::optional<Timestamp> source_of(const std::string& object, Value value) const;
  /// Position of the commit event, or nullopt (0 commits before everything).
  std::optional<std::size_t> commit_index(Timestamp tx) const;

 private:
  const History* history_;
  std::map<Timestamp, TxInfo> txs_;
  std::vector<ReadInfo> reads_;
  std::map<std::string, std::vector<Timestamp>> writers_;
  std::map<std::pair<std::string, Value>, Timestamp> source_;
};

struct ValidityReport {
  bool valid = true;
  std::optional<std::size_t> offending_event;
  std::string detail;
};

/// Every read returns a value written by a transaction that committed
/// before the read (0 counts as committed before everything).
ValidityReport check_validity(const History& h);
inline bool is_valid(const History& h) { return check_validity(h).valid; }

/// No two transactions overlap: each transaction's events are contiguous
/// and only the final transaction may be incomplete.
bool is_t_sequential(const History& h);

/// Every read of a t-sequential history returns the value written by the
/// latest preceding committed writer of that object. Throws UsageError when
/// `s` is not t-sequential.
bool is_legal(const History& s);

/// Per-event legality report for t-sequential histories; nullopt when legal,
/// else the index of the first offending read.
std::optional<std::size_t> first_illegal_read(const History& s);

/// Versions ordered by the id of their creator.
VersionOrder timestamp_order(const History& h);

/// Versions ordered by commit position in a t-sequential history, with the
/// initial version first.
VersionOrder sequential_order(const History& s);

/// Builds OPG(H, order). rt edges come from `h` itself, every other vertex
/// and edge from its completion (they coincide). Throws UsageError when
/// `order` does not list exactly the committed writers of each object, and
/// InputError when a read has no committed source.
OpacityGraph build_graph(const History& h, const VersionOrder& order);

/// The mv edges alone; depends only on the events, not their order.
std::vector<Edge> mv_edges(const Analysis& a, const VersionOrder& order);

struct CycleCheck {
  bool acyclic = true;
  /// Topological order, ties broken by ascending id. Set when acyclic.
  std::vector<Timestamp> order;
  /// One cycle, listed from its smallest discovered entry. Set when cyclic.
  std::vector<Timestamp> cycle;
};

CycleCheck check_acyclic(const OpacityGraph& g);

enum class Outcome { kOpaque, kNotOpaque, kInvalid, kUndecided };

const char* to_string(Outcome outcome);

struct Verdict {
  Outcome outcome = Outcome::kUndecided;
  /// Witness order when opaque; otherwise the order that was tested (empty
  /// after an exhaustive search found none).
  VersionOrder order;
  std::vector<Timestamp> cycle;
  /// Transactions in serialization order, starting with 0. Set when opaque.
  std::vector<Timestamp> serialization;
  /// Legal t-sequential history equivalent to the completion. Set when opaque.
  History witness;
  std::string detail;
  std::uint64_t orders_tried = 0;

  bool opaque() const { return outcome == Outcome::kOpaque; }
};

/// Concatenates each transaction's events of `completed` in `order`.
History serialize_in_order(const History& completed, const std::vector<Timestamp>& order);

/// True when every rt pair of `h` keeps its order in the t-sequential `s`.
bool respects_real_time(const History& h, const History& s);

/// True when `a` and `b` contain the same events for every transaction.
bool equivalent(const History& a, const History& b);

/// Decides opacity under a fixed version order. When the graph is acyclic
/// the serialization is rebuilt and re-checked for legality, equivalence
/// and real-time order; a failure there throws InvariantViolation.
Verdict check_with_order(const History& h, const VersionOrder& order);

inline constexpr std::uint64_t kDefaultBudget = 1'000'000;

/// Tries every version order (product of per-object permutations), at most
/// `budget` of them. Opaque with the first acyclic order found, not opaque
/// once all orders were tried, undecided when the budget ran out.
Verdict check_brute_force(const History& h, std::uint64_t budget = kDefaultBudget);

/// Timestamp order first, brute force if that order yields a cycle.
Verdict check_auto(const History& h, std::uint64_t budget = kDefaultBudget);

}  // namespace mvto::checker
