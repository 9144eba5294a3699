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
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mvto/types.hpp"

namespace mvto::history {

enum class EventKind : char {
  kBegin = 'b',
  kRead = 'r',
  kWrite = 'w',
  kCommit = 'c',
  kAbort = 'a',
};

/// One transactional event. Reads and writes carry an object and a value;
/// the other kinds carry neither (object empty, value 0).
struct Event {
  EventKind kind = EventKind::kBegin;
  Timestamp tx = 0;
  std::string object;
  Value value = 0;
  /// Position in the owning history, 0-based and gap-free.
  std::uint64_t seq = 0;

  bool is_terminal() const { return kind == EventKind::kCommit || kind == EventKind::kAbort; }
  bool has_operand() const { return kind == EventKind::kRead || kind == EventKind::kWrite; }

  friend bool operator==(const Event&, const Event&) = default;
};

Event begin_event(Timestamp tx);
Event read_event(Timestamp tx, std::string object, Value value);
Event write_event(Timestamp tx, std::string object, Value value);
Event commit_event(Timestamp tx);
Event abort_event(Timestamp tx);

/// Canonical object name, "x<id>".
std::string object_name(ObjectId id);

/// Totally ordered event sequence.
struct History {
  std::vector<Event> events;

  /// Appends `e`, overwriting its seq with the next position.
  void append(Event e);
  std::size_t size() const { return events.size(); }
  bool empty() const { return events.empty(); }

  friend bool operator==(const History&, const History&) = default;
};

/// Per-transaction progress through the well-formedness automaton.
enum class TxPhase { kUnseen, kStarted, kReading, kWriting, kDone };

/// Moves `phase` past an event of `kind`; returns a message when the event
/// is not allowed in the current phase (phase is left unchanged).
std::optional<std::string> advance_phase(TxPhase& phase, EventKind kind);

struct WellFormednessError {
  std::size_t event_index = 0;
  std::string message;
};

/// Checks that every transaction is an optional begin, then reads, then
/// writes, then at most one terminal event, with nothing after it, that
/// transaction 0 never appears, and that seq numbers are 0..n-1.
std::optional<WellFormednessError> find_well_formedness_error(const History& h);
inline bool is_well_formed(const History& h) { return !find_well_formedness_error(h); }

/// Transaction ids in order of first appearance.
std::vector<Timestamp> transactions(const History& h);

/// Completion: every transaction without a terminal event gets an abort
/// inserted immediately after its last event. Identity on complete input.
History complete(const History& h);

/// One event per line: `b <tx>`, `r <tx> <obj> <val>`, `w <tx> <obj> <val>`,
/// `c <tx>`, `a <tx>`.
std::string serialize(const History& h);
std::string format_event(const Event& e);

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& message);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Parses the text format. `#` starts a comment; blank lines are skipped.
/// Bare integer object names are normalized to `x<n>`. Rejects malformed
/// lines and histories that are not well-formed, citing the line.
History parse(std::string_view text);

History read_file(const std::string& path);
void write_file(const std::string& path, const History& h);

}  // namespace mvto::history
