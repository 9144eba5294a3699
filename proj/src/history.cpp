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

#include "mvto/history.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace mvto::history {

Event begin_event(Timestamp tx) { return Event{EventKind::kBegin, tx, {}, 0, 0}; }
Event read_event(Timestamp tx, std::string object, Value value) {
  return Event{EventKind::kRead, tx, std::move(object), value, 0};
}
Event write_event(Timestamp tx, std::string object, Value value) {
  return Event{EventKind::kWrite, tx, std::move(object), value, 0};
}
Event commit_event(Timestamp tx) { return Event{EventKind::kCommit, tx, {}, 0, 0}; }
Event abort_event(Timestamp tx) { return Event{EventKind::kAbort, tx, {}, 0, 0}; }

std::string object_name(ObjectId id) { return "x" + std::to_string(id); }

void History::append(Event e) {
  e.seq = events.size();
  events.push_back(std::move(e));
}

std::optional<std::string> advance_phase(TxPhase& phase, EventKind kind) {
  if (phase == TxPhase::kDone) return "event after the transaction terminated";
  switch (kind) {
    case EventKind::kBegin:
      if (phase != TxPhase::kUnseen) return "begin is not the first event of the transaction";
      phase = TxPhase::kStarted;
      return std::nullopt;
    case EventKind::kRead:
      if (phase == TxPhase::kWriting) return "read after write in the same transaction";
      phase = TxPhase::kReading;
      return std::nullopt;
    case EventKind::kWrite:
      phase = TxPhase::kWriting;
      return std::nullopt;
    case EventKind::kCommit:
    case EventKind::kAbort:
      phase = TxPhase::kDone;
      return std::nullopt;
  }
  return "unknown event kind";
}

std::optional<WellFormednessError> find_well_formedness_error(const History& h) {
  std::unordered_map<Timestamp, TxPhase> phases;
  for (std::size_t i = 0; i < h.events.size(); ++i) {
    const Event& e = h.events[i];
    if (e.seq != i) return WellFormednessError{i, "seq " + std::to_string(e.seq) + " at position " + std::to_string(i)};
    if (e.tx == kInitialTs) return WellFormednessError{i, "transaction 0 is reserved"};
    if (e.has_operand() && e.object.empty()) return WellFormednessError{i, "missing object"};
    if (!e.has_operand() && (!e.object.empty() || e.value != 0)) {
      return WellFormednessError{i, "operand on a begin/commit/abort event"};
    }
    if (auto err = advance_phase(phases[e.tx], e.kind)) {
      return WellFormednessError{i, "transaction " + std::to_string(e.tx) + ": " + *err};
    }
  }
  return std::nullopt;
}

std::vector<Timestamp> transactions(const History& h) {
  std::vector<Timestamp> order;
  std::unordered_set<Timestamp> seen;
  for (const Event& e : h.events) {
    if (seen.insert(e.tx).second) order.push_back(e.tx);
  }
  return order;
}

History complete(const History& h) {
  std::unordered_map<Timestamp, std::size_t> last;
  std::unordered_set<Timestamp> finished;
  for (std::size_t i = 0; i < h.events.size(); ++i) {
    last[h.events[i].tx] = i;
    if (h.events[i].is_terminal()) finished.insert(h.events[i].tx);
  }
  History out;
  out.events.reserve(h.events.size());
  for (std::size_t i = 0; i < h.events.size(); ++i) {
    const Event& e = h.events[i];
    out.append(e);
    if (!finished.contains(e.tx) && last[e.tx] == i) out.append(abort_event(e.tx));
  }
  return out;
}

std::string format_event(const Event& e) {
  std::string line(1, static_cast<char>(e.kind));
  line += ' ';
  line += std::to_string(e.tx);
  if (e.has_operand()) {
    line += ' ';
    line += e.object;
    line += ' ';
    line += std::to_string(e.value);
  }
  return line;
}

std::string serialize(const History& h) {
  std::string out;
  for (const Event& e : h.events) {
    out += format_event(e);
    out += '\n';
  }
  return out;
}

ParseError::ParseError(std::size_t line, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}

namespace {

template <typename T>
bool parse_number(std::string_view token, T& out) {
  const char* first = token.data();
  const char* last = token.data() + token.size();
  if (first != last && *first == '+') return false;
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

bool is_identifier(std::string_view token) {
  auto alpha = [](char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; };
  auto digit = [](char c) { return c >= '0' && c <= '9'; };
  if (token.empty() || !alpha(token.front())) return false;
  for (char c : token) {
    if (!alpha(c) && !digit(c)) return false;
  }
  return true;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) tokens.push_back(line.substr(i, j - i));
    i = j;
  }
  return tokens;
}

}  // namespace

History parse(std::string_view text) {
  History h;
  std::vector<std::size_t> line_of;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    auto tok = split(line);
    if (tok.empty()) {
      if (end == text.size()) break;
      continue;
    }
    if (tok[0].size() != 1 || std::string_view("brwca").find(tok[0][0]) == std::string_view::npos) {
      throw ParseError(line_no, "unknown event kind '" + std::string(tok[0]) + "'");
    }
    Event e;
    e.kind = static_cast<EventKind>(tok[0][0]);
    const std::size_t expected = e.has_operand() ? 4 : 2;
    if (tok.size() != expected) {
      throw ParseError(line_no, "expected " + std::to_string(expected) + " fields, got " + std::to_string(tok.size()));
    }
    if (!parse_number(tok[1], e.tx)) throw ParseError(line_no, "bad transaction id '" + std::string(tok[1]) + "'");
    if (e.has_operand()) {
      ObjectId numeric = 0;
      if (parse_number(tok[2], numeric)) {
        if (numeric == 0) throw ParseError(line_no, "object ids start at 1");
        e.object = object_name(numeric);
      } else if (is_identifier(tok[2])) {
        e.object = std::string(tok[2]);
      } else {
        throw ParseError(line_no, "bad object name '" + std::string(tok[2]) + "'");
      }
      if (!parse_number(tok[3], e.value)) throw ParseError(line_no, "bad value '" + std::string(tok[3]) + "'");
    }
    h.append(std::move(e));
    line_of.push_back(line_no);
    if (end == text.size()) break;
  }
  if (auto err = find_well_formedness_error(h)) throw ParseError(line_of[err->event_index], err->message);
  return h;
}

History read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

void write_file(const std::string& path, const History& h) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << serialize(h);
}

}  // namespace mvto::history
