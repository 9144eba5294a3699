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

#include "mvto/invariants.hpp"

#include <map>
#include <set>
#include <unordered_map>
#include <unordered_set>

namespace mvto::harness {

using history::Event;
using history::EventKind;
using history::History;

namespace {

std::string describe(std::size_t index, const Event& e) {
  return "event " + std::to_string(index) + " (" + history::format_event(e) + ")";
}

// Committed versions per object, built up while walking a history.
class VersionTracker {
 public:
  void write(const Event& e) { pending_[e.tx][e.object] = e.value; }
  void commit(Timestamp tx) {
    for (const auto& [obj, v] : pending_[tx]) versions_[obj][tx] = v;
    pending_.erase(tx);
  }
  void abort(Timestamp tx) { pending_.erase(tx); }

  /// Largest committed writer of obj below ts, with its value.
  std::pair<Timestamp, Value> target(const std::string& obj, Timestamp ts) const {
    auto it = versions_.find(obj);
    if (it == versions_.end()) return {kInitialTs, 0};
    auto v = it->second.lower_bound(ts);
    if (v == it->second.begin()) return {kInitialTs, 0};
    --v;
    return {v->first, v->second};
  }

  const std::map<std::string, Value>& pending(Timestamp tx) const {
    static const std::map<std::string, Value> kNone;
    auto it = pending_.find(tx);
    return it == pending_.end() ? kNone : it->second;
  }

  std::set<std::string> objects() const {
    std::set<std::string> out;
    for (const auto& [obj, v] : versions_) out.insert(obj);
    return out;
  }

 private:
  std::unordered_map<Timestamp, std::map<std::string, Value>> pending_;
  std::map<std::string, std::map<Timestamp, Value>> versions_;
};

}  // namespace

InvariantReport check_timestamp_order(const History& h) {
  InvariantReport report;
  std::unordered_set<Timestamp> seen;
  Timestamp last = kInitialTs;
  for (std::size_t i = 0; i < h.events.size(); ++i) {
    const Event& e = h.events[i];
    if (!seen.insert(e.tx).second) continue;
    if (e.tx <= last) {
      report.violations.push_back(describe(i, e) + ": transaction starts after " + std::to_string(last));
    }
    last = e.tx;
  }
  return report;
}

InvariantReport check_read_rule(const History& h) {
  InvariantReport report;
  VersionTracker tracker;
  for (std::size_t i = 0; i < h.events.size(); ++i) {
    const Event& e = h.events[i];
    switch (e.kind) {
      case EventKind::kWrite:
        tracker.write(e);
        break;
      case EventKind::kCommit:
        tracker.commit(e.tx);
        break;
      case EventKind::kAbort:
        tracker.abort(e.tx);
        break;
      case EventKind::kRead: {
        auto [ts, value] = tracker.target(e.object, e.tx);
        if (value != e.value) {
          report.violations.push_back(describe(i, e) + ": expected " + std::to_string(value) + " from " +
                                      std::to_string(ts));
        }
        break;
      }
      case EventKind::kBegin:
        break;
    }
  }
  return report;
}

InvariantReport check_write_rule(const History& h) {
  InvariantReport report;
  std::unordered_map<Timestamp, std::map<std::string, Value>> writes;
  std::unordered_set<Timestamp> committed;
  for (const Event& e : h.events) {
    if (e.kind == EventKind::kWrite) writes[e.tx][e.object] = e.value;
    if (e.kind == EventKind::kCommit) committed.insert(e.tx);
  }
  std::map<std::string, std::set<Timestamp>> writers;
  std::map<std::pair<std::string, Value>, Timestamp> source;
  for (Timestamp tx : committed) {
    for (const auto& [obj, v] : writes[tx]) {
      writers[obj].insert(tx);
      source[{obj, v}] = tx;
    }
  }
  for (std::size_t i = 0; i < h.events.size(); ++i) {
    const Event& e = h.events[i];
    if (e.kind != EventKind::kRead) continue;
    Timestamp j = kInitialTs;
    if (e.value != 0) {
      auto it = source.find({e.object, e.value});
      if (it == source.end()) {
        report.violations.push_back(describe(i, e) + ": no committed source");
        continue;
      }
      j = it->second;
    }
    const auto& w = writers[e.object];
    auto between = w.upper_bound(j);
    if (between != w.end() && *between < e.tx) {
      report.violations.push_back(describe(i, e) + ": committed writer " + std::to_string(*between) +
                                  " lies between source " + std::to_string(j) + " and reader");
    }
  }
  return report;
}

InvariantReport check_read_only_never_aborts(const History& h) {
  InvariantReport report;
  std::unordered_set<Timestamp> writers;
  for (const Event& e : h.events) {
    if (e.kind == EventKind::kWrite) writers.insert(e.tx);
  }
  for (std::size_t i = 0; i < h.events.size(); ++i) {
    const Event& e = h.events[i];
    if (e.kind == EventKind::kAbort && !writers.contains(e.tx)) {
      report.violations.push_back(describe(i, e) + ": read-only transaction aborted");
    }
  }
  return report;
}

InvariantReport check_gc_safety(const History& h, const std::vector<history::DeletionRecord>& deletions) {
  InvariantReport report;
  VersionTracker tracker;
  std::set<Timestamp> live;
  std::unordered_set<Timestamp> started;
  std::map<std::string, std::set<Timestamp>> deleted;
  std::set<std::string> objects;
  for (const Event& e : h.events) {
    if (e.has_operand()) objects.insert(e.object);
  }
  for (const auto& d : deletions) objects.insert(d.object);

  std::size_t next_deletion = 0;
  auto apply_deletions = [&](std::size_t position) {
    while (next_deletion < deletions.size() && deletions[next_deletion].position <= position) {
      const auto& d = deletions[next_deletion++];
      const std::string where = "deletion of " + d.object + "@" + std::to_string(d.version_ts) + " by " +
                                std::to_string(d.committer);
      // The committer is inside its commit: its versions already exist.
      tracker.commit(d.committer);
      live.erase(d.committer);
      if (!deleted[d.object].insert(d.version_ts).second) {
        report.violations.push_back(where + ": deleted twice");
      }
      for (Timestamp l : live) {
        if (tracker.target(d.object, l).first == d.version_ts) {
          report.violations.push_back(where + ": still the read target of live transaction " + std::to_string(l));
        }
      }
    }
  };

  for (std::size_t i = 0; i < h.events.size(); ++i) {
    apply_deletions(i);
    const Event& e = h.events[i];
    if (started.insert(e.tx).second) {
      live.insert(e.tx);
      for (const std::string& obj : objects) {
        const Timestamp target = tracker.target(obj, e.tx).first;
        if (deleted[obj].contains(target)) {
          report.violations.push_back(describe(i, e) + ": read target " + obj + "@" + std::to_string(target) +
                                      " was already deleted");
        }
      }
    }
    switch (e.kind) {
      case EventKind::kWrite:
        tracker.write(e);
        break;
      case EventKind::kCommit:
        tracker.commit(e.tx);
        live.erase(e.tx);
        break;
      case EventKind::kAbort:
        tracker.abort(e.tx);
        live.erase(e.tx);
        break;
      default:
        break;
    }
  }
  apply_deletions(h.events.size());
  return report;
}

}  // namespace mvto::harness
