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

#include "mvto/checker.hpp"

#include <algorithm>
#include <functional>
#include <queue>
#include <set>
#include <sstream>
#include <unordered_map>

namespace mvto::checker {

using history::EventKind;

std::string to_string(const VersionOrder& order) {
  std::ostringstream out;
  bool first_obj = true;
  for (const auto& [obj, seq] : order.objects) {
    if (!first_obj) out << "; ";
    first_obj = false;
    out << obj << ":";
    for (Timestamp ts : seq) out << ' ' << ts;
  }
  return out.str();
}

const char* to_string(EdgeKind kind) {
  switch (kind) {
    case EdgeKind::kRealTime:
      return "rt";
    case EdgeKind::kReadsFrom:
      return "rf";
    case EdgeKind::kMultiVersion:
      return "mv";
  }
  return "?";
}

const char* to_string(Outcome outcome) {
  switch (outcome) {
    case Outcome::kOpaque:
      return "opaque";
    case Outcome::kNotOpaque:
      return "not-opaque";
    case Outcome::kInvalid:
      return "invalid";
    case Outcome::kUndecided:
      return "undecided";
  }
  return "?";
}

bool OpacityGraph::has_edge(Timestamp from, Timestamp to, EdgeKind kind) const {
  return std::ranges::binary_search(edges, Edge{from, to, kind});
}

std::vector<Edge> OpacityGraph::edges_of(EdgeKind kind) const {
  std::vector<Edge> out;
  std::ranges::copy_if(edges, std::back_inserter(out), [kind](const Edge& e) { return e.kind == kind; });
  return out;
}

// ---------------------------------------------------------------------------
// Analysis

Analysis::Analysis(const History& h) : history_(&h) {
  if (auto err = history::find_well_formedness_error(h)) {
    throw InputError("event " + std::to_string(err->event_index) + ": " + err->message);
  }
  std::set<std::string> objects;
  for (std::size_t i = 0; i < h.events.size(); ++i) {
    const Event& e = h.events[i];
    auto [it, inserted] = txs_.try_emplace(e.tx);
    TxInfo& tx = it->second;
    if (inserted) {
      tx.id = e.tx;
      tx.first = i;
    }
    tx.last = i;
    switch (e.kind) {
      case EventKind::kRead:
        reads_.push_back(ReadInfo{i, e.tx, e.object, e.value});
        objects.insert(e.object);
        break;
      case EventKind::kWrite:
        tx.writes[e.object] = e.value;
        objects.insert(e.object);
        break;
      case EventKind::kCommit:
        tx.termination = Termination::kCommitted;
        break;
      case EventKind::kAbort:
        tx.termination = Termination::kAborted;
        break;
      case EventKind::kBegin:
        break;
    }
  }
  for (const std::string& obj : objects) {
    writers_[obj].push_back(kInitialTs);
    source_[{obj, 0}] = kInitialTs;
  }
  for (const auto& [id, tx] : txs_) {
    if (!tx.committed()) continue;
    for (const auto& [obj, value] : tx.writes) {
      writers_[obj].push_back(id);
      auto [it, fresh] = source_.try_emplace({obj, value}, id);
      if (!fresh) {
        throw InputError("transactions " + std::to_string(it->second) + " and " + std::to_string(id) +
                         " both wrote " + std::to_string(value) + " to " + obj);
      }
    }
  }
}

std::optional<Timestamp> Analysis::source_of(const std::string& object, Value value) const {
  auto it = source_.find({object, value});
  if (it == source_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> Analysis::commit_index(Timestamp tx) const {
  auto it = txs_.find(tx);
  if (it == txs_.end() || !it->second.committed()) return std::nullopt;
  return it->second.last;
}

// ---------------------------------------------------------------------------
// Validity and legality

ValidityReport check_validity(const History& h) {
  // Values visible to a read: everything written by transactions that
  // committed before it, plus the initial 0.
  std::unordered_map<Timestamp, std::vector<const Event*>> pending;
  std::map<std::string, std::set<Value>> visible;
  for (std::size_t i = 0; i < h.events.size(); ++i) {
    const Event& e = h.events[i];
    switch (e.kind) {
      case EventKind::kWrite:
        pending[e.tx].push_back(&e);
        break;
      case EventKind::kCommit:
        for (const Event* w : pending[e.tx]) visible[w->object].insert(w->value);
        pending.erase(e.tx);
        break;
      case EventKind::kAbort:
        pending.erase(e.tx);
        break;
      case EventKind::kRead:
        if (e.value != 0 && !visible[e.object].contains(e.value)) {
          return ValidityReport{false, i,
                                "event " + std::to_string(i) + " (" + history::format_event(e) +
                                    "): no transaction committed a write of this value before the read"};
        }
        break;
      case EventKind::kBegin:
        break;
    }
  }
  return {};
}

bool is_t_sequential(const History& h) {
  std::set<Timestamp> closed;
  std::optional<Timestamp> current;
  bool current_done = false;
  for (const Event& e : h.events) {
    if (current && *current == e.tx) {
      if (current_done) return false;
    } else {
      if (closed.contains(e.tx)) return false;
      if (current) {
        if (!current_done) return false;
        closed.insert(*current);
      }
      current = e.tx;
      current_done = false;
    }
    if (e.is_terminal()) current_done = true;
  }
  return true;
}

std::optional<std::size_t> first_illegal_read(const History& s) {
  if (!is_t_sequential(s)) throw UsageError("legality is defined on t-sequential histories only");
  std::map<std::string, Value> last_committed;
  std::unordered_map<Timestamp, std::map<std::string, Value>> pending;
  for (std::size_t i = 0; i < s.events.size(); ++i) {
    const Event& e = s.events[i];
    switch (e.kind) {
      case EventKind::kWrite:
        pending[e.tx][e.object] = e.value;
        break;
      case EventKind::kCommit:
        for (const auto& [obj, v] : pending[e.tx]) last_committed[obj] = v;
        pending.erase(e.tx);
        break;
      case EventKind::kAbort:
        pending.erase(e.tx);
        break;
      case EventKind::kRead: {
        auto it = last_committed.find(e.object);
        const Value expected = it == last_committed.end() ? 0 : it->second;
        if (e.value != expected) return i;
        break;
      }
      case EventKind::kBegin:
        break;
    }
  }
  return std::nullopt;
}

bool is_legal(const History& s) { return !first_illegal_read(s); }

// ---------------------------------------------------------------------------
// Version orders

VersionOrder timestamp_order(const History& h) {
  Analysis a(h);
  return VersionOrder{a.writers()};
}

VersionOrder sequential_order(const History& s) {
  Analysis a(s);
  std::vector<std::pair<std::size_t, Timestamp>> commits;
  for (const auto& [id, tx] : a.transactions()) {
    if (tx.committed()) commits.emplace_back(tx.last, id);
  }
  std::ranges::sort(commits);
  VersionOrder order;
  for (const auto& [obj, writers] : a.writers()) order.objects[obj].push_back(kInitialTs);
  for (const auto& [pos, id] : commits) {
    for (const auto& [obj, value] : a.transactions().at(id).writes) order.objects[obj].push_back(id);
  }
  return order;
}

namespace {

void require_order_matches(const Analysis& a, const VersionOrder& order) {
  for (const auto& [obj, writers] : a.writers()) {
    auto it = order.objects.find(obj);
    if (it == order.objects.end()) throw InputError("version order has no entry for " + obj);
    std::vector<Timestamp> sorted = it->second;
    std::ranges::sort(sorted);
    if (sorted != writers) {
      throw InputError("version order for " + obj + " does not list exactly its committed writers");
    }
  }
  for (const auto& [obj, seq] : order.objects) {
    if (!a.writers().contains(obj)) throw InputError("version order names unknown object " + obj);
  }
}

std::vector<Timestamp> vertices_of(const Analysis& a) {
  std::vector<Timestamp> v{kInitialTs};
  for (const auto& [id, tx] : a.transactions()) v.push_back(id);
  return v;
}

// rt and rf edges; both are independent of the version order.
std::vector<Edge> order_free_edges(const Analysis& a) {
  std::vector<Edge> edges;
  const auto& txs = a.transactions();
  for (const auto& [id, tx] : txs) edges.push_back(Edge{kInitialTs, id, EdgeKind::kRealTime});
  std::vector<const TxInfo*> by_start;
  for (const auto& [id, tx] : txs) by_start.push_back(&tx);
  std::ranges::sort(by_start, {}, &TxInfo::first);
  for (const auto& [id, tx] : txs) {
    if (!tx.complete()) continue;
    auto it = std::ranges::upper_bound(by_start, tx.last, {}, &TxInfo::first);
    for (; it != by_start.end(); ++it) edges.push_back(Edge{id, (*it)->id, EdgeKind::kRealTime});
  }
  for (const ReadInfo& r : a.reads()) {
    auto src = a.source_of(r.object, r.value);
    if (!src) {
      throw InputError("event " + std::to_string(r.index) + ": read of " + std::to_string(r.value) + " from " +
                       r.object + " has no committed source");
    }
    edges.push_back(Edge{*src, r.tx, EdgeKind::kReadsFrom});
  }
  return edges;
}

void normalize(std::vector<Edge>& edges) {
  std::ranges::sort(edges);
  auto dup = std::ranges::unique(edges);
  edges.erase(dup.begin(), dup.end());
}

OpacityGraph assemble(const Analysis& a, std::vector<Edge> fixed, const std::vector<Edge>& mv) {
  OpacityGraph g;
  g.vertices = vertices_of(a);
  g.edges = std::move(fixed);
  g.edges.insert(g.edges.end(), mv.begin(), mv.end());
  normalize(g.edges);
  return g;
}

// Adjacency over dense vertex indices.
struct Dense {
  std::vector<Timestamp> ids;
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> indegree;
};

Dense densify(const std::vector<Timestamp>& vertices, const std::vector<Edge>& edges) {
  Dense d;
  d.ids = vertices;
  std::unordered_map<Timestamp, std::size_t> index;
  for (std::size_t i = 0; i < vertices.size(); ++i) index[vertices[i]] = i;
  d.out.resize(vertices.size());
  d.indegree.assign(vertices.size(), 0);
  for (const Edge& e : edges) {
    auto f = index.find(e.from);
    auto t = index.find(e.to);
    if (f == index.end() || t == index.end()) throw InvariantViolation("edge endpoint outside the vertex set");
    d.out[f->second].push_back(t->second);
  }
  for (auto& targets : d.out) {
    std::ranges::sort(targets);
    auto dup = std::ranges::unique(targets);
    targets.erase(dup.begin(), dup.end());
    for (std::size_t t : targets) ++d.indegree[t];
  }
  return d;
}

std::vector<std::size_t> kahn(const Dense& d) {
  std::vector<std::size_t> indeg = d.indegree;
  std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
  for (std::size_t i = 0; i < indeg.size(); ++i) {
    if (indeg[i] == 0) ready.push(i);
  }
  std::vector<std::size_t> order;
  order.reserve(indeg.size());
  while (!ready.empty()) {
    std::size_t u = ready.top();
    ready.pop();
    order.push_back(u);
    for (std::size_t v : d.out[u]) {
      if (--indeg[v] == 0) ready.push(v);
    }
  }
  return order;
}

std::vector<Timestamp> find_cycle(const Dense& d) {
  enum Color : unsigned char { kWhite, kGray, kBlack };
  std::vector<Color> color(d.ids.size(), kWhite);
  std::vector<std::size_t> path;
  std::vector<std::size_t> next_child(d.ids.size(), 0);
  for (std::size_t root = 0; root < d.ids.size(); ++root) {
    if (color[root] != kWhite) continue;
    path.push_back(root);
    color[root] = kGray;
    while (!path.empty()) {
      std::size_t u = path.back();
      if (next_child[u] == d.out[u].size()) {
        color[u] = kBlack;
        path.pop_back();
        continue;
      }
      std::size_t v = d.out[u][next_child[u]++];
      if (color[v] == kGray) {
        auto start = std::ranges::find(path, v);
        std::vector<Timestamp> cycle;
        for (auto it = start; it != path.end(); ++it) cycle.push_back(d.ids[*it]);
        return cycle;
      }
      if (color[v] == kWhite) {
        color[v] = kGray;
        path.push_back(v);
      }
    }
  }
  return {};
}

}  // namespace

std::vector<Edge> mv_edges(const Analysis& a, const VersionOrder& order) {
  std::map<std::string, std::unordered_map<Timestamp, std::size_t>> position;
  for (const auto& [obj, seq] : order.objects) {
    auto& pos = position[obj];
    for (std::size_t i = 0; i < seq.size(); ++i) pos[seq[i]] = i;
  }
  std::vector<Edge> edges;
  for (const ReadInfo& r : a.reads()) {
    auto src = a.source_of(r.object, r.value);
    if (!src) continue;
    const Timestamp j = *src;
    const auto& pos = position.at(r.object);
    for (Timestamp i : a.writers().at(r.object)) {
      // A reader that later writes the same object gets no self edge.
      if (i == j || i == r.tx) continue;
      if (pos.at(i) < pos.at(j)) {
        edges.push_back(Edge{i, j, EdgeKind::kMultiVersion});
      } else {
        edges.push_back(Edge{r.tx, i, EdgeKind::kMultiVersion});
      }
    }
  }
  normalize(edges);
  return edges;
}

OpacityGraph build_graph(const History& h, const VersionOrder& order) {
  Analysis a(h);
  require_order_matches(a, order);
  return assemble(a, order_free_edges(a), mv_edges(a, order));
}

CycleCheck check_acyclic(const OpacityGraph& g) {
  Dense d = densify(g.vertices, g.edges);
  std::vector<std::size_t> order = kahn(d);
  CycleCheck result;
  if (order.size() == d.ids.size()) {
    for (std::size_t i : order) result.order.push_back(d.ids[i]);
    return result;
  }
  result.acyclic = false;
  result.cycle = find_cycle(d);
  if (result.cycle.empty()) throw InvariantViolation("topological sort stalled but no cycle was found");
  return result;
}

// ---------------------------------------------------------------------------
// Serializations

History serialize_in_order(const History& completed, const std::vector<Timestamp>& order) {
  std::unordered_map<Timestamp, std::vector<const Event*>> by_tx;
  for (const Event& e : completed.events) by_tx[e.tx].push_back(&e);
  History s;
  for (Timestamp id : order) {
    auto it = by_tx.find(id);
    if (it == by_tx.end()) continue;
    for (const Event* e : it->second) s.append(*e);
  }
  return s;
}

namespace {

struct Span {
  std::size_t first = 0;
  std::size_t last = 0;
  bool complete = false;
};

std::unordered_map<Timestamp, Span> spans(const History& h) {
  std::unordered_map<Timestamp, Span> out;
  for (std::size_t i = 0; i < h.events.size(); ++i) {
    const Event& e = h.events[i];
    auto [it, fresh] = out.try_emplace(e.tx, Span{i, i, false});
    it->second.last = i;
    if (e.is_terminal()) it->second.complete = true;
  }
  return out;
}

}  // namespace

bool respects_real_time(const History& h, const History& s) {
  auto hs = spans(h);
  auto ss = spans(s);
  for (const auto& [i, si] : hs) {
    if (!si.complete) continue;
    for (const auto& [j, sj] : hs) {
      if (i == j || si.last >= sj.first) continue;
      auto a = ss.find(i);
      auto b = ss.find(j);
      if (a == ss.end() || b == ss.end()) return false;
      if (!a->second.complete || a->second.last >= b->second.first) return false;
    }
  }
  return true;
}

bool equivalent(const History& a, const History& b) {
  using Key = std::tuple<EventKind, std::string, Value>;
  auto group = [](const History& h) {
    std::map<Timestamp, std::vector<Key>> out;
    for (const Event& e : h.events) out[e.tx].emplace_back(e.kind, e.object, e.value);
    return out;
  };
  return group(a) == group(b);
}

// ---------------------------------------------------------------------------
// Verdicts

namespace {

std::optional<Verdict> precheck(const History& h) {
  if (auto err = history::find_well_formedness_error(h)) {
    Verdict v;
    v.outcome = Outcome::kInvalid;
    v.detail = "not well-formed: event " + std::to_string(err->event_index) + ": " + err->message;
    return v;
  }
  if (ValidityReport validity = check_validity(h); !validity.valid) {
    Verdict v;
    v.outcome = Outcome::kInvalid;
    v.detail = "invalid: " + validity.detail;
    return v;
  }
  return std::nullopt;
}

Verdict verdict_for(const Analysis& a, const VersionOrder& order, const std::vector<Edge>& fixed) {
  const History& h = a.history();
  OpacityGraph g = assemble(a, fixed, mv_edges(a, order));
  CycleCheck cc = check_acyclic(g);
  Verdict v;
  v.order = order;
  v.orders_tried = 1;
  if (!cc.acyclic) {
    v.outcome = Outcome::kNotOpaque;
    v.cycle = std::move(cc.cycle);
    return v;
  }
  v.outcome = Outcome::kOpaque;
  v.serialization = cc.order;
  v.witness = serialize_in_order(history::complete(h), cc.order);
  if (!is_t_sequential(v.witness) || !is_legal(v.witness)) {
    throw InvariantViolation("acyclic graph produced an illegal serialization");
  }
  if (!equivalent(v.witness, history::complete(h))) {
    throw InvariantViolation("serialization is not equivalent to the completed history");
  }
  if (!respects_real_time(h, v.witness)) {
    throw InvariantViolation("serialization breaks the real-time order");
  }
  return v;
}

Verdict invalid(const std::string& detail) {
  Verdict v;
  v.outcome = Outcome::kInvalid;
  v.detail = detail;
  return v;
}

}  // namespace

Verdict check_with_order(const History& h, const VersionOrder& order) {
  if (auto early = precheck(h)) return *early;
  try {
    Analysis a(h);
    require_order_matches(a, order);
    return verdict_for(a, order, order_free_edges(a));
  } catch (const InputError& e) {
    return invalid(e.what());
  }
}

Verdict check_brute_force(const History& h, std::uint64_t budget) {
  if (auto early = precheck(h)) return *early;
  try {
    Analysis a(h);
    const std::vector<Edge> fixed = order_free_edges(a);
    const std::vector<Timestamp> vertices = vertices_of(a);

    VersionOrder order{a.writers()};
    std::vector<std::vector<Timestamp>*> slots;
    for (auto& [obj, seq] : order.objects) {
      if (seq.size() > 1) slots.push_back(&seq);
    }

    std::uint64_t tried = 0;
    while (true) {
      if (tried == budget) {
        Verdict v;
        v.outcome = Outcome::kUndecided;
        v.orders_tried = tried;
        v.detail = "budget of " + std::to_string(budget) + " version orders exhausted";
        return v;
      }
      ++tried;
      std::vector<Edge> edges = fixed;
      std::vector<Edge> mv = mv_edges(a, order);
      edges.insert(edges.end(), mv.begin(), mv.end());
      Dense d = densify(vertices, edges);
      if (kahn(d).size() == vertices.size()) {
        Verdict v = verdict_for(a, order, fixed);
        v.orders_tried = tried;
        return v;
      }
      // Odometer over per-object permutations; the last slot spins fastest.
      std::size_t k = slots.size();
      bool advanced = false;
      while (k > 0) {
        --k;
        if (std::ranges::next_permutation(*slots[k]).found) {
          advanced = true;
          break;
        }
      }
      if (!advanced) break;
    }
    Verdict v;
    v.outcome = Outcome::kNotOpaque;
    v.orders_tried = tried;
    v.detail = "no version order yields an acyclic graph";
    return v;
  } catch (const InputError& e) {
    return invalid(e.what());
  }
}

Verdict check_auto(const History& h, std::uint64_t budget) {
  if (auto early = precheck(h)) return *early;
  VersionOrder order;
  try {
    order = timestamp_order(h);
  } catch (const InputError& e) {
    return invalid(e.what());
  }
  Verdict v = check_with_order(h, order);
  if (v.outcome != Outcome::kNotOpaque) return v;
  Verdict brute = check_brute_force(h, budget);
  if (brute.outcome == Outcome::kNotOpaque || brute.outcome == Outcome::kUndecided) {
    // Keep the timestamp-order cycle as a concrete counterexample.
    if (brute.cycle.empty()) {
      brute.cycle = v.cycle;
      brute.order = v.order;
    }
  }
  return brute;
}

}  // namespace mvto::checker
