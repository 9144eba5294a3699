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

#include <gtest/gtest.h>

#include <algorithm>
#include <functional>
#include <iterator>
#include <map>
#include <set>

#include "corpus.hpp"
#include "generators.hpp"
#include "mvto/checker.hpp"

namespace mvto::checker {
namespace {

using history::parse;
using testing::kH1;

const VersionOrder kH1Order{{{"x", {0, 1}}, {"y", {0, 2, 3}}, {"z", {0, 1, 3}}}};

std::set<std::pair<Timestamp, Timestamp>> pairs(const std::vector<Edge>& edges) {
  std::set<std::pair<Timestamp, Timestamp>> out;
  for (const Edge& e : edges) out.emplace(e.from, e.to);
  return out;
}

using PairSet = std::set<std::pair<Timestamp, Timestamp>>;

TEST(CheckerValidity, H1IsValid) { EXPECT_TRUE(is_valid(parse(kH1))); }

TEST(CheckerValidity, ReadWithoutCommittedWriter) {
  auto report = check_validity(parse("r 1 x 7\nc 1\n"));
  EXPECT_FALSE(report.valid);
  EXPECT_EQ(report.offending_event, 0u);
  // The writer commits after the read.
  EXPECT_FALSE(is_valid(parse("w 1 x 7\nr 2 x 7\nc 1\n")));
  // An aborted writer never counts.
  EXPECT_FALSE(is_valid(parse("w 1 x 7\na 1\nr 2 x 7\n")));
  EXPECT_TRUE(is_valid(parse("w 1 x 7\nc 1\nr 2 x 7\n")));
}

TEST(CheckerLegality, Examples) {
  EXPECT_TRUE(is_legal(parse("r 1 x 0\nc 1\n")));
  EXPECT_FALSE(is_legal(parse("w 1 x 5\nc 1\nr 2 x 0\nc 2\n")));
  EXPECT_EQ(first_illegal_read(parse("w 1 x 5\nc 1\nr 2 x 0\nc 2\n")), 2u);
  EXPECT_TRUE(is_legal(parse("w 1 x 5\na 1\nr 2 x 0\nc 2\n")));
  EXPECT_THROW(is_legal(parse(kH1)), UsageError);
}

TEST(CheckerSequential, Detection) {
  EXPECT_TRUE(is_t_sequential(parse("r 1 x 0\nc 1\nr 2 x 0\n")));
  EXPECT_FALSE(is_t_sequential(parse("r 1 x 0\nr 2 x 0\nc 1\n")));
  EXPECT_FALSE(is_t_sequential(parse(kH1)));
}

TEST(CheckerGraph, H1UnderGivenOrder) {
  OpacityGraph g = build_graph(parse(kH1), kH1Order);
  EXPECT_EQ(g.vertices, (std::vector<Timestamp>{0, 1, 2, 3, 4}));
  EXPECT_EQ(pairs(g.edges_of(EdgeKind::kRealTime)), (PairSet{{0, 1}, {0, 2}, {0, 3}, {0, 4}, {1, 4}, {2, 4}}));
  EXPECT_EQ(pairs(g.edges_of(EdgeKind::kReadsFrom)), (PairSet{{0, 1}, {0, 2}, {0, 3}, {1, 4}, {2, 4}}));
  EXPECT_EQ(pairs(g.edges_of(EdgeKind::kMultiVersion)),
            (PairSet{{2, 1}, {1, 2}, {1, 3}, {3, 1}, {0, 1}, {0, 2}, {4, 3}}));
}

TEST(CheckerGraph, H1IsNotOpaqueUnderAnyOrder) {
  History h = parse(kH1);
  Verdict given = check_with_order(h, kH1Order);
  EXPECT_EQ(given.outcome, Outcome::kNotOpaque);
  EXPECT_EQ(given.cycle, (std::vector<Timestamp>{1, 2}));
  Verdict brute = check_brute_force(h);
  EXPECT_EQ(brute.outcome, Outcome::kNotOpaque);
  // 2! orders for x, 3! for y and z.
  EXPECT_EQ(brute.orders_tried, 72u);
}

TEST(CheckerGraph, SingleCommittedTransaction) {
  OpacityGraph g = build_graph(parse("r 1 x 0\nw 1 x 1\nc 1\n"), VersionOrder{{{"x", {0, 1}}}});
  EXPECT_EQ(pairs(g.edges), (PairSet{{0, 1}}));
  EXPECT_TRUE(g.has_edge(0, 1, EdgeKind::kRealTime));
  EXPECT_TRUE(g.has_edge(0, 1, EdgeKind::kReadsFrom));
}

TEST(CheckerGraph, OrderMustListCommittedWriters) {
  History h = parse("w 1 x 1\nc 1\nw 2 x 2\na 2\n");
  EXPECT_THROW(build_graph(h, VersionOrder{{{"x", {0}}}}), InputError);
  EXPECT_THROW(build_graph(h, VersionOrder{{{"x", {0, 1, 2}}}}), InputError);
  EXPECT_THROW(build_graph(h, VersionOrder{{{"x", {0, 1}}, {"y", {0}}}}), InputError);
  EXPECT_NO_THROW(build_graph(h, VersionOrder{{{"x", {1, 0}}}}));
  EXPECT_EQ(check_with_order(h, VersionOrder{}).outcome, Outcome::kInvalid);
}

TEST(CheckerGraph, DuplicateCommittedValueIsInvalid) {
  History h = parse("w 1 x 0\nc 1\nr 2 x 0\nc 2\n");
  EXPECT_THROW(Analysis{h}, InputError);
  EXPECT_EQ(check_auto(h).outcome, Outcome::kInvalid);
}

TEST(CheckerAcyclic, TwoCycle) {
  OpacityGraph g{{0, 1, 2}, {{0, 1, EdgeKind::kRealTime}, {1, 2, EdgeKind::kMultiVersion}, {2, 1, EdgeKind::kMultiVersion}}};
  CycleCheck c = check_acyclic(g);
  EXPECT_FALSE(c.acyclic);
  EXPECT_EQ(c.cycle, (std::vector<Timestamp>{1, 2}));
}

TEST(CheckerAcyclic, TiesBreakByTimestamp) {
  OpacityGraph g{{0, 1, 2, 3}, {{0, 3, EdgeKind::kRealTime}, {0, 2, EdgeKind::kRealTime}, {2, 1, EdgeKind::kReadsFrom}}};
  CycleCheck c = check_acyclic(g);
  ASSERT_TRUE(c.acyclic);
  EXPECT_EQ(c.order, (std::vector<Timestamp>{0, 2, 1, 3}));
}

// Reference: recursive three-colour DFS.
bool dfs_has_cycle(const std::vector<Timestamp>& vertices, const std::vector<Edge>& edges) {
  std::map<Timestamp, std::vector<Timestamp>> adj;
  for (const Edge& e : edges) adj[e.from].push_back(e.to);
  std::map<Timestamp, int> colour;
  std::function<bool(Timestamp)> visit = [&](Timestamp u) {
    colour[u] = 1;
    for (Timestamp v : adj[u]) {
      if (colour[v] == 1) return true;
      if (colour[v] == 0 && visit(v)) return true;
    }
    colour[u] = 2;
    return false;
  };
  for (Timestamp v : vertices) {
    if (colour[v] == 0 && visit(v)) return true;
  }
  return false;
}

TEST(CheckerAcyclic, MatchesDfsOnRandomDigraphs) {
  testing::Rng rng(99);
  for (int round = 0; round < 2000; ++round) {
    const std::size_t n = 1 + rng() % 8;
    OpacityGraph g;
    for (Timestamp v = 0; v < n; ++v) g.vertices.push_back(v);
    const bool dag = round % 2 == 0;
    const std::size_t m = rng() % (2 * n + 1);
    for (std::size_t i = 0; i < m; ++i) {
      Timestamp a = rng() % n;
      Timestamp b = rng() % n;
      if (dag && a >= b) continue;
      g.edges.push_back(Edge{a, b, EdgeKind::kMultiVersion});
    }
    CycleCheck c = check_acyclic(g);
    ASSERT_EQ(c.acyclic, !dfs_has_cycle(g.vertices, g.edges)) << "round " << round;
    if (c.acyclic) {
      ASSERT_EQ(c.order.size(), n);
      std::map<Timestamp, std::size_t> pos;
      for (std::size_t i = 0; i < n; ++i) pos[c.order[i]] = i;
      for (const Edge& e : g.edges) EXPECT_LT(pos[e.from], pos[e.to]);
    } else {
      ASSERT_FALSE(c.cycle.empty());
      std::set<std::pair<Timestamp, Timestamp>> es = pairs(g.edges);
      for (std::size_t i = 0; i < c.cycle.size(); ++i) {
        EXPECT_TRUE(es.contains({c.cycle[i], c.cycle[(i + 1) % c.cycle.size()]}));
      }
    }
  }
}

TEST(CheckerSequentialHistories, LegalSequentialHistoriesAreAcyclic) {
  testing::Rng rng(1);
  for (int i = 0; i < 300; ++i) {
    History s = testing::random_legal_sequential(rng, 1 + i % 6, 1 + i % 3);
    ASSERT_TRUE(is_legal(s)) << history::serialize(s);
    Verdict v = check_with_order(s, sequential_order(s));
    ASSERT_EQ(v.outcome, Outcome::kOpaque) << history::serialize(s);
  }
}

TEST(CheckerSequentialHistories, MutatedHistoriesAreIllegal) {
  testing::Rng rng(2);
  int mutated = 0;
  while (mutated < 100) {
    History s = testing::random_legal_sequential(rng, 4, 2);
    auto bad = testing::mutate_to_illegal(rng, s);
    if (!bad) continue;
    ++mutated;
    EXPECT_FALSE(is_legal(*bad)) << history::serialize(*bad);
  }
}

TEST(CheckerCompletion, CompletionOnlyAddsEdgesFromLiveTransactions) {
  testing::Rng rng(3);
  for (int i = 0; i < 200; ++i) {
    History h = testing::random_interleaved_run(rng, 6, 3).history;
    History c = history::complete(h);
    auto order = timestamp_order(h);
    OpacityGraph gh = build_graph(h, order);
    OpacityGraph g_completed = build_graph(c, order);
    EXPECT_EQ(gh.vertices, g_completed.vertices);
    Analysis a(h);
    std::vector<Edge> extra;
    std::ranges::set_difference(g_completed.edges, gh.edges, std::back_inserter(extra));
    for (const Edge& e : extra) {
      EXPECT_EQ(e.kind, EdgeKind::kRealTime);
      EXPECT_FALSE(a.transactions().at(e.from).complete());
    }
    EXPECT_TRUE(std::ranges::includes(g_completed.edges, gh.edges));
  }
}

TEST(CheckerOperationSwaps, SwappingOverlappingOperationsKeepsMvEdges) {
  testing::Rng rng(4);
  for (int i = 0; i < 200; ++i) {
    History h = testing::random_interleaved_run(rng, 6, 3).history;
    auto order = timestamp_order(h);
    auto before = mv_edges(Analysis(h), order);
    History p = h;
    for (int swaps = 0; swaps < 20 && p.size() > 1; ++swaps) {
      std::size_t k = rng() % (p.size() - 1);
      auto& a = p.events[k];
      auto& b = p.events[k + 1];
      if (a.tx == b.tx || !a.has_operand() || !b.has_operand()) continue;
      std::swap(a, b);
      std::swap(a.seq, b.seq);
    }
    ASSERT_TRUE(history::is_well_formed(p));
    EXPECT_EQ(mv_edges(Analysis(p), order), before);
  }
}

TEST(CheckerTimestampEdges, MvtoEdgesAscendUnderTimestampOrder) {
  testing::Rng rng(5);
  for (int i = 0; i < 200; ++i) {
    History h = testing::random_interleaved_run(rng, 8, 3).history;
    OpacityGraph g = build_graph(h, timestamp_order(h));
    for (const Edge& e : g.edges) EXPECT_LT(e.from, e.to) << history::serialize(h);
  }
}

TEST(CheckerWithOrder, MvtoHistoriesAreOpaqueWithCheckedWitness) {
  testing::Rng rng(6);
  for (int i = 0; i < 200; ++i) {
    History h = testing::random_interleaved_run(rng, 8, 3).history;
    Verdict v = check_with_order(h, timestamp_order(h));
    ASSERT_EQ(v.outcome, Outcome::kOpaque) << history::serialize(h) << v.detail;
    EXPECT_TRUE(is_t_sequential(v.witness));
    EXPECT_TRUE(is_legal(v.witness));
    EXPECT_TRUE(equivalent(v.witness, history::complete(h)));
    EXPECT_TRUE(respects_real_time(h, v.witness));
    EXPECT_EQ(v.serialization.front(), 0u);
  }
}

TEST(CheckerBruteForce, ReadOnlyOverInitialState) {
  Verdict v = check_brute_force(parse("r 1 x 0\nr 1 y 0\nc 1\n"));
  EXPECT_EQ(v.outcome, Outcome::kOpaque);
  EXPECT_EQ(v.orders_tried, 1u);
}

TEST(CheckerBruteForce, HandCraftedNonOpaque) {
  // T1 sees x before T2 and y after T2.
  History torn = parse("r 1 x 0\nw 2 x 5\nw 2 y 5\nc 2\nr 1 y 5\nc 1\n");
  EXPECT_EQ(check_brute_force(torn).outcome, Outcome::kNotOpaque);
  // T2 starts after T1 commits but misses its write.
  History stale = parse("w 1 x 5\nc 1\nr 2 x 0\nc 2\n");
  EXPECT_EQ(check_brute_force(stale).outcome, Outcome::kNotOpaque);
  // An aborted transaction observing an inconsistent snapshot still counts.
  History aborted = parse("r 1 x 0\nw 2 x 5\nw 2 y 5\nc 2\nr 1 y 5\na 1\n");
  EXPECT_EQ(check_brute_force(aborted).outcome, Outcome::kNotOpaque);
}

TEST(CheckerBruteForce, FindsNonTimestampWitness) {
  // T3 reads T2's x and precedes T1 in real time, so x2 must come before x1.
  History h = parse("w 2 x 2\nc 2\nr 3 x 2\nc 3\nw 1 x 1\nc 1\n");
  EXPECT_EQ(check_with_order(h, timestamp_order(h)).outcome, Outcome::kNotOpaque);
  Verdict v = check_brute_force(h);
  ASSERT_EQ(v.outcome, Outcome::kOpaque);
  EXPECT_EQ(v.order.objects.at("x"), (std::vector<Timestamp>{0, 2, 1}));
  EXPECT_EQ(v.serialization, (std::vector<Timestamp>{0, 2, 3, 1}));
  Verdict a = check_auto(h);
  EXPECT_EQ(a.outcome, Outcome::kOpaque);
}

TEST(CheckerBruteForce, BudgetExhaustionIsUndecided) {
  History h = parse("w 1 x 1\nc 1\nw 2 x 2\nc 2\nw 3 x 3\nc 3\nr 4 x 0\nc 4\n");
  Verdict v = check_brute_force(h, 3);
  EXPECT_EQ(v.outcome, Outcome::kUndecided);
  EXPECT_EQ(v.orders_tried, 3u);
  EXPECT_EQ(check_brute_force(h).outcome, Outcome::kNotOpaque);
}

TEST(CheckerBruteForce, InvalidHistoryIsInvalid) {
  EXPECT_EQ(check_brute_force(parse("r 1 x 3\nc 1\n")).outcome, Outcome::kInvalid);
}

TEST(CheckerOrders, TimestampAndSequentialOrders) {
  History h = parse("w 2 x 2\nc 2\nw 1 x 1\nc 1\nw 3 y 3\na 3\n");
  EXPECT_EQ(timestamp_order(h), (VersionOrder{{{"x", {0, 1, 2}}, {"y", {0}}}}));
  EXPECT_EQ(sequential_order(h), (VersionOrder{{{"x", {0, 2, 1}}, {"y", {0}}}}));
  EXPECT_EQ(to_string(timestamp_order(h)), "x: 0 1 2; y: 0");
}

}  // namespace
}  // namespace mvto::checker
