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

#include "corpus.hpp"
#include "generators.hpp"
#include "mvto/history.hpp"

namespace mvto::history {
namespace {

using testing::kH1;

TEST(HistoryComplete, AbortFollowsLastEventOfLiveTransaction) {
  History h = parse("r 1 x 0\nr 2 x 0\nw 1 x 3\nc 2\n");
  History c = complete(h);
  EXPECT_EQ(serialize(c), "r 1 x 0\nr 2 x 0\nw 1 x 3\na 1\nc 2\n");
  EXPECT_TRUE(is_well_formed(c));
}

TEST(HistoryComplete, CompleteHistoryUnchanged) {
  History h = parse("r 1 x 0\nc 1\nw 2 x 1\na 2\n");
  EXPECT_EQ(complete(h), h);
}

TEST(HistoryComplete, H1GetsAbortForT4) {
  History h = parse(kH1);
  History c = complete(h);
  ASSERT_EQ(c.size(), h.size() + 1);
  EXPECT_EQ(c.events.back(), (Event{EventKind::kAbort, 4, {}, 0, 15}));
  EXPECT_EQ(c.events[14].kind, EventKind::kRead);
}

TEST(HistoryFormat, ReadLine) {
  EXPECT_EQ(format_event(read_event(4, "x", 5)), "r 4 x 5");
  EXPECT_EQ(format_event(write_event(2, "x3", -7)), "w 2 x3 -7");
  EXPECT_EQ(format_event(begin_event(9)), "b 9");
}

TEST(HistoryFormat, H1HasFifteenLines) {
  History h = parse(kH1);
  EXPECT_EQ(h.size(), 15u);
  EXPECT_EQ(serialize(h), kH1);
  std::string completed = serialize(complete(h));
  EXPECT_EQ(std::count(completed.begin(), completed.end(), '\n'), 16);
}

TEST(HistoryParse, CommentsBlankLinesAndBareIntegers) {
  History h = parse("# header\n\n  r 1 2 0   # trailing\nc 1\n");
  ASSERT_EQ(h.size(), 2u);
  EXPECT_EQ(h.events[0].object, "x2");
  EXPECT_EQ(h.events[1].seq, 1u);
}

TEST(HistoryParse, EmptyText) {
  EXPECT_TRUE(parse("").empty());
  EXPECT_TRUE(parse("# nothing\n").empty());
}

void expect_error_at(std::string_view text, std::size_t line) {
  try {
    parse(text);
    ADD_FAILURE() << "no error for:\n" << text;
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), line) << e.what();
  }
}

TEST(HistoryParse, MalformedLinesReportLine) {
  expect_error_at("r 1 x 0\nq 1\n", 2);
  expect_error_at("r 1 x\n", 1);
  expect_error_at("c 1 x\n", 1);
  expect_error_at("r one x 0\n", 1);
  expect_error_at("r +1 x 0\n", 1);
  expect_error_at("r 1 x 0.5\n", 1);
  expect_error_at("r 1 0 0\n", 1);
  expect_error_at("r 1 x-y 0\n", 1);
  expect_error_at("\n\nr 1 x 99999999999999999999\n", 3);
}

TEST(HistoryParse, IllFormedHistoriesReportLine) {
  expect_error_at("w 1 x 1\nr 1 x 0\n", 2);
  expect_error_at("c 1\nr 1 x 0\n", 2);
  expect_error_at("c 1\nc 1\n", 2);
  expect_error_at("r 1 x 0\nb 1\n", 2);
  expect_error_at("r 0 x 0\n", 1);
}

TEST(HistoryWellFormed, RejectsBadSequenceNumbers) {
  History h = parse("r 1 x 0\nc 1\n");
  h.events[1].seq = 5;
  EXPECT_FALSE(is_well_formed(h));
}

TEST(HistoryTransactions, FirstAppearanceOrder) {
  EXPECT_EQ(transactions(parse(kH1)), (std::vector<Timestamp>{1, 2, 3, 4}));
}

TEST(HistoryRoundTrip, RandomHistories) {
  testing::Rng rng(2024);
  for (int i = 0; i < 1000; ++i) {
    History h = testing::random_well_formed(rng, 1 + i % 7, 1 + i % 4);
    const std::string text = serialize(h);
    History back = parse(text);
    ASSERT_EQ(back, h) << text;
    ASSERT_EQ(serialize(back), text);
  }
}

TEST(HistoryFile, WriteThenRead) {
  History h = parse(kH1);
  const std::string path = ::testing::TempDir() + "h1_roundtrip.hist";
  write_file(path, h);
  EXPECT_EQ(read_file(path), h);
  EXPECT_THROW(read_file(path + ".missing"), std::runtime_error);
}

}  // namespace
}  // namespace mvto::history
