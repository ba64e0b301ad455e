// Copyright 2026 The dynkmed Authors
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

#include <fstream>
#include <set>
#include <sstream>

#include "dynkmed/stream.hpp"
#include "support/oracle.hpp"

namespace dynkmed {
namespace {

std::string Serialize(const Stream& s) {
  std::ostringstream out;
  WriteStream(out, s);
  return out.str();
}

// Replays the events, failing on any inconsistent insert or delete, and
// returns the largest live-set size.
std::size_t MaxLive(const Stream& s) {
  std::set<std::uint32_t> live;
  std::size_t best = 0;
  for (const auto& ev : s.events) {
    if (ev.op == UpdateEvent::Op::kInsert) {
      EXPECT_TRUE(live.insert(ev.id).second) << "double insert of " << ev.id;
    } else {
      EXPECT_EQ(live.erase(ev.id), 1u) << "delete of absent " << ev.id;
    }
    best = std::max(best, live.size());
  }
  return best;
}

const StreamKind kAllKinds[] = {StreamKind::kUniformBox, StreamKind::kTwoClusterDrift,
                                StreamKind::kSlidingWindow, StreamKind::kAdversarialChurn};

TEST(GenerateStreamTest, SingleStepIsAnInsert) {
  const Stream s = GenerateStream(StreamKind::kUniformBox, 10, 1, 3);
  ASSERT_EQ(s.events.size(), 1u);
  EXPECT_EQ(s.events[0].op, UpdateEvent::Op::kInsert);
}

TEST(GenerateStreamTest, SlidingWindowBound) {
  const Stream s = GenerateStream(StreamKind::kSlidingWindow, 5, 400, 9);
  EXPECT_EQ(s.events.size(), 400u);
  EXPECT_LE(MaxLive(s), 5u);
  EXPECT_EQ(MaxLive(s), 5u);
}

TEST(GenerateStreamTest, FixedSeedIsByteIdentical) {
  for (StreamKind kind : kAllKinds) {
    EXPECT_EQ(Serialize(GenerateStream(kind, 20, 300, 7)), Serialize(GenerateStream(kind, 20, 300, 7)))
        << StreamKindName(kind);
    EXPECT_NE(Serialize(GenerateStream(kind, 20, 300, 7)), Serialize(GenerateStream(kind, 20, 300, 8)))
        << StreamKindName(kind);
  }
}

TEST(GenerateStreamTest, EveryKindIsValid) {
  GenOptions opts;
  opts.delta = 1000.0;
  opts.max_weight = 4;
  for (StreamKind kind : kAllKinds) {
    const Stream s = GenerateStream(kind, 30, 500, 2, opts);
    EXPECT_EQ(s.events.size(), 500u);
    EXPECT_LE(MaxLive(s), 30u) << StreamKindName(kind);
    EXPECT_EQ(s.header.delta, 1000.0);
    const auto space = BuildSpace(s);
    const auto ids = space->GroundIds();
    for (const auto& ev : s.events) {
      if (ev.op != UpdateEvent::Op::kInsert) continue;
      EXPECT_GE(ev.weight, 1.0);
      EXPECT_LE(ev.weight, 4.0);
    }
    // All pairwise distances inside [1, delta].
    for (std::size_t i = 0; i < ids.size(); ++i) {
      for (std::size_t j = i + 1; j < ids.size(); ++j) {
        const double d = space->Distance(ids[i], ids[j]);
        ASSERT_GE(d, 1.0);
        ASSERT_LE(d, 1000.0);
      }
    }
  }
}

TEST(GenerateStreamTest, RejectsBadArguments) {
  EXPECT_THROW(GenerateStream(StreamKind::kUniformBox, 10, 0, 1), Error);
  EXPECT_THROW(GenerateStream(StreamKind::kUniformBox, 0, 10, 1), Error);
  GenOptions opts;
  opts.pool = 3;
  EXPECT_THROW(GenerateStream(StreamKind::kUniformBox, 10, 10, 1, opts), Error);
  EXPECT_THROW(ParseStreamKind("spiral"), Error);
  EXPECT_EQ(ParseStreamKind("adversarial-churn"), StreamKind::kAdversarialChurn);
}

TEST(StreamFormatTest, RoundTrip) {
  const Stream s = GenerateStream(StreamKind::kTwoClusterDrift, 12, 80, 4);
  std::istringstream in(Serialize(s));
  const Stream back = ParseStream(in);
  EXPECT_EQ(Serialize(back), Serialize(s));
}

TEST(StreamFormatTest, ParsesHandWrittenStream) {
  std::istringstream in(
      "{\"backing\":\"coords\",\"norm\":2,\"dim\":2,\"delta\":10}\n"
      "{\"op\":\"i\",\"id\":7,\"w\":2.5,\"x\":[3,4]}\n"
      "{\"op\":\"i\",\"id\":1,\"x\":[0,0]}\n"
      "{\"op\":\"d\",\"id\":7}\n");
  const Stream s = ParseStream(in);
  ASSERT_EQ(s.events.size(), 3u);
  EXPECT_EQ(s.events[0].weight, 2.5);
  EXPECT_EQ(s.events[1].weight, 1.0);
  EXPECT_EQ(s.events[2].op, UpdateEvent::Op::kDelete);
  const auto space = BuildSpace(s);
  EXPECT_DOUBLE_EQ(space->Distance(MakeId(7), MakeId(1)), 5.0);
}

TEST(StreamFormatTest, ParseErrorsCarryLineNumbers) {
  std::istringstream in(
      "{\"backing\":\"coords\",\"norm\":2,\"dim\":2,\"delta\":10}\n"
      "{\"op\":\"i\",\"id\":7,\"x\":[3,4]}\n"
      "{\"op\":\"q\",\"id\":7}\n");
  try {
    ParseStream(in);
    FAIL() << "expected a parse error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kParse);
    EXPECT_NE(std::string(e.what()).find('3'), std::string::npos) << e.what();
  }
  std::istringstream bad_json("{\"backing\":\"coords\",\"dim\":2,\"delta\":10}\n{oops\n");
  EXPECT_THROW(ParseStream(bad_json), Error);
}

TEST(StreamFormatTest, MatrixBackedStream) {
  const std::string dir = ::testing::TempDir();
  {
    std::ofstream m(dir + "/stream_test_m.txt");
    m << "3\n0 1 2\n1 0 1\n2 1 0\n";
  }
  std::istringstream in("{\"backing\":\"matrix\",\"matrix\":\"stream_test_m.txt\",\"delta\":2}\n"
                        "{\"op\":\"i\",\"id\":2}\n");
  const Stream s = ParseStream(in);
  const auto space = BuildSpace(s, dir);
  EXPECT_EQ(space->Distance(MakeId(0), MakeId(2)), 2.0);
}

}  // namespace
}  // namespace dynkmed
