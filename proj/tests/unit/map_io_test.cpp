/*
 * Copyright 2026 The pivotmap Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <functional>
#include <limits>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "pivotmap/clip.hpp"
#include "pivotmap/map_io.hpp"

namespace pivotmap {
namespace {

std::string record(const std::string& elements) {
  return R"({"frame_id":"f0","range":{"x_min":-15,"x_max":15,"y_min":-30,"y_max":30},"elements":[)" +
         elements + "]}";
}

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorKind::kIo;
}

TEST(Geometry, PointSegmentDistance) {
  EXPECT_DOUBLE_EQ(point_segment_distance({1, 0.05}, {0, 0}, {2, 0}), 0.05);
  EXPECT_DOUBLE_EQ(point_segment_distance({3, 4}, {0, 0}, {0, 0}), 5.0);
  EXPECT_DOUBLE_EQ(point_segment_distance({-3, 4}, {0, 0}, {2, 0}), 5.0);
}

TEST(Geometry, ArcWalkerOpenAndClosed) {
  const std::vector<Point2> sq = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  const ArcWalker open(sq, false);
  EXPECT_DOUBLE_EQ(open.length(), 3.0);
  EXPECT_EQ(open.at(1.5), (Point2{1, 0.5}));
  const ArcWalker closed(sq, true);
  EXPECT_DOUBLE_EQ(closed.length(), 4.0);
  EXPECT_EQ(closed.at(3.5), (Point2{0, 0.5}));
}

TEST(ParseLocalMap, MinimalDivider) {
  const LocalMap m = parse_local_map(record(R"({"class":"divider","points":[[0,0],[1,0]]})"));
  ASSERT_EQ(m.elements.size(), 1u);
  EXPECT_EQ(m.elements[0].cls, ElementClass::kDivider);
  EXPECT_FALSE(m.elements[0].score.has_value());
  EXPECT_FALSE(m.elements[0].line.closed);
}

TEST(ParseLocalMap, RejectsSinglePoint) {
  try {
    parse_local_map(record(R"({"class":"divider","points":[[0,0]]})"), 7);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kValidation);
    const std::string msg = e.what();
    EXPECT_NE(msg.find("line 7"), std::string::npos);
    EXPECT_NE(msg.find("element 0"), std::string::npos);
    EXPECT_NE(msg.find(">= 2"), std::string::npos);
  }
}

TEST(ParseLocalMap, RejectsScoreOutOfRange) {
  try {
    parse_local_map(record(R"({"class":"boundary","score":1.3,"points":[[0,0],[1,0]]})"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kValidation);
    EXPECT_NE(std::string(e.what()).find("score"), std::string::npos);
  }
}

TEST(ParseLocalMap, ErrorKinds) {
  EXPECT_EQ(kind_of([] { parse_local_map("{not json"); }), ErrorKind::kParse);
  EXPECT_EQ(kind_of([] { parse_local_map(record(R"({"class":"lane","points":[[0,0],[1,0]]})")); }),
            ErrorKind::kValidation);
  EXPECT_EQ(kind_of([] { parse_local_map(record(R"({"class":"divider","points":[[0,0],[0,0]]})")); }),
            ErrorKind::kValidation);
  EXPECT_EQ(kind_of([] {
              parse_local_map(record(R"({"class":"ped_crossing","closed":true,"points":[[0,0],[1,0],[0,0]]})"));
            }),
            ErrorKind::kValidation);
  EXPECT_EQ(kind_of([] {
              parse_local_map(R"({"frame_id":"x","range":{"x_min":1,"x_max":0,"y_min":0,"y_max":1},"elements":[]})");
            }),
            ErrorKind::kValidation);
}

TEST(ParseLocalMap, SerializeRoundTripIsIdentity) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-15.0, 15.0);
  std::uniform_real_distribution<double> s(0.0, 1.0);
  for (int rep = 0; rep < 200; ++rep) {
    LocalMap m;
    m.frame_id = "frame-" + std::to_string(rep);
    const int count = rep % 5;
    for (int k = 0; k < count; ++k) {
      MapElement e;
      e.cls = kAllClasses[static_cast<std::size_t>(k) % 3];
      e.line.closed = k % 2 == 1;
      for (int i = 0; i < 3 + k; ++i) e.line.points.push_back({u(rng), u(rng)});
      if (rep % 2 == 0) e.score = s(rng);
      m.elements.push_back(e);
    }
    const LocalMap back = parse_local_map(serialize_local_map(m));
    EXPECT_EQ(back, m);
  }
}

TEST(ParseLocalMap, StreamsAndSkipsBlankLines) {
  std::stringstream ss;
  ss << record("") << "\n\n" << record(R"({"class":"divider","points":[[0,0],[1,0]]})") << "\n";
  const auto maps = read_local_maps(ss);
  ASSERT_EQ(maps.size(), 2u);
  EXPECT_TRUE(maps[0].elements.empty());
}

TEST(Clip, VerticalSegmentCut) {
  const auto pieces = clip_polyline({{{0, -40}, {0, 40}}, false}, BevRange{});
  ASSERT_EQ(pieces.size(), 1u);
  EXPECT_EQ(pieces[0].points, (std::vector<Point2>{{0, -30}, {0, 30}}));
}

TEST(Clip, OutsideElementDropped) {
  LocalMap m{"f", {}, {{ElementClass::kDivider, {{{20, 0}, {20, 5}}, false}, std::nullopt},
                       {ElementClass::kDivider, {{{0, 0}, {1, 5}}, false}, std::nullopt}}};
  EXPECT_EQ(clip_to_range(m).elements.size(), 1u);
}

TEST(Clip, VShapeReenteringYieldsTwoPieces) {
  // In at (0,0), out through x = 15, back in, ending at (0, 10).
  const Polyline v{{{0, 0}, {20, 5}, {0, 10}}, false};
  const auto pieces = clip_polyline(v, BevRange{});
  ASSERT_EQ(pieces.size(), 2u);
  EXPECT_EQ(pieces[0].points.front(), (Point2{0, 0}));
  EXPECT_DOUBLE_EQ(pieces[0].points.back().x, 15.0);
  EXPECT_DOUBLE_EQ(pieces[0].points.back().y, 3.75);
  EXPECT_DOUBLE_EQ(pieces[1].points.front().x, 15.0);
  EXPECT_DOUBLE_EQ(pieces[1].points.front().y, 6.25);
  EXPECT_EQ(pieces[1].points.back(), (Point2{0, 10}));
}

TEST(Clip, IdempotentAndInsideRange) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(-50.0, 50.0);
  const BevRange range;
  for (int rep = 0; rep < 500; ++rep) {
    LocalMap m{"f", range, {}};
    for (int k = 0; k < 3; ++k) {
      MapElement e{kAllClasses[static_cast<std::size_t>(k)], {{}, k == 1}, std::nullopt};
      for (int i = 0; i < 4 + rep % 6; ++i) e.line.points.push_back({u(rng), u(rng)});
      m.elements.push_back(e);
    }
    const LocalMap once = clip_to_range(m);
    for (const auto& e : once.elements) {
      for (const Point2& p : e.line.points) EXPECT_TRUE(range.contains(p));
      EXPECT_NO_THROW(validate_polyline(e.line, "clipped"));
    }
    EXPECT_EQ(clip_to_range(once), once);
  }
}

}  // namespace
}  // namespace pivotmap
