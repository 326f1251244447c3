// Copyright 2026 The Contextual Speed Controller Authors
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

#include "csc/controller.hpp"
#include "csc/scenario_io.hpp"
#include "fixtures.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>
#include <vector>

namespace csc
{
namespace
{

TEST(LegalSpeed, SegmentsAndDefault)
{
  EXPECT_EQ(legalSpeed(RoadSegment{"a", 40.0}), 40.0);
  EXPECT_EQ(legalSpeed(std::nullopt), 40.0);
  EXPECT_EQ(legalSpeed(RoadSegment{"b", 10.0}), 10.0);
}

TEST(ComposeSpeed, MinimumOfPresentLayers)
{
  EXPECT_EQ(composeSpeed({40.0, 14.7, std::nullopt}), 14.7);
  EXPECT_EQ(composeSpeed({40.0, 13.0, 8.0}), 8.0);
  EXPECT_EQ(composeSpeed({10.0, 14.7, 12.0}), 10.0);
}

TEST(ComposeSpeed, NeverExceedsAnyLayer)
{
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> v(0.0, 60.0);
  for (int n = 0; n < 1000; ++n) {
    LayerSpeeds l{v(rng), v(rng), n % 3 == 0 ? std::nullopt : std::optional<double>(v(rng))};
    const double f = composeSpeed(l);
    EXPECT_LE(f, l.legal);
    EXPECT_LE(f, l.context);
    if (l.proximity) EXPECT_LE(f, *l.proximity);
    EXPECT_TRUE(f == l.legal || f == l.context || (l.proximity && f == *l.proximity));
  }
}

ControllerConfig sharedConfig()
{
  ControllerConfig config;
  config.camera = CameraModel::forwardFacing(800.0, 800.0, 1280, 720, 1.2);
  config.range_model = RangeHeightModel::fromCamera(config.camera);
  config.segments["main"] = {"main", 40.0};
  return config;
}

TEST(ProcessFrame, EmptySharedFrame)
{
  SceneFrame frame;
  frame.road_type = RoadType::Shared;
  frame.segment = "main";
  const auto d = processFrame(frame, sharedConfig());
  EXPECT_EQ(d.final_kph, 14.7);
  EXPECT_EQ(d.layers.legal, 40.0);
  EXPECT_FALSE(d.layers.proximity);
  EXPECT_EQ(d.n_2d, 0u);
  EXPECT_EQ(d.n_3d, 0u);
}

TEST(ProcessFrame, SevenBoxesWithoutPoints)
{
  SceneFrame frame;
  frame.road_type = RoadType::Shared;
  for (int i = 0; i < 7; ++i) frame.bboxes.push_back(test::box(100.0 * i, 300, 100.0 * i + 40, 420));
  auto other = test::box(0, 0, 10, 10);
  other.label = ObjectClass::Other;
  frame.bboxes.push_back(other);
  const auto d = processFrame(frame, sharedConfig());
  EXPECT_EQ(d.n_2d, 7u);
  EXPECT_EQ(d.n_3d, 0u);
  EXPECT_EQ(d.final_kph, 11.1);
}

TEST(ProcessFrame, OnPathPedestrianSixMetres)
{
  GenSpec spec;
  spec.duration = 0.5;
  spec.pedestrians = {{1, 6.0, 0.0, 0.0, 0.0, 0.0, std::nullopt, false}};
  const auto scenario = generateScenario(spec);
  const auto config = configFor(scenario, sharedConfig());
  for (const auto & frame : scenario.frames) {
    ASSERT_EQ(frame.bboxes.size(), 1u);
    const auto d = processFrame(frame, config);
    ASSERT_EQ(d.n_3d, 1u);
    ASSERT_TRUE(d.layers.proximity);
    const auto det = detectPedestrians3D(frame, config.camera, config.range_model);
    const double expected = 3.6 * (det[0].position.x + 3.0 * std::abs(det[0].position.y)) / 3.0;
    EXPECT_NEAR(*d.layers.proximity, expected, 1e-9);
    EXPECT_NEAR(d.final_kph, 7.2, 0.4);
    EXPECT_EQ(d.final_kph, std::min({40.0, 14.7, *d.layers.proximity}));
  }
}

TEST(ProcessFrame, ProximityCanBeDisabled)
{
  GenSpec spec;
  spec.duration = 0.3;
  spec.pedestrians = {{1, 6.0, 0.0, 0.0, 0.0, 0.0, std::nullopt, false}};
  const auto scenario = generateScenario(spec);
  auto config = configFor(scenario, sharedConfig());
  config.proximity_enabled = false;
  for (const auto & frame : scenario.frames) {
    const auto d = processFrame(frame, config);
    EXPECT_FALSE(d.layers.proximity);
    EXPECT_EQ(d.n_3d, 1u);
    EXPECT_EQ(d.final_kph, 14.7);
  }
}

TEST(ProcessFrame, UnknownSegmentFallsBackToDefault)
{
  SceneFrame frame;
  frame.segment = "elsewhere";
  auto config = sharedConfig();
  config.segments["elsewhere-not"] = {"elsewhere-not", 10.0};
  EXPECT_EQ(processFrame(frame, config).layers.legal, 40.0);
  config.segments["elsewhere"] = {"elsewhere", 10.0};
  const auto d = processFrame(frame, config);
  EXPECT_EQ(d.layers.legal, 10.0);
  EXPECT_EQ(d.final_kph, 10.0);
}

TEST(Replay, DeterministicAndOrdered)
{
  const auto scenario = generateScenario(test::cleanPedestrianSpec());
  const auto config = configFor(scenario, sharedConfig());
  const auto a = replay(scenario.frames, config);
  const auto b = replay(scenario.frames, config);
  EXPECT_EQ(a, b);
  ASSERT_EQ(a.size(), scenario.frames.size());
  for (size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].timestamp, scenario.frames[i].timestamp);
    EXPECT_EQ(a[i].final_kph, composeSpeed(a[i].layers));
  }
}

TEST(Replay, SerialEqualsParallel)
{
  const auto scenario = generateScenario(test::cleanPedestrianSpec());
  auto serial = configFor(scenario, sharedConfig());
  serial.fusion.policy = ExecPolicy::Serial;
  auto parallel = serial;
  parallel.fusion.policy = ExecPolicy::Parallel;
  EXPECT_EQ(replay(scenario.frames, serial), replay(scenario.frames, parallel));
}

TEST(DecisionsCsv, RoundTrip)
{
  std::vector<SpeedDecision> d(3);
  d[0] = {0.0, {40.0, 14.7, std::nullopt}, 14.7, 0, 0, 15.0};
  d[1] = {0.1, {40.0, 13.0, 6.023002971159336}, 6.023002971159336, 4, 1, std::nullopt};
  d[2] = {0.2, {10.0, 11.1, 12.0}, 10.0, 7, 2, 9.75};
  std::stringstream ss;
  writeDecisionsCsv(ss, d);
  EXPECT_EQ(
    ss.str(),
    "t,legal_kph,context_kph,proximity_kph,final_kph,n_2d,n_3d,driver_kph\n"
    "0,40,14.7,,14.7,0,0,15\n"
    "0.1,40,13,6.023002971159336,6.023002971159336,4,1,\n"
    "0.2,10,11.1,12,10,7,2,9.75\n");
  EXPECT_EQ(readDecisionsCsv(ss), d);
}

TEST(DecisionsCsv, MalformedRows)
{
  std::istringstream short_row("0,40,14.7,,14.7,0,0\n");
  EXPECT_THROW(readDecisionsCsv(short_row), std::invalid_argument);
  std::istringstream bad_number("0,40,fast,,14.7,0,0,\n");
  EXPECT_THROW(readDecisionsCsv(bad_number), std::invalid_argument);
}

}  // namespace
}  // namespace csc
