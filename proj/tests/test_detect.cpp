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

#include "csc/fusion.hpp"
#include "csc/scenario_io.hpp"
#include "fixtures.hpp"
#include "synthetic_scene.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

namespace csc
{
namespace
{

GenSpec onePersonAhead(double x)
{
  GenSpec spec;
  spec.duration = 1.0;
  spec.frame_rate = 10.0;
  spec.seed = 9;
  spec.pedestrians = {{1, x, 0.0, 0.0, 0.0, 0.0, std::nullopt, false}};
  return spec;
}

TEST(Detect, EmptyFrame)
{
  const auto cam = CameraModel::forwardFacing(800.0, 800.0, 1280, 720, 1.2);
  SceneFrame frame;
  frame.bboxes.push_back(test::box(600, 300, 680, 500));
  EXPECT_TRUE(detectPedestrians3D(frame, cam, RangeHeightModel::fromCamera(cam)).empty());
}

TEST(Detect, PersonFiveMetresAhead)
{
  const auto scenario = generateScenario(onePersonAhead(5.0));
  const auto model = RangeHeightModel::fromCamera(scenario.camera);
  ASSERT_EQ(scenario.frames.size(), 10u);
  for (const auto & frame : scenario.frames) {
    const auto det = detectPedestrians3D(frame, scenario.camera, model);
    ASSERT_EQ(det.size(), 1u);
    EXPECT_NEAR(std::hypot(det[0].position.x, det[0].position.y), 5.0, 0.2);
    EXPECT_NEAR(det[0].range, 5.0, 0.2);
    EXPECT_EQ(det[0].source_bbox, 0u);
    EXPECT_GE(det[0].points.size(), 20u);
  }
}

TEST(Detect, LamppostWithoutBoxIsIgnored)
{
  auto spec = onePersonAhead(5.0);
  spec.poles = {{7.0, -2.5, 4.0}};
  const auto scenario = generateScenario(spec);
  const auto model = RangeHeightModel::fromCamera(scenario.camera);
  for (const auto & frame : scenario.frames) {
    ASSERT_EQ(euclideanCluster(frame.points, 0.5, 5).size(), 2u);
    const auto det = detectPedestrians3D(frame, scenario.camera, model);
    ASSERT_EQ(det.size(), 1u);
    EXPECT_NEAR(det[0].position.x, 5.0, 0.2);
  }
}

TEST(Detect, NonPersonBoxesAreSkippedAndIndicesKept)
{
  const auto scenario = generateScenario(onePersonAhead(6.0));
  auto frame = scenario.frames.front();
  ASSERT_EQ(frame.bboxes.size(), 1u);
  auto car = frame.bboxes.front();
  car.label = ObjectClass::Other;
  frame.bboxes.insert(frame.bboxes.begin(), car);
  const auto model = RangeHeightModel::fromCamera(scenario.camera);
  const auto det = detectPedestrians3D(frame, scenario.camera, model);
  ASSERT_EQ(det.size(), 1u);
  EXPECT_EQ(det[0].source_bbox, 1u);

  frame.bboxes.erase(frame.bboxes.begin() + 1);
  EXPECT_TRUE(detectPedestrians3D(frame, scenario.camera, model).empty());
}

TEST(Detect, ImplausibleBoxHeightRejected)
{
  const auto scenario = generateScenario(onePersonAhead(6.0));
  auto frame = scenario.frames.front();
  auto & b = frame.bboxes.front();
  const double centre = 0.5 * (b.v_min + b.v_max);
  b.v_min = centre - 10.0;
  b.v_max = centre + 10.0;
  const auto model = RangeHeightModel::fromCamera(scenario.camera);
  EXPECT_TRUE(detectPedestrians3D(frame, scenario.camera, model).empty());
}

TEST(Detect, RandomCrowdRecall)
{
  GenSpec spec;
  spec.duration = 20.0;
  spec.seed = 13;
  spec.crowd = {1, 8, 3.0, 15.0, -6.0, 6.0, 1.0};
  const auto s = generateScenario(spec);
  const auto model = RangeHeightModel::fromCamera(s.camera);
  size_t central = 0;
  size_t central_found = 0;
  size_t all = 0;
  size_t all_found = 0;
  for (size_t k = 0; k < s.frames.size(); ++k) {
    const auto det = detectPedestrians3D(s.frames[k], s.camera, model);
    for (const auto & gt : s.ground_truth) {
      if (gt.frame != k || !gt.in_view || std::hypot(gt.position.x, gt.position.y) > 15.0) continue;
      bool found = false;
      for (const auto & d : det) {
        found = found || std::hypot(d.position.x - gt.position.x, d.position.y - gt.position.y) <= 0.3;
      }
      ++all;
      all_found += found ? 1 : 0;
      if (std::abs(gt.position.y) <= 0.4 * gt.position.x) {
        ++central;
        central_found += found ? 1 : 0;
      }
    }
  }
  ASSERT_GT(central, 200u);
  EXPECT_EQ(central_found, central);
  // close bodies near the frustum edge fall outside the 2-sigma height band
  EXPECT_GE(static_cast<double>(all_found), 0.95 * static_cast<double>(all));
}

TEST(Detect, DenseFrameSerialEqualsParallel)
{
  const auto cam = CameraModel::forwardFacing(800.0, 800.0, 1280, 720, 1.2);
  const auto frame = test::denseFrame(cam);
  const auto model = RangeHeightModel::fromCamera(cam);
  FusionParams serial;
  serial.policy = ExecPolicy::Serial;
  FusionParams parallel;
  parallel.policy = ExecPolicy::Parallel;
  const auto a = detectPedestrians3D(frame, cam, model, serial);
  const auto b = detectPedestrians3D(frame, cam, model, parallel);
  ASSERT_EQ(a.size(), b.size());
  EXPECT_GT(a.size(), 0u);
  for (size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].source_bbox, b[i].source_bbox);
    EXPECT_EQ(a[i].position, b[i].position);
    EXPECT_EQ(a[i].points, b[i].points);
  }
}

TEST(Detect, ConcaveHullOptionGivesSameDetections)
{
  const auto scenario = generateScenario(test::cleanPedestrianSpec());
  const auto model = RangeHeightModel::fromCamera(scenario.camera);
  FusionParams concave;
  concave.hull = HullKind::Concave;
  for (const auto & frame : scenario.frames) {
    const auto a = detectPedestrians3D(frame, scenario.camera, model);
    const auto b = detectPedestrians3D(frame, scenario.camera, model, concave);
    ASSERT_EQ(a.size(), b.size());
    for (size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].position, b[i].position);
  }
}

}  // namespace
}  // namespace csc
