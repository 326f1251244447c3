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
#include "fixtures.hpp"

#include <gtest/gtest.h>

#include <random>
#include <vector>

namespace csc
{
namespace
{

using test::box;
using test::permissiveModel;
using test::syntheticCluster;

TEST(GetOverlap, AllInside)
{
  const auto c = syntheticCluster(0, 10, 10, 5.0);
  const auto ov = getOverlap(box(40, 40, 60, 60), c);
  EXPECT_DOUBLE_EQ(ov.fraction, 1.0);
  EXPECT_EQ(ov.points, c.points);
}

TEST(GetOverlap, ThreeOfTen)
{
  const auto c = syntheticCluster(0, 10, 3, 5.0);
  const auto ov = getOverlap(box(40, 40, 60, 60), c);
  EXPECT_DOUBLE_EQ(ov.fraction, 0.3);
  ASSERT_EQ(ov.points.size(), 3u);
  EXPECT_EQ(ov.points[0], c.points[0]);
  EXPECT_EQ(ov.points[2], c.points[2]);
}

TEST(GetOverlap, BehindCameraIsExcluded)
{
  const auto behind = syntheticCluster(0, 10, 0, 5.0, {50, 50}, 10);
  const auto ov = getOverlap(box(0, 0, 100, 100), behind);
  EXPECT_DOUBLE_EQ(ov.fraction, 0.0);
  EXPECT_TRUE(ov.points.empty());

  // absent UVs drop out of the denominator
  const auto mixed = syntheticCluster(0, 10, 4, 5.0, {50, 50}, 6);
  EXPECT_DOUBLE_EQ(getOverlap(box(40, 40, 60, 60), mixed).fraction, 1.0);
}

TEST(GetOverlap, UsesRealProjection)
{
  const auto cam = test::identityCamera();
  Cluster c;
  c.points = {{0, 0, 10}, {0.1, 0, 10}, {4, 0, 10}, {0, 0, -1}};
  projectCluster(c, cam);
  ASSERT_EQ(c.projected.size(), 4u);
  EXPECT_FALSE(c.projected[3]);
  const auto ov = getOverlap(box(45, 45, 55, 55), c);
  EXPECT_DOUBLE_EQ(ov.fraction, 2.0 / 3.0);
}

TEST(BBoxInBounds, SigmaRule)
{
  const RangeHeightModel model{200.0, 10.0, 4.0};
  const double expected = 200.0 / 8.0 + 10.0;
  EXPECT_TRUE(bboxInBounds(box(0, 0, 10, expected), 8.0, model));
  EXPECT_TRUE(bboxInBounds(box(0, 0, 10, expected + 1.9 * 4.0), 8.0, model));
  EXPECT_TRUE(bboxInBounds(box(0, 0, 10, expected - 1.9 * 4.0), 8.0, model));
  EXPECT_FALSE(bboxInBounds(box(0, 0, 10, expected + 2.5 * 4.0), 8.0, model));
  EXPECT_FALSE(bboxInBounds(box(0, 0, 10, expected - 2.5 * 4.0), 8.0, model));
}

TEST(BBoxInBounds, ZeroSigmaNeedsExactHeight)
{
  const RangeHeightModel exact{200.0, 0.0, 0.0};
  EXPECT_TRUE(bboxInBounds(box(0, 0, 10, 40), 5.0, exact));
  EXPECT_FALSE(bboxInBounds(box(0, 0, 10, 40.01), 5.0, exact));
  EXPECT_FALSE(bboxInBounds(box(0, 0, 10, 40), 0.0, exact));
}

TEST(ClassifyPolygons, FullClusterAboveEightyPercent)
{
  const std::vector<BBox2D> boxes{box(40, 40, 60, 60)};
  const std::vector<Cluster> clusters{syntheticCluster(0, 100, 81, 5.0)};
  const auto m = classifyPolygons(boxes, clusters, permissiveModel());
  ASSERT_EQ(m.size(), 1u);
  EXPECT_EQ(m[0].kind, MatchKind::FullCluster);
  EXPECT_DOUBLE_EQ(m[0].overlap_fraction, 0.81);
  EXPECT_EQ(m[0].validated_points.size(), 100u);
}

TEST(ClassifyPolygons, CompleteOverlap)
{
  const std::vector<BBox2D> boxes{box(40, 40, 60, 60)};
  const std::vector<Cluster> clusters{syntheticCluster(0, 12, 12, 5.0)};
  const auto m = classifyPolygons(boxes, clusters, permissiveModel());
  ASSERT_EQ(m.size(), 1u);
  EXPECT_EQ(m[0].kind, MatchKind::FullCluster);
  EXPECT_DOUBLE_EQ(m[0].overlap_fraction, 1.0);
}

TEST(ClassifyPolygons, PartialBetweenThirtyAndEighty)
{
  const std::vector<BBox2D> boxes{box(40, 40, 60, 60)};
  for (size_t inside : {31u, 50u, 80u}) {
    const std::vector<Cluster> clusters{syntheticCluster(3, 100, inside, 5.0)};
    const auto m = classifyPolygons(boxes, clusters, permissiveModel());
    ASSERT_EQ(m.size(), 1u) << inside;
    EXPECT_EQ(m[0].kind, MatchKind::PartialPoints) << inside;
    EXPECT_EQ(m[0].cluster_id, 3);
    ASSERT_EQ(m[0].validated_points.size(), inside);
    for (size_t i = 0; i < inside; ++i) EXPECT_EQ(m[0].validated_points[i], clusters[0].points[i]);
  }
}

TEST(ClassifyPolygons, NoMatchAtOrBelowThirty)
{
  const std::vector<BBox2D> boxes{box(40, 40, 60, 60)};
  for (size_t inside : {0u, 20u, 30u}) {
    const std::vector<Cluster> clusters{syntheticCluster(0, 100, inside, 5.0)};
    EXPECT_TRUE(classifyPolygons(boxes, clusters, permissiveModel()).empty()) << inside;
  }
}

TEST(ClassifyPolygons, MergedClusterValidatesTwoBoxes)
{
  Cluster merged;
  merged.id = 4;
  for (int i = 0; i < 20; ++i) {
    merged.points.push_back({5.0, 0.05 * i, 0.0});
    merged.projected.push_back(PointUV{i < 10 ? 30.0 : 70.0, 50.0});
  }
  merged.centroid = centroid(merged.points);
  merged.range = 5.0;
  const std::vector<BBox2D> boxes{box(20, 40, 40, 60), box(60, 40, 80, 60)};
  const std::vector<Cluster> clusters{merged};
  const auto m = classifyPolygons(boxes, clusters, permissiveModel());
  ASSERT_EQ(m.size(), 2u);
  EXPECT_EQ(m[0].bbox_index, 0u);
  EXPECT_EQ(m[1].bbox_index, 1u);
  EXPECT_EQ(m[0].cluster_id, 4);
  EXPECT_EQ(m[1].cluster_id, 4);
  EXPECT_EQ(m[0].kind, MatchKind::PartialPoints);
  EXPECT_EQ(m[0].validated_points.size(), 10u);
  EXPECT_EQ(m[1].validated_points.front(), merged.points[10]);
}

TEST(ClassifyPolygons, EachBoxTakesOneBestCluster)
{
  const std::vector<BBox2D> boxes{box(40, 40, 60, 60)};
  const std::vector<Cluster> clusters{
    syntheticCluster(0, 10, 5, 5.0), syntheticCluster(1, 10, 9, 6.0),
    syntheticCluster(2, 10, 9, 7.0)};
  const auto m = classifyPolygons(boxes, clusters, permissiveModel());
  ASSERT_EQ(m.size(), 1u);
  EXPECT_EQ(m[0].cluster_id, 1);
  EXPECT_EQ(m[0].kind, MatchKind::FullCluster);
}

TEST(ClassifyPolygons, EqualOverlapPrefersNearerCluster)
{
  const std::vector<BBox2D> boxes{box(40, 40, 60, 60)};
  const std::vector<Cluster> clusters{
    syntheticCluster(0, 10, 10, 9.0), syntheticCluster(1, 10, 10, 8.0),
    syntheticCluster(2, 10, 9, 4.0)};
  const auto m = classifyPolygons(boxes, clusters, permissiveModel());
  ASSERT_EQ(m.size(), 1u);
  EXPECT_EQ(m[0].cluster_id, 1);

  const std::vector<Cluster> twins{
    syntheticCluster(5, 10, 10, 5.0), syntheticCluster(3, 10, 10, 5.0)};
  EXPECT_EQ(classifyPolygons(boxes, twins, permissiveModel())[0].cluster_id, 3);
}

TEST(ClassifyPolygons, OutOfBoundsClusterIsSkipped)
{
  // box height 20 px: model predicts 20 px at 10 m and 100 px at 2 m
  const RangeHeightModel model{200.0, 0.0, 2.0};
  const std::vector<BBox2D> boxes{box(40, 40, 60, 60)};
  const std::vector<Cluster> clusters{
    syntheticCluster(0, 10, 10, 2.0), syntheticCluster(1, 10, 6, 10.0)};
  const auto m = classifyPolygons(boxes, clusters, model);
  ASSERT_EQ(m.size(), 1u);
  EXPECT_EQ(m[0].cluster_id, 1);
  EXPECT_EQ(m[0].kind, MatchKind::PartialPoints);

  const std::vector<Cluster> only_bad{syntheticCluster(0, 10, 10, 2.0)};
  EXPECT_TRUE(classifyPolygons(boxes, only_bad, model).empty());
}

TEST(ClassifyPolygons, EmptyInputs)
{
  const std::vector<BBox2D> boxes{box(40, 40, 60, 60)};
  EXPECT_TRUE(classifyPolygons(boxes, {}, permissiveModel()).empty());
  const std::vector<Cluster> clusters{syntheticCluster(0, 10, 10, 5.0)};
  EXPECT_TRUE(classifyPolygons({}, clusters, permissiveModel()).empty());
}

TEST(ClassifyPolygons, SerialEqualsParallelAndOutputIsOrdered)
{
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> pix(0.0, 100.0);
  std::uniform_real_distribution<double> range(2.0, 15.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Cluster> clusters;
    for (int c = 0; c < 12; ++c) {
      Cluster cl;
      cl.id = c;
      const double u0 = pix(rng);
      const double v0 = pix(rng);
      for (int i = 0; i < 25; ++i) {
        cl.points.push_back({range(rng), pix(rng) / 100.0, 0.0});
        cl.projected.push_back(PointUV{u0 + pix(rng) / 5.0, v0 + pix(rng) / 5.0});
      }
      cl.centroid = centroid(cl.points);
      cl.range = norm(cl.centroid);
      clusters.push_back(cl);
    }
    std::vector<BBox2D> boxes;
    for (int b = 0; b < 10; ++b) {
      const double u = pix(rng);
      const double v = pix(rng);
      boxes.push_back(box(u, v, u + 25, v + 25));
    }
    const RangeHeightModel model{100.0, 5.0, 6.0};
    const auto s = classifyPolygons(boxes, clusters, model, ExecPolicy::Serial);
    const auto p = classifyPolygons(boxes, clusters, model, ExecPolicy::Parallel);
    ASSERT_EQ(s.size(), p.size());
    for (size_t i = 0; i < s.size(); ++i) {
      EXPECT_EQ(s[i].bbox_index, p[i].bbox_index);
      EXPECT_EQ(s[i].cluster_id, p[i].cluster_id);
      EXPECT_EQ(s[i].validated_points, p[i].validated_points);
      EXPECT_GT(s[i].overlap_fraction, 0.3);
      if (i > 0) EXPECT_LT(s[i - 1].bbox_index, s[i].bbox_index);
    }
  }
}

}  // namespace
}  // namespace csc
