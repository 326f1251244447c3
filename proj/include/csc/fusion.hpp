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

#ifndef CSC__FUSION_HPP_
#define CSC__FUSION_HPP_

#include "csc/core.hpp"

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace csc
{

/// Ground-plane (x, y) vertex.
struct Point2
{
  double x{0.0};
  double y{0.0};

  friend bool operator==(const Point2 &, const Point2 &) = default;
};

using Polygon = std::vector<Point2>;

struct Cluster
{
  int id{0};
  std::vector<size_t> indices;  // positions in the input cloud, ascending
  std::vector<Point3> points;
  std::vector<std::optional<PointUV>> projected;  // parallel to points once projected
  Polygon hull;
  Point3 centroid;
  double range{0.0};
};

enum class MatchKind { FullCluster, PartialPoints };

struct MatchResult
{
  size_t bbox_index{0};
  int cluster_id{0};
  double overlap_fraction{0.0};
  std::vector<Point3> validated_points;
  MatchKind kind{MatchKind::FullCluster};
};

/// Linear fit of bbox pixel height against inverse range.
struct RangeHeightModel
{
  double slope{0.0};
  double intercept{0.0};
  double residual_std{0.0};

  double predictedHeight(double range) const { return slope / range + intercept; }

  /// Prior fitted to the projected height of an upright person_width x
  /// person_height box stood on the ground at every in-image position
  /// between near and far metres ahead.
  static RangeHeightModel fromCamera(
    const CameraModel & cam, double person_height = 1.7, double person_width = 0.5,
    double near = 3.0, double far = 15.0);

  friend bool operator==(const RangeHeightModel &, const RangeHeightModel &) = default;
};

struct PedestrianDetection3D
{
  Point3 position;
  double range{0.0};
  size_t source_bbox{0};
  std::vector<Point3> points;
};

enum class HullKind { Convex, Concave };

struct FusionParams
{
  double distance_threshold{0.5};
  size_t min_cluster_size{5};
  HullKind hull{HullKind::Convex};
  size_t concave_k{8};
  ExecPolicy policy{ExecPolicy::Parallel};
};

class DegenerateCluster : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

class InsufficientSamples : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Single-link clustering: two points share a cluster iff a chain of hops, each
/// no longer than distance_threshold, connects them. Clusters are ordered by
/// their smallest member index and numbered from 0 in that order.
/// Clusters smaller than min_cluster_size are dropped. Hulls are not computed.
std::vector<Cluster> euclideanCluster(
  std::span<const Point3> points, double distance_threshold, size_t min_cluster_size,
  ExecPolicy policy = ExecPolicy::Parallel);

/// Ground-plane hull, counter-clockwise. Convex by default; a k-nearest-neighbour
/// concave hull when kind == Concave (falls back to convex if no simple polygon
/// covering every point is found). Throws DegenerateCluster on fewer than three
/// distinct or all-collinear ground-plane points.
Polygon groundHull(
  std::span<const Point3> points, HullKind kind = HullKind::Convex, size_t concave_k = 8);

/// Fills cluster.projected.
void projectCluster(Cluster & cluster, const CameraModel & cam);

struct Overlap
{
  double fraction{0.0};
  std::vector<Point3> points;
};

/// Fraction of the cluster's projectable points whose UV lies inside the bbox.
Overlap getOverlap(const BBox2D & bbox, const Cluster & cluster);

/// |height - predicted| <= 2 * residual_std (exact-match within 1e-6 when std is 0).
bool bboxInBounds(const BBox2D & bbox, double range, const RangeHeightModel & model);

/// Per-bbox best match among clusters passing the height sanity check.
/// Overlap > 0.8 validates the whole cluster, overlap > 0.3 the overlapped points.
/// Output is ordered by bbox index; each bbox appears at most once. Equal overlaps
/// resolve to the nearer cluster, then the lower cluster id.
std::vector<MatchResult> classifyPolygons(
  std::span<const BBox2D> bboxes, std::span<const Cluster> clusters,
  const RangeHeightModel & model, ExecPolicy policy = ExecPolicy::Parallel);

struct RangeHeightSample
{
  double range{0.0};
  double bbox_height{0.0};
};

RangeHeightModel fitRangeHeightModel(std::span<const RangeHeightSample> samples);

/// Text record: "slope intercept residual_std", one line, '#' comments allowed.
void writeRangeHeightModel(std::ostream & os, const RangeHeightModel & model);
RangeHeightModel readRangeHeightModel(std::istream & is);
RangeHeightModel loadRangeHeightModel(const std::string & path);

/// Cluster, hull, project, classify; one detection per validated bbox.
std::vector<PedestrianDetection3D> detectPedestrians3D(
  const SceneFrame & frame, const CameraModel & cam, const RangeHeightModel & model,
  const FusionParams & params = {});

}  // namespace csc

#endif  // CSC__FUSION_HPP_
