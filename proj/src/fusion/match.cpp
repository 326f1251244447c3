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

#include <cmath>

namespace csc
{
namespace
{

constexpr double kFullClusterOverlap = 0.8;
constexpr double kPartialPointsOverlap = 0.3;
constexpr double kSigmaBound = 2.0;
constexpr double kExactResidualTolerance = 1e-6;

std::optional<MatchResult> matchBBox(
  size_t bbox_index, const BBox2D & bbox, std::span<const Cluster> clusters,
  const RangeHeightModel & model)
{
  const Cluster * best = nullptr;
  Overlap best_overlap;
  for (const auto & cluster : clusters) {
    Overlap ov = getOverlap(bbox, cluster);
    if (ov.fraction <= 0.0 || !bboxInBounds(bbox, cluster.range, model)) {
      continue;
    }
    bool better = best == nullptr || ov.fraction > best_overlap.fraction;
    if (!better && ov.fraction == best_overlap.fraction) {
      better = cluster.range < best->range || (cluster.range == best->range && cluster.id < best->id);
    }
    if (!better) {
      continue;
    }
    best = &cluster;
    best_overlap = std::move(ov);
  }
  if (best == nullptr) {
    return std::nullopt;
  }

  MatchResult result;
  result.bbox_index = bbox_index;
  result.cluster_id = best->id;
  result.overlap_fraction = best_overlap.fraction;
  if (best_overlap.fraction > kFullClusterOverlap) {
    result.kind = MatchKind::FullCluster;
    result.validated_points = best->points;
  } else if (best_overlap.fraction > kPartialPointsOverlap) {
    result.kind = MatchKind::PartialPoints;
    result.validated_points = std::move(best_overlap.points);
  } else {
    return std::nullopt;
  }
  return result;
}

}  // namespace

void projectCluster(Cluster & cluster, const CameraModel & cam)
{
  cluster.projected.resize(cluster.points.size());
  for (size_t i = 0; i < cluster.points.size(); ++i) {
    cluster.projected[i] = projectPoint(cluster.points[i], cam);
  }
}

Overlap getOverlap(const BBox2D & bbox, const Cluster & cluster)
{
  Overlap out;
  size_t projectable = 0;
  const size_t n = std::min(cluster.points.size(), cluster.projected.size());
  for (size_t i = 0; i < n; ++i) {
    const auto & uv = cluster.projected[i];
    if (!uv) continue;
    ++projectable;
    if (bbox.contains(*uv)) {
      out.points.push_back(cluster.points[i]);
    }
  }
  if (projectable > 0) {
    out.fraction = static_cast<double>(out.points.size()) / static_cast<double>(projectable);
  }
  return out;
}

bool bboxInBounds(const BBox2D & bbox, double range, const RangeHeightModel & model)
{
  if (!(range > 0.0)) {
    return false;
  }
  const double residual = std::abs(bbox.height() - model.predictedHeight(range));
  if (model.residual_std == 0.0) {
    return residual <= kExactResidualTolerance;
  }
  return residual <= kSigmaBound * model.residual_std;
}

std::vector<MatchResult> classifyPolygons(
  std::span<const BBox2D> bboxes, std::span<const Cluster> clusters,
  const RangeHeightModel & model, ExecPolicy policy)
{
  std::vector<std::optional<MatchResult>> per_bbox(bboxes.size());
  const auto n = static_cast<std::ptrdiff_t>(bboxes.size());
  if (policy == ExecPolicy::Serial) {
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      per_bbox[i] = matchBBox(static_cast<size_t>(i), bboxes[i], clusters, model);
    }
  } else {
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      per_bbox[i] = matchBBox(static_cast<size_t>(i), bboxes[i], clusters, model);
    }
  }
  std::vector<MatchResult> matches;
  for (auto & m : per_bbox) {
    if (m) matches.push_back(std::move(*m));
  }
  return matches;
}

}  // namespace csc
