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

namespace csc
{
namespace
{

void attachHull(Cluster & cluster, const FusionParams & params)
{
  try {
    cluster.hull = groundHull(cluster.points, params.hull, params.concave_k);
  } catch (const DegenerateCluster &) {
    cluster.hull = {Point2{cluster.centroid.x, cluster.centroid.y}};
  }
}

}  // namespace

std::vector<PedestrianDetection3D> detectPedestrians3D(
  const SceneFrame & frame, const CameraModel & cam, const RangeHeightModel & model,
  const FusionParams & params)
{
  std::vector<PedestrianDetection3D> detections;

  std::vector<BBox2D> persons;
  std::vector<size_t> person_source;
  for (size_t i = 0; i < frame.bboxes.size(); ++i) {
    if (frame.bboxes[i].label == ObjectClass::Person) {
      persons.push_back(frame.bboxes[i]);
      person_source.push_back(i);
    }
  }
  if (frame.points.empty() || persons.empty()) {
    return detections;
  }

  auto clusters = euclideanCluster(
    frame.points, params.distance_threshold, params.min_cluster_size, params.policy);
  const auto cloud = projectCloud(frame.points, cam, params.policy);

  const auto n = static_cast<std::ptrdiff_t>(clusters.size());
  if (params.policy == ExecPolicy::Serial) {
    for (std::ptrdiff_t c = 0; c < n; ++c) {
      auto & cluster = clusters[c];
      attachHull(cluster, params);
      cluster.projected.reserve(cluster.indices.size());
      for (size_t idx : cluster.indices) cluster.projected.push_back(cloud[idx].uv);
    }
  } else {
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t c = 0; c < n; ++c) {
      auto & cluster = clusters[c];
      attachHull(cluster, params);
      cluster.projected.reserve(cluster.indices.size());
      for (size_t idx : cluster.indices) cluster.projected.push_back(cloud[idx].uv);
    }
  }

  const auto matches = classifyPolygons(persons, clusters, model, params.policy);
  detections.reserve(matches.size());
  for (const auto & m : matches) {
    PedestrianDetection3D det;
    det.points = m.validated_points;
    det.position = centroid(det.points);
    det.range = norm(det.position);
    det.source_bbox = person_source[m.bbox_index];
    if (det.range > 0.0) {
      detections.push_back(std::move(det));
    }
  }
  return detections;
}

}  // namespace csc
