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

#include "csc/core.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace csc
{

std::string_view toString(ObjectClass c)
{
  return c == ObjectClass::Person ? "person" : "other";
}

ObjectClass objectClassFromString(std::string_view s)
{
  return s == "person" ? ObjectClass::Person : ObjectClass::Other;
}

bool BBox2D::valid() const
{
  return std::isfinite(u_min) && std::isfinite(v_min) && std::isfinite(u_max) &&
         std::isfinite(v_max) && u_min < u_max && v_min < v_max && confidence >= 0.0 &&
         confidence <= 1.0;
}

Eigen::Vector3d RigidTransform::apply(const Point3 & p) const
{
  return rotation * Eigen::Vector3d(p.x, p.y, p.z) + translation;
}

Point3 RigidTransform::applyInverse(const Eigen::Vector3d & p_cam) const
{
  const Eigen::Vector3d body = rotation.transpose() * (p_cam - translation);
  return {body.x(), body.y(), body.z()};
}

void CameraModel::validate() const
{
  if (!(fx > 0.0) || !(fy > 0.0)) {
    throw std::invalid_argument("camera: focal lengths must be positive");
  }
  if (image_width <= 0 || image_height <= 0) {
    throw std::invalid_argument("camera: image dimensions must be positive");
  }
  if (!std::isfinite(cx) || !std::isfinite(cy)) {
    throw std::invalid_argument("camera: principal point must be finite");
  }
  const Eigen::Matrix3d rrt = extrinsic.rotation * extrinsic.rotation.transpose();
  if (!rrt.allFinite() || (rrt - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() > 1e-9) {
    throw std::invalid_argument("camera: extrinsic rotation is not orthonormal");
  }
  if (!extrinsic.translation.allFinite()) {
    throw std::invalid_argument("camera: extrinsic translation must be finite");
  }
}

CameraModel CameraModel::forwardFacing(
  double fx, double fy, int width, int height_px, double mount_height)
{
  CameraModel cam;
  cam.fx = fx;
  cam.fy = fy;
  cam.cx = width / 2.0;
  cam.cy = height_px / 2.0;
  cam.image_width = width;
  cam.image_height = height_px;
  // camera axes: x_c = -y_b, y_c = -z_b, z_c = x_b
  cam.extrinsic.rotation << 0.0, -1.0, 0.0,
                            0.0, 0.0, -1.0,
                            1.0, 0.0, 0.0;
  cam.extrinsic.translation = -cam.extrinsic.rotation * Eigen::Vector3d(0.0, 0.0, mount_height);
  return cam;
}

std::string_view toString(RoadType r)
{
  switch (r) {
    case RoadType::Shared:
      return "Shared";
    case RoadType::SemiShared:
      return "SemiShared";
    case RoadType::Regular:
      return "Regular";
  }
  return "Regular";
}

RoadType roadTypeFromString(std::string_view s)
{
  if (s == "Shared") return RoadType::Shared;
  if (s == "SemiShared") return RoadType::SemiShared;
  if (s == "Regular") return RoadType::Regular;
  throw std::invalid_argument("unknown road type: " + std::string(s));
}

std::optional<PointUV> projectCameraPoint(const Eigen::Vector3d & p_cam, const CameraModel & cam)
{
  if (!(p_cam.z() > 0.0)) {
    return std::nullopt;
  }
  return PointUV{
    cam.fx * (p_cam.x() / p_cam.z()) + cam.cx, cam.fy * (p_cam.y() / p_cam.z()) + cam.cy};
}

std::optional<PointUV> projectPoint(const Point3 & p, const CameraModel & cam)
{
  return projectCameraPoint(cam.extrinsic.apply(p), cam);
}

Point3 backProject(const PointUV & uv, double depth, const CameraModel & cam)
{
  const Eigen::Vector3d p_cam(
    (uv.u - cam.cx) / cam.fx * depth, (uv.v - cam.cy) / cam.fy * depth, depth);
  return cam.extrinsic.applyInverse(p_cam);
}

std::vector<ProjectedPoint> projectCloud(
  std::span<const Point3> points, const CameraModel & cam, ExecPolicy policy)
{
  std::vector<ProjectedPoint> out(points.size());
  const auto n = static_cast<std::ptrdiff_t>(points.size());
  if (policy == ExecPolicy::Serial) {
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      out[i] = {points[i], projectPoint(points[i], cam)};
    }
  } else {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      out[i] = {points[i], projectPoint(points[i], cam)};
    }
  }
  return out;
}

double norm(const Point3 & p)
{
  return std::sqrt(p.x * p.x + p.y * p.y + p.z * p.z);
}

Point3 centroid(std::span<const Point3> points)
{
  Point3 c;
  if (points.empty()) {
    return c;
  }
  for (const auto & p : points) {
    c.x += p.x;
    c.y += p.y;
    c.z += p.z;
  }
  const double n = static_cast<double>(points.size());
  return {c.x / n, c.y / n, c.z / n};
}

size_t countPersons(std::span<const BBox2D> bboxes)
{
  return static_cast<size_t>(std::count_if(
    bboxes.begin(), bboxes.end(), [](const BBox2D & b) { return b.label == ObjectClass::Person; }));
}

}  // namespace csc
