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

#ifndef CSC__CORE_HPP_
#define CSC__CORE_HPP_

#include <Eigen/Core>

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace csc
{

/// Body frame: x forward, y left, z up. Meters.
struct Point3
{
  double x{0.0};
  double y{0.0};
  double z{0.0};

  friend bool operator==(const Point3 &, const Point3 &) = default;
};

/// Image-plane coordinates in pixels; may fall outside the image.
struct PointUV
{
  double u{0.0};
  double v{0.0};

  friend bool operator==(const PointUV &, const PointUV &) = default;
};

enum class ObjectClass { Person, Other };

std::string_view toString(ObjectClass c);
ObjectClass objectClassFromString(std::string_view s);

struct BBox2D
{
  double u_min{0.0};
  double v_min{0.0};
  double u_max{0.0};
  double v_max{0.0};
  ObjectClass label{ObjectClass::Person};
  double confidence{1.0};

  double height() const { return v_max - v_min; }
  double width() const { return u_max - u_min; }
  bool contains(const PointUV & p) const
  {
    return p.u >= u_min && p.u <= u_max && p.v >= v_min && p.v <= v_max;
  }
  bool valid() const;

  friend bool operator==(const BBox2D &, const BBox2D &) = default;
};

/// Rigid transform body frame -> camera frame: p_cam = rotation * p_body + translation.
struct RigidTransform
{
  Eigen::Matrix3d rotation{Eigen::Matrix3d::Identity()};
  Eigen::Vector3d translation{Eigen::Vector3d::Zero()};

  Eigen::Vector3d apply(const Point3 & p) const;
  Point3 applyInverse(const Eigen::Vector3d & p_cam) const;

  friend bool operator==(const RigidTransform & a, const RigidTransform & b)
  {
    return a.rotation == b.rotation && a.translation == b.translation;
  }
};

/// Distortion-free pinhole camera.
struct CameraModel
{
  double fx{1.0};
  double fy{1.0};
  double cx{0.0};
  double cy{0.0};
  int image_width{1};
  int image_height{1};
  RigidTransform extrinsic{};

  /// Throws std::invalid_argument naming the failed invariant.
  void validate() const;

  bool inImage(const PointUV & p) const
  {
    return p.u >= 0.0 && p.v >= 0.0 && p.u < image_width && p.v < image_height;
  }

  /// Forward-looking camera mounted `height` meters above the body origin,
  /// optical axis along body +x, image u to the right, v down.
  static CameraModel forwardFacing(
    double fx, double fy, int width, int height_px, double mount_height);

  friend bool operator==(const CameraModel &, const CameraModel &) = default;
};

struct VehicleState
{
  double speed_kph{0.0};
  double wheel_angle{0.0};  // radians, positive left
  double wheelbase{2.5};

  friend bool operator==(const VehicleState &, const VehicleState &) = default;
};

enum class RoadType { Shared, SemiShared, Regular };

std::string_view toString(RoadType r);
/// Throws std::invalid_argument on an unknown name.
RoadType roadTypeFromString(std::string_view s);

struct SceneFrame
{
  double timestamp{0.0};
  VehicleState vehicle{};
  std::vector<Point3> points;
  std::vector<BBox2D> bboxes;
  RoadType road_type{RoadType::Regular};
  std::optional<std::string> segment;
  std::optional<double> driver_speed_kph;

  friend bool operator==(const SceneFrame &, const SceneFrame &) = default;
};

/// Camera-frame point projected through the intrinsics; absent when z_c <= 0.
std::optional<PointUV> projectCameraPoint(const Eigen::Vector3d & p_cam, const CameraModel & cam);

std::optional<PointUV> projectPoint(const Point3 & p, const CameraModel & cam);

/// Inverse of projectPoint for a known camera-frame depth.
Point3 backProject(const PointUV & uv, double depth, const CameraModel & cam);

enum class ExecPolicy { Serial, Parallel };

/// One XYZUV point.
struct ProjectedPoint
{
  Point3 xyz;
  std::optional<PointUV> uv;

  friend bool operator==(const ProjectedPoint &, const ProjectedPoint &) = default;
};

/// Element-wise projectPoint, preserving order and length.
std::vector<ProjectedPoint> projectCloud(
  std::span<const Point3> points, const CameraModel & cam,
  ExecPolicy policy = ExecPolicy::Parallel);

double norm(const Point3 & p);
Point3 centroid(std::span<const Point3> points);

size_t countPersons(std::span<const BBox2D> bboxes);

}  // namespace csc

#endif  // CSC__CORE_HPP_
