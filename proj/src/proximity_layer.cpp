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

#include "csc/proximity_layer.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace csc
{
namespace
{

constexpr double kMpsToKph = 3.6;
constexpr double kStraightCurvature = 1e-12;

}  // namespace

std::string_view toString(SpeedLaw law)
{
  return law == SpeedLaw::Ttc ? "ttc" : "braking";
}

SpeedLaw speedLawFromString(std::string_view s)
{
  if (s == "ttc") return SpeedLaw::Ttc;
  if (s == "braking") return SpeedLaw::Braking;
  throw std::invalid_argument("unknown speed law: " + std::string(s));
}

std::string_view toString(RangeForm form)
{
  return form == RangeForm::Additive ? "additive" : "replacement";
}

RangeForm rangeFormFromString(std::string_view s)
{
  if (s == "additive") return RangeForm::Additive;
  if (s == "replacement") return RangeForm::Replacement;
  throw std::invalid_argument("unknown range form: " + std::string(s));
}

void ProximityParams::validate() const
{
  if (!(lateral_scaling_factor > 0.0)) {
    throw std::invalid_argument("lateral scaling factor must be positive");
  }
  if (!(ttc > 0.0)) throw std::invalid_argument("ttc must be positive");
  if (!(max_considered_range > 0.0)) throw std::invalid_argument("max range must be positive");
  if (!(decel > 0.0)) throw std::invalid_argument("deceleration must be positive");
}

PathModel pathModel(const VehicleState & vehicle)
{
  if (!(std::abs(vehicle.wheel_angle) < std::numbers::pi / 2)) {
    throw std::invalid_argument("wheel angle must satisfy |angle| < pi/2");
  }
  if (!(vehicle.wheelbase > 0.0)) {
    throw std::invalid_argument("wheelbase must be positive");
  }
  const double curvature = std::tan(vehicle.wheel_angle) / vehicle.wheelbase;
  if (!(std::abs(curvature) < 1.0)) {
    throw std::invalid_argument("path curvature must satisfy |k| < 1");
  }
  if (std::abs(curvature) < kStraightCurvature) {
    return {PathKind::Straight, 0.0};
  }
  return {PathKind::Arc, curvature};
}

std::optional<PathRelativePosition> tryPathRelative(
  const Point3 & position, const VehicleState & vehicle)
{
  const PathModel path = pathModel(vehicle);
  if (path.kind == PathKind::Straight) {
    if (!(position.x > 0.0)) return std::nullopt;
    return PathRelativePosition{position.x, std::abs(position.y)};
  }

  // right turns are mirrored into left turns
  const double radius = 1.0 / std::abs(path.curvature);
  const double y = path.curvature > 0.0 ? position.y : -position.y;
  const double dx = position.x;
  const double dy = y - radius;
  // vehicle sits at angle -pi/2 about the centre and sweeps counter-clockwise
  double swept = std::atan2(dy, dx) + std::numbers::pi / 2;
  if (swept > std::numbers::pi) swept -= 2.0 * std::numbers::pi;
  if (!(swept > 0.0)) return std::nullopt;
  return PathRelativePosition{radius * swept, std::abs(std::hypot(dx, dy) - radius)};
}

PathRelativePosition pathRelative(const Point3 & position, const VehicleState & vehicle)
{
  auto rel = tryPathRelative(position, vehicle);
  if (!rel) {
    throw BehindVehicle("detection is not ahead of the vehicle along its path");
  }
  return *rel;
}

double effectiveRange(const PathRelativePosition & rel, const ProximityParams & params)
{
  if (params.range_form == RangeForm::Replacement && rel.lateral > 0.0) {
    return params.lateral_scaling_factor * rel.lateral;
  }
  return rel.along + params.lateral_scaling_factor * rel.lateral;
}

double speedForRange(double range, const ProximityParams & params)
{
  if (params.speed_law == SpeedLaw::Braking) {
    return kMpsToKph * std::sqrt(2.0 * params.decel * range);
  }
  return kMpsToKph * range / params.ttc;
}

std::optional<double> proximitySpeed(
  std::span<const PedestrianDetection3D> detections, const VehicleState & vehicle,
  const ProximityParams & params)
{
  std::optional<double> nearest;
  for (const auto & det : detections) {
    const auto rel = tryPathRelative(det.position, vehicle);
    if (!rel) continue;
    const double range = effectiveRange(*rel, params);
    if (range > params.max_considered_range) continue;
    if (!nearest || range < *nearest) nearest = range;
  }
  if (!nearest) {
    return std::nullopt;
  }
  return speedForRange(*nearest, params);
}

}  // namespace csc
