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

#ifndef CSC__PROXIMITY_LAYER_HPP_
#define CSC__PROXIMITY_LAYER_HPP_

#include "csc/core.hpp"
#include "csc/fusion.hpp"

#include <optional>
#include <span>
#include <stdexcept>
#include <string_view>

namespace csc
{

enum class PathKind { Straight, Arc };

/// Instantaneous path implied by the current wheel angle (kinematic bicycle).
struct PathModel
{
  PathKind kind{PathKind::Straight};
  double curvature{0.0};  // 1/m, positive turning left
};

/// Throws std::invalid_argument if the vehicle state is outside
/// |wheel_angle| < pi/2, wheelbase > 0, or the curvature bound |k| < 1.
PathModel pathModel(const VehicleState & vehicle);

struct PathRelativePosition
{
  double along{0.0};
  double lateral{0.0};
};

class BehindVehicle : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

enum class SpeedLaw { Ttc, Braking };
enum class RangeForm { Additive, Replacement };

std::string_view toString(SpeedLaw law);
SpeedLaw speedLawFromString(std::string_view s);
std::string_view toString(RangeForm form);
RangeForm rangeFormFromString(std::string_view s);

struct ProximityParams
{
  double lateral_scaling_factor{3.0};
  double ttc{3.0};                    // s
  double max_considered_range{15.0};  // m
  SpeedLaw speed_law{SpeedLaw::Ttc};
  double decel{2.0};  // m/s^2, braking law only
  RangeForm range_form{RangeForm::Additive};

  void validate() const;
};

/// Foot-of-perpendicular decomposition against the current path.
/// Throws BehindVehicle when the foot is not ahead of the vehicle.
PathRelativePosition pathRelative(const Point3 & position, const VehicleState & vehicle);
std::optional<PathRelativePosition> tryPathRelative(
  const Point3 & position, const VehicleState & vehicle);

/// Additive: along + factor * lateral. Replacement: factor * lateral when
/// off-path, along when on it.
double effectiveRange(const PathRelativePosition & rel, const ProximityParams & params);

/// KPH allowed at `range` metres under the configured speed law.
double speedForRange(double range, const ProximityParams & params);

/// Absent when no detection is ahead and within max_considered_range.
std::optional<double> proximitySpeed(
  std::span<const PedestrianDetection3D> detections, const VehicleState & vehicle,
  const ProximityParams & params);

}  // namespace csc

#endif  // CSC__PROXIMITY_LAYER_HPP_
