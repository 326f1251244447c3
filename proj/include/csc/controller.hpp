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

#ifndef CSC__CONTROLLER_HPP_
#define CSC__CONTROLLER_HPP_

#include "csc/context_layer.hpp"
#include "csc/core.hpp"
#include "csc/fusion.hpp"
#include "csc/proximity_layer.hpp"

#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace csc
{

constexpr double kDefaultLegalKph = 40.0;

struct RoadSegment
{
  std::string id;
  double legal_kph{kDefaultLegalKph};

  friend bool operator==(const RoadSegment &, const RoadSegment &) = default;
};

/// Configured limit, or the 40 KPH default without a segment.
double legalSpeed(const std::optional<RoadSegment> & segment);

struct LayerSpeeds
{
  double legal{kDefaultLegalKph};
  double context{0.0};
  std::optional<double> proximity;

  friend bool operator==(const LayerSpeeds &, const LayerSpeeds &) = default;
};

/// min(legal, context, proximity if present).
double composeSpeed(const LayerSpeeds & layers);

struct SpeedDecision
{
  double timestamp{0.0};
  LayerSpeeds layers;
  double final_kph{0.0};
  size_t n_2d{0};
  size_t n_3d{0};
  std::optional<double> driver_kph;

  friend bool operator==(const SpeedDecision &, const SpeedDecision &) = default;
};

struct ControllerConfig
{
  CameraModel camera;
  SpeedProfile profile{SpeedProfile::defaultProfile()};
  RangeHeightModel range_model;
  FusionParams fusion;
  ProximityParams proximity;
  std::map<std::string, RoadSegment> segments;
  bool proximity_enabled{true};

  std::optional<RoadSegment> segmentFor(const SceneFrame & frame) const;
};

/// fusion -> context (person bbox count) -> proximity (3D detections) -> min.
SpeedDecision processFrame(const SceneFrame & frame, const ControllerConfig & config);

/// Decisions in frame order.
std::vector<SpeedDecision> replay(
  std::span<const SceneFrame> frames, const ControllerConfig & config);

/// Header: t,legal_kph,context_kph,proximity_kph,final_kph,n_2d,n_3d,driver_kph.
/// Absent values are empty fields; numbers use shortest round-trip text.
void writeDecisionsCsv(std::ostream & os, std::span<const SpeedDecision> decisions);
std::vector<SpeedDecision> readDecisionsCsv(std::istream & is);

}  // namespace csc

#endif  // CSC__CONTROLLER_HPP_
