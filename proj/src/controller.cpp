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

#include "csc/controller.hpp"

#include "csc/format.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace csc
{

double legalSpeed(const std::optional<RoadSegment> & segment)
{
  return segment ? segment->legal_kph : kDefaultLegalKph;
}

double composeSpeed(const LayerSpeeds & layers)
{
  double speed = std::min(layers.legal, layers.context);
  if (layers.proximity) {
    speed = std::min(speed, *layers.proximity);
  }
  return speed;
}

std::optional<RoadSegment> ControllerConfig::segmentFor(const SceneFrame & frame) const
{
  if (!frame.segment) return std::nullopt;
  const auto it = segments.find(*frame.segment);
  if (it == segments.end()) return std::nullopt;
  return it->second;
}

SpeedDecision processFrame(const SceneFrame & frame, const ControllerConfig & config)
{
  SpeedDecision d;
  d.timestamp = frame.timestamp;
  d.driver_kph = frame.driver_speed_kph;
  d.n_2d = countPersons(frame.bboxes);

  d.layers.legal = legalSpeed(config.segmentFor(frame));
  d.layers.context = contextSpeed(config.profile, frame.road_type, d.n_2d);

  const auto detections =
    detectPedestrians3D(frame, config.camera, config.range_model, config.fusion);
  d.n_3d = detections.size();
  if (config.proximity_enabled) {
    d.layers.proximity = proximitySpeed(detections, frame.vehicle, config.proximity);
  }
  d.final_kph = composeSpeed(d.layers);
  return d;
}

std::vector<SpeedDecision> replay(
  std::span<const SceneFrame> frames, const ControllerConfig & config)
{
  std::vector<SpeedDecision> out;
  out.reserve(frames.size());
  for (const auto & frame : frames) {
    out.push_back(processFrame(frame, config));
  }
  return out;
}

void writeDecisionsCsv(std::ostream & os, std::span<const SpeedDecision> decisions)
{
  os << "t,legal_kph,context_kph,proximity_kph,final_kph,n_2d,n_3d,driver_kph\n";
  for (const auto & d : decisions) {
    os << formatNumber(d.timestamp) << ',' << formatNumber(d.layers.legal) << ','
       << formatNumber(d.layers.context) << ',' << formatOptional(d.layers.proximity) << ','
       << formatNumber(d.final_kph) << ',' << d.n_2d << ',' << d.n_3d << ','
       << formatOptional(d.driver_kph) << '\n';
  }
}

std::vector<SpeedDecision> readDecisionsCsv(std::istream & is)
{
  std::vector<SpeedDecision> out;
  std::string line;
  size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.rfind("t,", 0) == 0) continue;
    std::vector<std::string> f;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) f.push_back(field);
    if (line.back() == ',') f.emplace_back();
    try {
      if (f.size() != 8) throw std::invalid_argument("expected 8 fields");
      SpeedDecision d;
      d.timestamp = parseNumber(f[0]);
      d.layers.legal = parseNumber(f[1]);
      d.layers.context = parseNumber(f[2]);
      if (!f[3].empty()) d.layers.proximity = parseNumber(f[3]);
      d.final_kph = parseNumber(f[4]);
      d.n_2d = static_cast<size_t>(std::stoul(f[5]));
      d.n_3d = static_cast<size_t>(std::stoul(f[6]));
      if (!f[7].empty()) d.driver_kph = parseNumber(f[7]);
      out.push_back(d);
    } catch (const std::exception & e) {
      throw std::invalid_argument(
        "decisions line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace csc
