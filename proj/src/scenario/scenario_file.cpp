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

#include "csc/scenario_io.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <istream>
#include <numbers>
#include <ostream>
#include <set>

namespace csc
{

using json = nlohmann::ordered_json;

namespace
{

constexpr const char * kFormat = "csc-scenario";
constexpr int kVersion = 1;

json cameraToJson(const CameraModel & cam)
{
  json rot = json::array();
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) rot.push_back(cam.extrinsic.rotation(r, c));
  }
  const auto & t = cam.extrinsic.translation;
  return {
    {"fx", cam.fx},
    {"fy", cam.fy},
    {"cx", cam.cx},
    {"cy", cam.cy},
    {"width", cam.image_width},
    {"height", cam.image_height},
    {"rotation", rot},
    {"translation", {t.x(), t.y(), t.z()}}};
}

CameraModel cameraFromJson(const json & j)
{
  CameraModel cam;
  cam.fx = j.at("fx").get<double>();
  cam.fy = j.at("fy").get<double>();
  cam.cx = j.at("cx").get<double>();
  cam.cy = j.at("cy").get<double>();
  cam.image_width = j.at("width").get<int>();
  cam.image_height = j.at("height").get<int>();
  if (j.contains("rotation")) {
    const auto & rot = j.at("rotation");
    if (rot.size() != 9) throw std::invalid_argument("camera rotation needs 9 entries");
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) cam.extrinsic.rotation(r, c) = rot.at(r * 3 + c).get<double>();
    }
  }
  if (j.contains("translation")) {
    const auto & t = j.at("translation");
    if (t.size() != 3) throw std::invalid_argument("camera translation needs 3 entries");
    cam.extrinsic.translation = {t[0].get<double>(), t[1].get<double>(), t[2].get<double>()};
  }
  return cam;
}

json point3ToJson(const Point3 & p)
{
  return json::array({p.x, p.y, p.z});
}

Point3 point3FromJson(const json & j)
{
  if (!j.is_array() || j.size() != 3) throw std::invalid_argument("point needs 3 coordinates");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

json frameToJson(const SceneFrame & f)
{
  json points = json::array();
  for (const auto & p : f.points) points.push_back(point3ToJson(p));
  json bboxes = json::array();
  for (const auto & b : f.bboxes) {
    bboxes.push_back(
      {{"u_min", b.u_min},
       {"v_min", b.v_min},
       {"u_max", b.u_max},
       {"v_max", b.v_max},
       {"label", std::string(toString(b.label))},
       {"confidence", b.confidence}});
  }
  json j = {
    {"record", "frame"},
    {"t", f.timestamp},
    {"vehicle",
     {{"speed_kph", f.vehicle.speed_kph},
      {"wheel_angle", f.vehicle.wheel_angle},
      {"wheelbase", f.vehicle.wheelbase}}},
    {"road_type", std::string(toString(f.road_type))}};
  if (f.segment) j["segment"] = *f.segment;
  if (f.driver_speed_kph) j["driver_kph"] = *f.driver_speed_kph;
  j["points"] = std::move(points);
  j["bboxes"] = std::move(bboxes);
  return j;
}

SceneFrame frameFromJson(const json & j)
{
  SceneFrame f;
  f.timestamp = j.at("t").get<double>();
  const auto & v = j.at("vehicle");
  f.vehicle.speed_kph = v.at("speed_kph").get<double>();
  f.vehicle.wheel_angle = v.value("wheel_angle", 0.0);
  f.vehicle.wheelbase = v.value("wheelbase", 2.5);
  f.road_type = roadTypeFromString(j.at("road_type").get<std::string>());
  if (j.contains("segment")) f.segment = j.at("segment").get<std::string>();
  if (j.contains("driver_kph") && !j.at("driver_kph").is_null()) {
    f.driver_speed_kph = j.at("driver_kph").get<double>();
  }
  if (j.contains("points")) {
    const auto & pts = j.at("points");
    f.points.reserve(pts.size());
    for (const auto & p : pts) f.points.push_back(point3FromJson(p));
  }
  if (j.contains("bboxes")) {
    for (const auto & b : j.at("bboxes")) {
      BBox2D box;
      box.u_min = b.at("u_min").get<double>();
      box.v_min = b.at("v_min").get<double>();
      box.u_max = b.at("u_max").get<double>();
      box.v_max = b.at("v_max").get<double>();
      box.label = objectClassFromString(b.value("label", std::string("person")));
      box.confidence = b.value("confidence", 1.0);
      f.bboxes.push_back(box);
    }
  }
  return f;
}

bool finite(const Point3 & p)
{
  return std::isfinite(p.x) && std::isfinite(p.y) && std::isfinite(p.z);
}

}  // namespace

ParseError::ParseError(size_t line, const std::string & what)
: std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line)
{
}

void validateScenario(const ScenarioFile & s)
{
  try {
    s.camera.validate();
  } catch (const std::invalid_argument & e) {
    throw ValidationError(e.what());
  }
  std::set<std::string> segment_ids;
  for (const auto & seg : s.segments) {
    if (!segment_ids.insert(seg.id).second) {
      throw ValidationError("segment ids must be unique: " + seg.id);
    }
    if (!(seg.legal_kph >= 0.0)) {
      throw ValidationError("segment legal_kph must be non-negative: " + seg.id);
    }
  }
  for (size_t i = 0; i < s.frames.size(); ++i) {
    const auto & f = s.frames[i];
    const std::string where = "frame " + std::to_string(i) + ": ";
    if (!std::isfinite(f.timestamp)) throw ValidationError(where + "timestamp must be finite");
    if (i > 0 && !(f.timestamp > s.frames[i - 1].timestamp)) {
      throw ValidationError(where + "timestamps must be strictly increasing");
    }
    if (!(f.vehicle.speed_kph >= 0.0)) throw ValidationError(where + "vehicle speed must be >= 0");
    if (!(std::abs(f.vehicle.wheel_angle) < std::numbers::pi / 2)) {
      throw ValidationError(where + "wheel angle must satisfy |angle| < pi/2");
    }
    if (!(f.vehicle.wheelbase > 0.0)) throw ValidationError(where + "wheelbase must be > 0");
    if (!(std::abs(std::tan(f.vehicle.wheel_angle) / f.vehicle.wheelbase) < 1.0)) {
      throw ValidationError(where + "path curvature must satisfy |k| < 1");
    }
    if (f.driver_speed_kph && !(*f.driver_speed_kph >= 0.0)) {
      throw ValidationError(where + "driver speed must be >= 0");
    }
    if (f.segment && !segment_ids.contains(*f.segment)) {
      throw ValidationError(where + "unknown segment '" + *f.segment + "'");
    }
    for (const auto & p : f.points) {
      if (!finite(p)) throw ValidationError(where + "point coordinates must be finite");
    }
    for (const auto & b : f.bboxes) {
      if (!b.valid()) {
        throw ValidationError(where + "bbox needs u_min < u_max, v_min < v_max, confidence in [0,1]");
      }
    }
  }
  for (const auto & gt : s.ground_truth) {
    if (gt.frame >= s.frames.size()) {
      throw ValidationError("ground truth references missing frame " + std::to_string(gt.frame));
    }
    if (!finite(gt.position)) throw ValidationError("ground truth position must be finite");
  }
}

void writeScenario(std::ostream & os, const ScenarioFile & s)
{
  json header = {
    {"record", "header"}, {"format", kFormat}, {"version", kVersion},
    {"camera", cameraToJson(s.camera)}};
  if (s.seed) header["seed"] = *s.seed;
  os << header.dump() << '\n';
  for (const auto & seg : s.segments) {
    os << json{{"record", "segment"}, {"id", seg.id}, {"legal_kph", seg.legal_kph}}.dump() << '\n';
  }
  for (const auto & gt : s.ground_truth) {
    os << json{
            {"record", "truth"},
            {"frame", gt.frame},
            {"pedestrian", gt.pedestrian},
            {"position", point3ToJson(gt.position)},
            {"in_view", gt.in_view}}
            .dump()
       << '\n';
  }
  for (const auto & f : s.frames) {
    os << frameToJson(f).dump() << '\n';
  }
}

ScenarioFile readScenario(std::istream & is)
{
  ScenarioFile s;
  std::string line;
  size_t line_no = 0;
  bool have_header = false;
  bool in_frames = false;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error & e) {
      throw ParseError(line_no, e.what());
    }
    try {
      const auto record = j.at("record").get<std::string>();
      if (record == "header") {
        if (have_header) throw ValidationError("header must appear exactly once");
        if (j.value("format", std::string{}) != kFormat) {
          throw ParseError(line_no, "not a csc-scenario file");
        }
        if (j.value("version", 0) != kVersion) {
          throw ParseError(line_no, "unsupported scenario version");
        }
        s.camera = cameraFromJson(j.at("camera"));
        if (j.contains("seed")) s.seed = j.at("seed").get<std::uint64_t>();
        have_header = true;
        continue;
      }
      if (!have_header) throw ValidationError("header must precede all other records");
      if (record == "frame") {
        in_frames = true;
        s.frames.push_back(frameFromJson(j));
      } else if (record == "segment" || record == "truth") {
        if (in_frames) throw ValidationError(record + " records must precede frame records");
        if (record == "segment") {
          s.segments.push_back({j.at("id").get<std::string>(), j.at("legal_kph").get<double>()});
        } else {
          s.ground_truth.push_back(
            {j.at("frame").get<size_t>(), j.at("pedestrian").get<int>(),
             point3FromJson(j.at("position")), j.value("in_view", false)});
        }
      } else {
        throw ParseError(line_no, "unknown record type '" + record + "'");
      }
    } catch (const json::exception & e) {
      throw ParseError(line_no, e.what());
    } catch (const std::invalid_argument & e) {
      throw ParseError(line_no, e.what());
    }
  }
  if (!have_header) throw ValidationError("scenario has no header record");
  validateScenario(s);
  return s;
}

void saveScenario(const std::filesystem::path & path, const ScenarioFile & scenario)
{
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write scenario: " + path.string());
  writeScenario(out, scenario);
}

ScenarioFile loadScenario(const std::filesystem::path & path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open scenario: " + path.string());
  return readScenario(in);
}

std::vector<ProfileSample> profileSamples(const ScenarioFile & scenario)
{
  std::vector<ProfileSample> samples;
  for (const auto & f : scenario.frames) {
    if (!f.driver_speed_kph) continue;
    samples.push_back({*f.driver_speed_kph, countPersons(f.bboxes), f.road_type});
  }
  return samples;
}

ControllerConfig configFor(const ScenarioFile & scenario, ControllerConfig base)
{
  base.camera = scenario.camera;
  base.segments.clear();
  for (const auto & seg : scenario.segments) base.segments[seg.id] = seg;
  return base;
}

}  // namespace csc
