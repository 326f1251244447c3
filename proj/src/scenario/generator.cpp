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

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <numbers>
#include <random>
#include <set>

namespace csc
{
namespace
{

using json = nlohmann::json;

constexpr double kColumnRadius = 0.2;
constexpr size_t kColumnPointsMin = 20;
constexpr size_t kColumnPointsMax = 60;
constexpr double kPoleRadius = 0.1;
constexpr size_t kPolePoints = 40;
constexpr int kCrowdIdBase = 1000;

double interpolate(const std::vector<std::pair<double, double>> & script, double t)
{
  if (script.empty()) return 0.0;
  if (t <= script.front().first) return script.front().second;
  if (t >= script.back().first) return script.back().second;
  const auto it = std::upper_bound(
    script.begin(), script.end(), t, [](double v, const auto & kv) { return v < kv.first; });
  const auto & [t1, v1] = *it;
  const auto & [t0, v0] = *std::prev(it);
  return v0 + (v1 - v0) * (t - t0) / (t1 - t0);
}

struct Pose
{
  double x{0.0};
  double y{0.0};
  double heading{0.0};

  Point3 toBody(double wx, double wy, double wz) const
  {
    const double dx = wx - x;
    const double dy = wy - y;
    const double c = std::cos(heading);
    const double s = std::sin(heading);
    return {c * dx + s * dy, -s * dx + c * dy, wz};
  }
};

struct Placed
{
  int id;
  double x;
  double y;
};

class FrameBuilder
{
public:
  FrameBuilder(const GenSpec & spec, std::mt19937_64 & rng) : spec_(spec), rng_(rng) {}

  void addPedestrian(SceneFrame & frame, std::vector<GroundTruth> & truth, size_t frame_index,
                     const Placed & p)
  {
    const double ground_range = std::hypot(p.x, p.y);
    if (ground_range <= spec_.lidar_range) {
      std::uniform_int_distribution<size_t> count_dist(kColumnPointsMin, kColumnPointsMax);
      const size_t n = count_dist(rng_);
      for (size_t i = 0; i < n; ++i) {
        // stratified heights
        const double z = (static_cast<double>(i) + unit_(rng_)) / static_cast<double>(n) *
                         kBodyHeight;
        const double r = kColumnRadius * std::sqrt(unit_(rng_));
        const double a = 2.0 * std::numbers::pi * unit_(rng_);
        frame.points.push_back(jitter({p.x + r * std::cos(a), p.y + r * std::sin(a), z}));
      }
    }

    bool in_view = false;
    if (const auto env = projectBodyEnvelope(p.x, p.y, spec_.camera)) {
      const auto & cam = spec_.camera;
      in_view = env->u_min >= 0.0 && env->v_min >= 0.0 && env->u_max <= cam.image_width &&
                env->v_max <= cam.image_height;
      BBox2D box = *env;
      if (spec_.bbox_sigma > 0.0) {
        std::normal_distribution<double> noise(0.0, spec_.bbox_sigma);
        box.u_min += noise(rng_);
        box.v_min += noise(rng_);
        box.u_max += noise(rng_);
        box.v_max += noise(rng_);
      }
      box.u_min = std::max(box.u_min, 0.0);
      box.v_min = std::max(box.v_min, 0.0);
      box.u_max = std::min(box.u_max, static_cast<double>(cam.image_width));
      box.v_max = std::min(box.v_max, static_cast<double>(cam.image_height));
      if (box.valid()) {
        frame.bboxes.push_back(box);
      }
    }
    truth.push_back({frame_index, p.id, {p.x, p.y, kBodyHeight / 2.0}, in_view});
  }

  void addPole(SceneFrame & frame, const PoleSpec & pole)
  {
    if (std::hypot(pole.x, pole.y) > spec_.lidar_range) return;
    for (size_t i = 0; i < kPolePoints; ++i) {
      const double z = (static_cast<double>(i) + unit_(rng_)) / kPolePoints * pole.height;
      const double a = 2.0 * std::numbers::pi * unit_(rng_);
      frame.points.push_back(
        jitter({pole.x + kPoleRadius * std::cos(a), pole.y + kPoleRadius * std::sin(a), z}));
    }
  }

  void addClutter(SceneFrame & frame)
  {
    std::uniform_real_distribution<double> xs(-spec_.lidar_range, spec_.lidar_range);
    std::uniform_real_distribution<double> zs(0.0, 3.0);
    for (size_t i = 0; i < spec_.clutter_points; ++i) {
      const double x = xs(rng_);
      const double y = xs(rng_);
      frame.points.push_back({x, y, zs(rng_)});
    }
  }

  std::vector<Placed> placeCrowd(const std::vector<Placed> & occupied)
  {
    const auto & c = spec_.crowd;
    std::vector<Placed> crowd;
    if (c.count_max == 0) return crowd;
    std::uniform_int_distribution<size_t> count_dist(c.count_min, c.count_max);
    std::uniform_real_distribution<double> xs(c.x_min, c.x_max);
    std::uniform_real_distribution<double> ys(c.y_min, c.y_max);
    const size_t n = count_dist(rng_);
    auto clear_of = [&](double x, double y, const std::vector<Placed> & others) {
      return std::all_of(others.begin(), others.end(), [&](const Placed & o) {
        return std::hypot(o.x - x, o.y - y) >= c.min_separation;
      });
    };
    for (size_t j = 0; j < n; ++j) {
      for (int attempt = 0; attempt < 100; ++attempt) {
        const double x = xs(rng_);
        const double y = ys(rng_);
        if (clear_of(x, y, occupied) && clear_of(x, y, crowd)) {
          // crowd members are redrawn every frame; ids are only unique within one
          crowd.push_back({kCrowdIdBase + static_cast<int>(j), x, y});
          break;
        }
      }
    }
    return crowd;
  }

private:
  Point3 jitter(Point3 p)
  {
    if (spec_.point_sigma > 0.0) {
      std::normal_distribution<double> noise(0.0, spec_.point_sigma);
      p.x += noise(rng_);
      p.y += noise(rng_);
      p.z += noise(rng_);
    }
    return p;
  }

  const GenSpec & spec_;
  std::mt19937_64 & rng_;
  std::uniform_real_distribution<double> unit_{0.0, 1.0};
};

template <typename T>
T take(const json & j, const char * key, T fallback)
{
  return j.contains(key) ? j.at(key).get<T>() : fallback;
}

std::vector<std::pair<double, double>> scriptFromJson(const json & j)
{
  std::vector<std::pair<double, double>> script;
  for (const auto & kv : j) {
    if (!kv.is_array() || kv.size() != 2) {
      throw std::invalid_argument("script entries must be [t, value] pairs");
    }
    script.emplace_back(kv[0].get<double>(), kv[1].get<double>());
  }
  return script;
}

void rejectUnknown(const json & j, const std::set<std::string> & known, const std::string & where)
{
  if (!j.is_object()) throw std::invalid_argument(where + ": expected an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!known.contains(it.key())) {
      throw std::invalid_argument(where + ": unknown key '" + it.key() + "'");
    }
  }
}

}  // namespace

std::optional<BBox2D> projectBodyEnvelope(double x, double y, const CameraModel & cam)
{
  BBox2D box;
  box.u_min = box.v_min = std::numeric_limits<double>::infinity();
  box.u_max = box.v_max = -std::numeric_limits<double>::infinity();
  const double h = kBodyWidth / 2.0;
  for (double dx : {-h, h}) {
    for (double dy : {-h, h}) {
      for (double z : {0.0, kBodyHeight}) {
        const auto uv = projectPoint({x + dx, y + dy, z}, cam);
        if (!uv) return std::nullopt;
        box.u_min = std::min(box.u_min, uv->u);
        box.v_min = std::min(box.v_min, uv->v);
        box.u_max = std::max(box.u_max, uv->u);
        box.v_max = std::max(box.v_max, uv->v);
      }
    }
  }
  box.label = ObjectClass::Person;
  box.confidence = 1.0;
  return box;
}

void GenSpec::validate() const
{
  if (!(duration > 0.0)) throw std::invalid_argument("gen spec: duration must be positive");
  if (!(frame_rate > 0.0)) throw std::invalid_argument("gen spec: frame_rate must be positive");
  if (!(wheelbase > 0.0)) throw std::invalid_argument("gen spec: wheelbase must be positive");
  if (!(lidar_range > 0.0)) throw std::invalid_argument("gen spec: lidar_range must be positive");
  if (point_sigma < 0.0 || bbox_sigma < 0.0) {
    throw std::invalid_argument("gen spec: noise sigmas must be non-negative");
  }
  if (crowd.count_min > crowd.count_max) {
    throw std::invalid_argument("gen spec: crowd count_min exceeds count_max");
  }
  if (!(crowd.x_min <= crowd.x_max) || !(crowd.y_min <= crowd.y_max)) {
    throw std::invalid_argument("gen spec: crowd ranges must be ordered");
  }
  for (const auto * script : {&speed_script, &wheel_angle_script}) {
    for (size_t i = 1; i < script->size(); ++i) {
      if (!((*script)[i].first > (*script)[i - 1].first)) {
        throw std::invalid_argument("gen spec: script times must be strictly increasing");
      }
    }
  }
  for (const auto & [t, v] : speed_script) {
    if (!(v >= 0.0)) throw std::invalid_argument("gen spec: speeds must be non-negative");
  }
  camera.validate();
}

namespace
{

GenSpec genSpecFromJson(const json & j)
{
  rejectUnknown(
    j,
    {"duration", "frame_rate", "road_type", "segment", "legal_kph", "seed", "camera", "wheelbase",
     "speed_script", "wheel_angle_script", "pedestrians", "crowd", "poles", "clutter_points",
     "lidar_range", "noise"},
    "gen spec");
  GenSpec spec;
  spec.duration = take(j, "duration", spec.duration);
  spec.frame_rate = take(j, "frame_rate", spec.frame_rate);
  if (j.contains("road_type")) spec.road_type = roadTypeFromString(j.at("road_type").get<std::string>());
  spec.segment = take(j, "segment", spec.segment);
  spec.legal_kph = take(j, "legal_kph", spec.legal_kph);
  spec.seed = take(j, "seed", spec.seed);
  if (j.contains("camera")) {
    const auto & c = j.at("camera");
    rejectUnknown(c, {"fx", "fy", "width", "height", "mount_height"}, "gen spec camera");
    spec.camera = CameraModel::forwardFacing(
      take(c, "fx", 800.0), take(c, "fy", 800.0), take(c, "width", 1280), take(c, "height", 720),
      take(c, "mount_height", 1.2));
  }
  spec.wheelbase = take(j, "wheelbase", spec.wheelbase);
  if (j.contains("speed_script")) spec.speed_script = scriptFromJson(j.at("speed_script"));
  if (j.contains("wheel_angle_script")) {
    spec.wheel_angle_script = scriptFromJson(j.at("wheel_angle_script"));
  }
  if (j.contains("pedestrians")) {
    for (const auto & p : j.at("pedestrians")) {
      rejectUnknown(p, {"id", "x", "y", "vx", "vy", "t_start", "t_end", "frame"}, "pedestrian");
      ScriptedPedestrian ped;
      ped.id = take(p, "id", static_cast<int>(spec.pedestrians.size()) + 1);
      ped.x = p.at("x").get<double>();
      ped.y = p.at("y").get<double>();
      ped.vx = take(p, "vx", 0.0);
      ped.vy = take(p, "vy", 0.0);
      ped.t_start = take(p, "t_start", 0.0);
      if (p.contains("t_end")) ped.t_end = p.at("t_end").get<double>();
      const auto frame = take(p, "frame", std::string("body"));
      if (frame != "body" && frame != "world") {
        throw std::invalid_argument("pedestrian frame must be 'body' or 'world'");
      }
      ped.world = frame == "world";
      spec.pedestrians.push_back(ped);
    }
  }
  if (j.contains("crowd")) {
    const auto & c = j.at("crowd");
    rejectUnknown(
      c, {"count_min", "count_max", "x_range", "y_range", "min_separation"}, "gen spec crowd");
    spec.crowd.count_min = take(c, "count_min", spec.crowd.count_min);
    spec.crowd.count_max = take(c, "count_max", spec.crowd.count_max);
    if (c.contains("x_range")) {
      spec.crowd.x_min = c.at("x_range").at(0).get<double>();
      spec.crowd.x_max = c.at("x_range").at(1).get<double>();
    }
    if (c.contains("y_range")) {
      spec.crowd.y_min = c.at("y_range").at(0).get<double>();
      spec.crowd.y_max = c.at("y_range").at(1).get<double>();
    }
    spec.crowd.min_separation = take(c, "min_separation", spec.crowd.min_separation);
  }
  if (j.contains("poles")) {
    for (const auto & p : j.at("poles")) {
      spec.poles.push_back({p.at("x").get<double>(), p.at("y").get<double>(), take(p, "height", 3.0)});
    }
  }
  spec.clutter_points = take(j, "clutter_points", spec.clutter_points);
  spec.lidar_range = take(j, "lidar_range", spec.lidar_range);
  if (j.contains("noise")) {
    const auto & n = j.at("noise");
    rejectUnknown(n, {"point_sigma", "bbox_sigma"}, "gen spec noise");
    spec.point_sigma = take(n, "point_sigma", 0.0);
    spec.bbox_sigma = take(n, "bbox_sigma", 0.0);
  }
  spec.validate();
  return spec;
}

}  // namespace

GenSpec readGenSpec(std::istream & is)
{
  try {
    return genSpecFromJson(json::parse(is));
  } catch (const json::exception & e) {
    throw std::invalid_argument(std::string("gen spec: ") + e.what());
  }
}

GenSpec loadGenSpec(const std::filesystem::path & path)
{
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open gen spec: " + path.string());
  return readGenSpec(in);
}

ScenarioFile generateScenario(const GenSpec & spec)
{
  spec.validate();
  std::mt19937_64 rng(spec.seed);
  FrameBuilder builder(spec, rng);

  ScenarioFile out;
  out.camera = spec.camera;
  out.seed = spec.seed;
  out.segments.push_back({spec.segment, spec.legal_kph});

  const auto n_frames = static_cast<size_t>(std::floor(spec.duration * spec.frame_rate + 1e-9));
  const double dt = 1.0 / spec.frame_rate;
  Pose pose;
  for (size_t k = 0; k < n_frames; ++k) {
    const double t = static_cast<double>(k) / spec.frame_rate;
    SceneFrame frame;
    frame.timestamp = t;
    frame.road_type = spec.road_type;
    frame.segment = spec.segment;
    frame.vehicle.speed_kph = interpolate(spec.speed_script, t);
    frame.vehicle.wheel_angle = interpolate(spec.wheel_angle_script, t);
    frame.vehicle.wheelbase = spec.wheelbase;
    frame.driver_speed_kph = frame.vehicle.speed_kph;

    std::vector<Placed> placed;
    for (const auto & ped : spec.pedestrians) {
      if (t < ped.t_start || (ped.t_end && t > *ped.t_end)) continue;
      const double px = ped.x + ped.vx * t;
      const double py = ped.y + ped.vy * t;
      if (ped.world) {
        const Point3 b = pose.toBody(px, py, 0.0);
        placed.push_back({ped.id, b.x, b.y});
      } else {
        placed.push_back({ped.id, px, py});
      }
    }
    std::vector<Placed> occupied = placed;
    for (const auto & pole : spec.poles) occupied.push_back({0, pole.x, pole.y});
    const auto crowd = builder.placeCrowd(occupied);
    placed.insert(placed.end(), crowd.begin(), crowd.end());

    for (const auto & p : placed) builder.addPedestrian(frame, out.ground_truth, k, p);
    for (const auto & pole : spec.poles) builder.addPole(frame, pole);
    builder.addClutter(frame);
    out.frames.push_back(std::move(frame));

    // kinematic bicycle step to the next frame
    const double v = out.frames.back().vehicle.speed_kph / 3.6;
    const double yaw_rate = v * std::tan(out.frames.back().vehicle.wheel_angle) / spec.wheelbase;
    pose.x += v * std::cos(pose.heading) * dt;
    pose.y += v * std::sin(pose.heading) * dt;
    pose.heading += yaw_rate * dt;
  }
  return out;
}

}  // namespace csc
