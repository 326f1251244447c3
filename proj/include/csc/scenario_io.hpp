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

#ifndef CSC__SCENARIO_IO_HPP_
#define CSC__SCENARIO_IO_HPP_

#include "csc/context_layer.hpp"
#include "csc/controller.hpp"
#include "csc/core.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace csc
{

/// Scenario text did not parse; carries the 1-based line number.
class ParseError : public std::runtime_error
{
public:
  ParseError(size_t line, const std::string & what);
  size_t line() const { return line_; }

private:
  size_t line_;
};

/// Scenario parsed but broke an invariant; the message names it.
class ValidationError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

class MismatchedStreams : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

struct GroundTruth
{
  size_t frame{0};
  int pedestrian{0};
  Point3 position;  // body frame, centre of the body envelope
  bool in_view{false};  // whole envelope projects inside the image

  friend bool operator==(const GroundTruth &, const GroundTruth &) = default;
};

struct ScenarioFile
{
  CameraModel camera;
  std::vector<RoadSegment> segments;
  std::optional<std::uint64_t> seed;
  std::vector<GroundTruth> ground_truth;
  std::vector<SceneFrame> frames;

  friend bool operator==(const ScenarioFile &, const ScenarioFile &) = default;
};

/// Throws ValidationError naming the first broken invariant.
void validateScenario(const ScenarioFile & scenario);

/// Line-delimited JSON: one header record, then segment and truth records,
/// then one frame record per line.
void writeScenario(std::ostream & os, const ScenarioFile & scenario);
ScenarioFile readScenario(std::istream & is);
void saveScenario(const std::filesystem::path & path, const ScenarioFile & scenario);
ScenarioFile loadScenario(const std::filesystem::path & path);

/// One synthetic person. Coordinates in the body frame of the first frame
/// when `world` is set, otherwise fixed relative to the vehicle.
struct ScriptedPedestrian
{
  int id{0};
  double x{0.0};
  double y{0.0};
  double vx{0.0};
  double vy{0.0};
  double t_start{0.0};
  std::optional<double> t_end;
  bool world{false};
};

/// Per-frame independent random placements in the vehicle frame.
struct CrowdSpec
{
  size_t count_min{0};
  size_t count_max{0};
  double x_min{3.0};
  double x_max{14.0};
  double y_min{-4.0};
  double y_max{4.0};
  double min_separation{1.0};
};

struct PoleSpec
{
  double x{0.0};
  double y{0.0};
  double height{3.0};
};

struct GenSpec
{
  double duration{10.0};
  double frame_rate{10.0};
  RoadType road_type{RoadType::Shared};
  std::string segment{"main"};
  double legal_kph{kDefaultLegalKph};
  std::uint64_t seed{1};
  CameraModel camera{CameraModel::forwardFacing(800.0, 800.0, 1280, 720, 1.2)};
  double wheelbase{2.5};
  std::vector<std::pair<double, double>> speed_script{{0.0, 15.0}};  // (t, kph), linear
  std::vector<std::pair<double, double>> wheel_angle_script{{0.0, 0.0}};  // (t, rad)
  std::vector<ScriptedPedestrian> pedestrians;
  CrowdSpec crowd;
  std::vector<PoleSpec> poles;
  size_t clutter_points{0};
  double lidar_range{20.0};  // pedestrians beyond this produce a bbox but no points
  double point_sigma{0.0};
  double bbox_sigma{0.0};

  /// Throws std::invalid_argument on non-positive rates or durations.
  void validate() const;
};

/// JSON document; unknown keys are rejected.
GenSpec readGenSpec(std::istream & is);
GenSpec loadGenSpec(const std::filesystem::path & path);

/// Pure function of the spec (seed included).
ScenarioFile generateScenario(const GenSpec & spec);

/// Synthetic person geometry shared by the generator and tests.
constexpr double kBodyWidth = 0.5;
constexpr double kBodyHeight = 1.7;

/// Projection of the body envelope at ground position (x, y); absent if any
/// corner is behind the camera.
std::optional<BBox2D> projectBodyEnvelope(double x, double y, const CameraModel & cam);

/// Profile samples from frames carrying a driver speed.
std::vector<ProfileSample> profileSamples(const ScenarioFile & scenario);

/// Config carrying the scenario's camera and road segments.
ControllerConfig configFor(const ScenarioFile & scenario, ControllerConfig base = {});

struct LayerActivation
{
  double legal{0.0};
  double context{0.0};
  double proximity{0.0};
};

struct EvalReport
{
  std::vector<SpeedDecision> decisions;
  std::map<int, size_t> histogram;  // 1 KPH bins of (final - driver), bin k = [k-0.5, k+0.5)
  size_t frames_with_driver{0};
  double mean_difference{0.0};
  double median_difference{0.0};
  double fraction_conservative{0.0};  // final < driver
  LayerActivation activation;
};

/// Throws MismatchedStreams when frame counts or timestamps disagree.
EvalReport evaluate(std::span<const SpeedDecision> decisions, const ScenarioFile & scenario);

/// histogram.csv, summary.csv, trace.csv and plot.gp under `dir`.
void writeReport(const std::filesystem::path & dir, const EvalReport & report);

struct SweepPoint
{
  double scaling_factor{0.0};
  EvalReport report;
};

std::vector<SweepPoint> scalingSweep(
  const ScenarioFile & scenario, const ControllerConfig & config, std::span<const double> factors);

void writeSweep(const std::filesystem::path & dir, std::span<const SweepPoint> sweep);

}  // namespace csc

#endif  // CSC__SCENARIO_IO_HPP_
