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

#ifndef CSC_TESTS__FIXTURES_HPP_
#define CSC_TESTS__FIXTURES_HPP_

#include "csc/core.hpp"
#include "csc/fusion.hpp"
#include "csc/scenario_io.hpp"

#include <filesystem>
#include <random>
#include <string>
#include <vector>

namespace csc::test
{

inline CameraModel identityCamera()
{
  CameraModel cam;
  cam.fx = 100.0;
  cam.fy = 100.0;
  cam.cx = 50.0;
  cam.cy = 50.0;
  cam.image_width = 100;
  cam.image_height = 100;
  return cam;
}

inline BBox2D box(double u0, double v0, double u1, double v1)
{
  BBox2D b;
  b.u_min = u0;
  b.v_min = v0;
  b.u_max = u1;
  b.v_max = v1;
  return b;
}

/// Cluster with hand-placed UVs: `inside` points at (u_in, v_in), the rest far
/// outside any test bbox.
inline Cluster syntheticCluster(
  int id, size_t total, size_t inside, double range, PointUV in_uv = {50.0, 50.0},
  size_t behind = 0)
{
  Cluster c;
  c.id = id;
  for (size_t i = 0; i < total; ++i) {
    c.points.push_back({range, static_cast<double>(i) * 0.01, 0.0});
    c.indices.push_back(i);
    if (i < behind) {
      c.projected.push_back(std::nullopt);
    } else if (i < behind + inside) {
      c.projected.push_back(in_uv);
    } else {
      c.projected.push_back(PointUV{-1000.0, -1000.0});
    }
  }
  c.centroid = centroid(c.points);
  c.range = range;
  return c;
}

/// Every bbox/range pair passes.
inline RangeHeightModel permissiveModel()
{
  return {0.0, 0.0, 1e9};
}

inline std::filesystem::path tempDir(const std::string & name)
{
  auto dir = std::filesystem::path(CSC_TEST_TMP) / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

/// Noiseless scene of separated pedestrians inside 15 m.
inline GenSpec cleanPedestrianSpec(std::uint64_t seed = 11)
{
  GenSpec spec;
  spec.duration = 2.0;
  spec.frame_rate = 10.0;
  spec.road_type = RoadType::Shared;
  spec.seed = seed;
  spec.speed_script = {{0.0, 12.0}, {2.0, 16.0}};
  spec.pedestrians = {
    {1, 5.0, 0.0, 0.0, 0.0, 0.0, std::nullopt, false},
    {2, 8.0, 2.5, 0.0, 0.0, 0.0, std::nullopt, false},
    {3, 11.0, -3.0, 0.0, 0.0, 0.0, std::nullopt, false},
    {4, 13.5, 1.0, 0.0, 0.0, 0.0, std::nullopt, false},
  };
  return spec;
}

}  // namespace csc::test

#endif  // CSC_TESTS__FIXTURES_HPP_
