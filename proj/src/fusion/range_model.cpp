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

#include "csc/format.hpp"
#include "csc/fusion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace csc
{

RangeHeightModel RangeHeightModel::fromCamera(
  const CameraModel & cam, double person_height, double person_width, double near, double far)
{
  constexpr int kSteps = 48;
  const double half = person_width / 2.0;
  std::vector<RangeHeightSample> samples;
  for (int ix = 0; ix <= kSteps; ++ix) {
    const double x = near + (far - near) * ix / kSteps;
    for (int iy = -kSteps; iy <= kSteps; ++iy) {
      const double y = x * iy / kSteps;
      double v_min = std::numeric_limits<double>::infinity();
      double v_max = -v_min;
      bool visible = true;
      for (double dx : {-half, half}) {
        for (double dy : {-half, half}) {
          for (double z : {0.0, person_height}) {
            const auto uv = projectPoint({x + dx, y + dy, z}, cam);
            visible = visible && uv && cam.inImage(*uv);
            if (uv) {
              v_min = std::min(v_min, uv->v);
              v_max = std::max(v_max, uv->v);
            }
          }
        }
      }
      if (!visible) continue;
      samples.push_back({norm({x, y, person_height / 2.0}), v_max - v_min});
    }
  }
  if (samples.size() < 3) {
    throw InsufficientSamples("fromCamera: no person-sized box fits in the image between near and far");
  }
  return fitRangeHeightModel(samples);
}

RangeHeightModel fitRangeHeightModel(std::span<const RangeHeightSample> samples)
{
  if (samples.size() < 3) {
    throw InsufficientSamples("fitRangeHeightModel: at least 3 samples required");
  }
  const double n = static_cast<double>(samples.size());
  double mean_x = 0.0;
  double mean_y = 0.0;
  for (const auto & s : samples) {
    if (!(s.range > 0.0)) {
      throw std::invalid_argument("fitRangeHeightModel: ranges must be positive");
    }
    mean_x += 1.0 / s.range;
    mean_y += s.bbox_height;
  }
  mean_x /= n;
  mean_y /= n;

  double sxx = 0.0;
  double sxy = 0.0;
  for (const auto & s : samples) {
    const double dx = 1.0 / s.range - mean_x;
    sxx += dx * dx;
    sxy += dx * (s.bbox_height - mean_y);
  }
  if (sxx == 0.0) {
    throw InsufficientSamples("fitRangeHeightModel: samples need at least two distinct ranges");
  }

  RangeHeightModel model;
  model.slope = sxy / sxx;
  model.intercept = mean_y - model.slope * mean_x;
  double ssr = 0.0;
  for (const auto & s : samples) {
    const double r = s.bbox_height - model.predictedHeight(s.range);
    ssr += r * r;
  }
  model.residual_std = std::sqrt(ssr / n);
  return model;
}

void writeRangeHeightModel(std::ostream & os, const RangeHeightModel & model)
{
  os << "# slope intercept residual_std\n"
     << formatNumber(model.slope) << ' ' << formatNumber(model.intercept) << ' '
     << formatNumber(model.residual_std) << '\n';
}

RangeHeightModel readRangeHeightModel(std::istream & is)
{
  std::string line;
  while (std::getline(is, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string a;
    std::string b;
    std::string c;
    if (!(fields >> a)) continue;
    std::string extra;
    if (!(fields >> b >> c) || (fields >> extra)) {
      throw std::invalid_argument("range model: expected 'slope intercept residual_std'");
    }
    RangeHeightModel model{parseNumber(a), parseNumber(b), parseNumber(c)};
    if (!(model.residual_std >= 0.0)) {
      throw std::invalid_argument("range model: residual_std must be non-negative");
    }
    return model;
  }
  throw std::invalid_argument("range model: no record found");
}

RangeHeightModel loadRangeHeightModel(const std::string & path)
{
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open range model: " + path);
  }
  return readRangeHeightModel(in);
}

}  // namespace csc
