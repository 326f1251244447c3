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

#include "csc/context_layer.hpp"

#include "csc/format.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

namespace csc
{

RoadContext roadContext(RoadType road)
{
  return road == RoadType::Regular ? RoadContext::Regular : RoadContext::Shared;
}

std::string_view toString(RoadContext c)
{
  return c == RoadContext::Shared ? "Shared" : "Regular";
}

RoadContext roadContextFromString(std::string_view s)
{
  if (s == "Shared") return RoadContext::Shared;
  if (s == "Regular") return RoadContext::Regular;
  throw std::invalid_argument("unknown road context: " + std::string(s));
}

DensityBin densityBinAt(size_t index)
{
  if (index >= kDensityBinCount) {
    throw std::out_of_range("density bin index out of range");
  }
  DensityBin bin{index, index * kDensityBinWidth, std::nullopt};
  if (index + 1 < kDensityBinCount) {
    bin.upper = bin.lower + kDensityBinWidth - 1;
  }
  return bin;
}

DensityBin densityBin(size_t pedestrian_count)
{
  return densityBinAt(std::min(pedestrian_count / kDensityBinWidth, kDensityBinCount - 1));
}

int discretiseSpeed(double speed_kph)
{
  return static_cast<int>(std::floor(speed_kph / kSpeedBinWidthKph));
}

SpeedProfile SpeedProfile::defaultProfile()
{
  SpeedProfile p;
  constexpr std::array<double, kDensityBinCount> shared{14.7, 13.0, 11.1, 8.5};
  constexpr std::array<double, kDensityBinCount> regular{20.0, 19.7, 18.2, 18.8};
  for (size_t b = 0; b < kDensityBinCount; ++b) {
    p.setCell(RoadContext::Shared, b, shared[b], 0);
    p.setCell(RoadContext::Regular, b, regular[b], 0);
  }
  return p;
}

const SpeedProfile::Cell & SpeedProfile::cell(RoadContext ctx, size_t bin) const
{
  return cells_.at(static_cast<size_t>(ctx)).at(bin);
}

SpeedProfile::Cell & SpeedProfile::cell(RoadContext ctx, size_t bin)
{
  return cells_.at(static_cast<size_t>(ctx)).at(bin);
}

std::optional<double> SpeedProfile::mean(RoadContext ctx, size_t bin) const
{
  return cell(ctx, bin).mean;
}

size_t SpeedProfile::sampleCount(RoadContext ctx, size_t bin) const
{
  return cell(ctx, bin).count;
}

const SpeedProfile::Tally & SpeedProfile::speedTally(RoadContext ctx, size_t bin) const
{
  return cell(ctx, bin).tally;
}

void SpeedProfile::setCell(RoadContext ctx, size_t bin, std::optional<double> mean, size_t count)
{
  if (mean && !(*mean >= 0.0)) {
    throw std::invalid_argument("speed profile means must be non-negative");
  }
  auto & c = cell(ctx, bin);
  c.mean = mean;
  c.count = count;
}

void SpeedProfile::setTally(RoadContext ctx, size_t bin, Tally tally)
{
  cell(ctx, bin).tally = std::move(tally);
}

SpeedProfile buildSpeedProfile(std::span<const ProfileSample> samples)
{
  std::array<std::array<std::vector<double>, kDensityBinCount>, kRoadContextCount> groups;
  for (const auto & s : samples) {
    if (!(s.speed_kph >= 0.0)) {
      throw std::invalid_argument("profile sample speed must be non-negative");
    }
    groups[static_cast<size_t>(roadContext(s.road_type))][densityBin(s.pedestrian_count).index]
      .push_back(s.speed_kph);
  }

  SpeedProfile profile;
  for (size_t c = 0; c < kRoadContextCount; ++c) {
    for (size_t b = 0; b < kDensityBinCount; ++b) {
      auto & speeds = groups[c][b];
      const auto ctx = static_cast<RoadContext>(c);
      if (speeds.empty()) {
        profile.setCell(ctx, b, std::nullopt, 0);
        continue;
      }
      std::sort(speeds.begin(), speeds.end());
      double sum = 0.0;
      SpeedProfile::Tally tally;
      for (double v : speeds) {
        sum += v;
        ++tally[discretiseSpeed(v)];
      }
      profile.setCell(ctx, b, sum / static_cast<double>(speeds.size()), speeds.size());
      profile.setTally(ctx, b, std::move(tally));
    }
  }
  return profile;
}

double contextSpeed(const SpeedProfile & profile, RoadType road, size_t pedestrian_count)
{
  const auto ctx = roadContext(road);
  const auto bin = densityBin(pedestrian_count);
  const auto mean = profile.mean(ctx, bin.index);
  if (!mean) {
    throw MissingBin(
      "speed profile has no mean for context " + std::string(toString(ctx)) + ", bin " +
      std::to_string(bin.index));
  }
  return *mean;
}

void writeSpeedProfile(std::ostream & os, const SpeedProfile & profile)
{
  os << "context,bin_lower,bin_upper,mean_kph,sample_count\n";
  for (size_t c = 0; c < kRoadContextCount; ++c) {
    const auto ctx = static_cast<RoadContext>(c);
    for (size_t b = 0; b < kDensityBinCount; ++b) {
      const auto bin = densityBinAt(b);
      os << toString(ctx) << ',' << bin.lower << ','
         << (bin.upper ? std::to_string(*bin.upper) : std::string{}) << ','
         << formatOptional(profile.mean(ctx, b)) << ',' << profile.sampleCount(ctx, b) << '\n';
    }
  }
}

namespace
{

std::vector<std::string> splitCsv(const std::string & line)
{
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

}  // namespace

SpeedProfile readSpeedProfile(std::istream & is)
{
  SpeedProfile profile;
  std::string line;
  size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#' || line.rfind("context,", 0) == 0) continue;
    const auto f = splitCsv(line);
    try {
      if (f.size() != 5) throw std::invalid_argument("expected 5 fields");
      const auto ctx = roadContextFromString(f[0]);
      const auto lower = static_cast<size_t>(std::stoul(f[1]));
      if (lower % kDensityBinWidth != 0) throw std::invalid_argument("bin_lower not a bin edge");
      const auto bin = densityBinAt(lower / kDensityBinWidth);
      const bool open = f[2].empty();
      if (open != !bin.upper || (!open && static_cast<size_t>(std::stoul(f[2])) != *bin.upper)) {
        throw std::invalid_argument("bin_upper does not match bin_lower");
      }
      std::optional<double> mean;
      if (!f[3].empty()) mean = parseNumber(f[3]);
      profile.setCell(ctx, bin.index, mean, static_cast<size_t>(std::stoul(f[4])));
    } catch (const std::exception & e) {
      throw std::invalid_argument(
        "speed profile line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return profile;
}

SpeedProfile loadSpeedProfile(const std::string & path)
{
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open speed profile: " + path);
  }
  return readSpeedProfile(in);
}

void writeSpeedHistogram(std::ostream & os, const SpeedProfile & profile)
{
  os << "context,bin_lower,bin_upper,speed_lower_kph,speed_upper_kph,count,normalised\n";
  for (size_t c = 0; c < kRoadContextCount; ++c) {
    const auto ctx = static_cast<RoadContext>(c);
    for (size_t b = 0; b < kDensityBinCount; ++b) {
      const auto bin = densityBinAt(b);
      const auto & tally = profile.speedTally(ctx, b);
      size_t total = 0;
      for (const auto & [speed_bin, count] : tally) total += count;
      for (const auto & [speed_bin, count] : tally) {
        os << toString(ctx) << ',' << bin.lower << ','
           << (bin.upper ? std::to_string(*bin.upper) : std::string{}) << ','
           << formatNumber(speed_bin * kSpeedBinWidthKph) << ','
           << formatNumber((speed_bin + 1) * kSpeedBinWidthKph) << ',' << count << ','
           << formatNumber(static_cast<double>(count) / static_cast<double>(total)) << '\n';
      }
    }
  }
}

}  // namespace csc
