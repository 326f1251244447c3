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

#ifndef CSC__CONTEXT_LAYER_HPP_
#define CSC__CONTEXT_LAYER_HPP_

#include "csc/core.hpp"

#include <array>
#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>

namespace csc
{

/// Shared and SemiShared roads share one profile column.
enum class RoadContext { Shared, Regular };

constexpr size_t kRoadContextCount = 2;
constexpr size_t kDensityBinCount = 4;
constexpr size_t kDensityBinWidth = 3;
constexpr double kSpeedBinWidthKph = 5.0;

RoadContext roadContext(RoadType road);
std::string_view toString(RoadContext c);
RoadContext roadContextFromString(std::string_view s);

/// Pedestrian-count bins {0-2, 3-5, 6-8, 9+}.
struct DensityBin
{
  size_t index{0};
  size_t lower{0};
  std::optional<size_t> upper;  // absent for the open last bin

  friend bool operator==(const DensityBin &, const DensityBin &) = default;
};

DensityBin densityBin(size_t pedestrian_count);
DensityBin densityBinAt(size_t index);

/// floor(speed / 5); bin b covers [5b, 5b + 5).
int discretiseSpeed(double speed_kph);

struct ProfileSample
{
  double speed_kph{0.0};
  size_t pedestrian_count{0};
  RoadType road_type{RoadType::Regular};
};

class MissingBin : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Mean speed per (road context, density bin), plus the 5 KPH speed tallies
/// each mean was built from.
class SpeedProfile
{
public:
  using Tally = std::map<int, size_t>;  // speed bin -> count

  /// Built-in lookup from the reference driving logs.
  static SpeedProfile defaultProfile();

  std::optional<double> mean(RoadContext ctx, size_t bin) const;
  size_t sampleCount(RoadContext ctx, size_t bin) const;
  const Tally & speedTally(RoadContext ctx, size_t bin) const;

  void setCell(RoadContext ctx, size_t bin, std::optional<double> mean, size_t count);
  void setTally(RoadContext ctx, size_t bin, Tally tally);

  friend bool operator==(const SpeedProfile &, const SpeedProfile &) = default;

private:
  struct Cell
  {
    std::optional<double> mean;
    size_t count{0};
    Tally tally;

    friend bool operator==(const Cell &, const Cell &) = default;
  };

  const Cell & cell(RoadContext ctx, size_t bin) const;
  Cell & cell(RoadContext ctx, size_t bin);

  std::array<std::array<Cell, kDensityBinCount>, kRoadContextCount> cells_{};
};

/// Groups by (context, density bin); means over raw speeds.
SpeedProfile buildSpeedProfile(std::span<const ProfileSample> samples);

/// Throws MissingBin when the profile has no mean for the queried cell.
double contextSpeed(const SpeedProfile & profile, RoadType road, size_t pedestrian_count);

/// CSV: context,bin_lower,bin_upper,mean_kph,sample_count (open upper and
/// absent means are empty fields).
void writeSpeedProfile(std::ostream & os, const SpeedProfile & profile);
SpeedProfile readSpeedProfile(std::istream & is);
SpeedProfile loadSpeedProfile(const std::string & path);

/// CSV: context,bin_lower,bin_upper,speed_lower_kph,speed_upper_kph,count,normalised.
/// Normalised per density bin.
void writeSpeedHistogram(std::ostream & os, const SpeedProfile & profile);

}  // namespace csc

#endif  // CSC__CONTEXT_LAYER_HPP_
