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
#include "csc/scenario_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

namespace csc
{
namespace
{

std::ofstream openOut(const std::filesystem::path & path)
{
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

constexpr const char * kPlotScript = R"gp(# gnuplot -e "report='DIR'" plot.gp
if (!exists("report")) report = "."
set datafile separator ","
set terminal pngcairo size 1200,800
set output report."/speeds.png"
set multiplot layout 2,1
set ylabel "speed (KPH)"
plot report."/trace.csv" using 1:8 with lines title "Real Driver", \
     "" using 1:4 with points pt 7 ps 0.4 title "Proximity", \
     "" using 1:3 with lines title "Context", \
     "" using 1:5 with lines lw 2 title "Final"
set ylabel "people"
set xlabel "t (s)"
plot report."/trace.csv" using 1:6 with steps title "2D People", \
     "" using 1:7 with steps title "3D People"
unset multiplot
set output report."/histogram.png"
set xlabel "final - driver (KPH)"
set ylabel "frames"
set style fill solid 0.6
plot report."/histogram.csv" using 1:2 with boxes notitle
)gp";

}  // namespace

EvalReport evaluate(std::span<const SpeedDecision> decisions, const ScenarioFile & scenario)
{
  if (decisions.size() != scenario.frames.size()) {
    throw MismatchedStreams(
      "decision stream has " + std::to_string(decisions.size()) + " frames, scenario has " +
      std::to_string(scenario.frames.size()));
  }
  EvalReport report;
  report.decisions.assign(decisions.begin(), decisions.end());

  std::vector<double> diffs;
  size_t legal = 0;
  size_t context = 0;
  size_t proximity = 0;
  for (size_t i = 0; i < decisions.size(); ++i) {
    const auto & d = decisions[i];
    if (d.timestamp != scenario.frames[i].timestamp) {
      throw MismatchedStreams("timestamp mismatch at frame " + std::to_string(i));
    }
    if (d.layers.legal == d.final_kph) ++legal;
    if (d.layers.context == d.final_kph) ++context;
    if (d.layers.proximity && *d.layers.proximity == d.final_kph) ++proximity;

    const auto driver = d.driver_kph ? d.driver_kph : scenario.frames[i].driver_speed_kph;
    if (!driver) continue;
    const double diff = d.final_kph - *driver;
    diffs.push_back(diff);
    ++report.histogram[static_cast<int>(std::floor(diff + 0.5))];
  }

  const double n_frames = static_cast<double>(decisions.size());
  if (!decisions.empty()) {
    report.activation = {legal / n_frames, context / n_frames, proximity / n_frames};
  }
  report.frames_with_driver = diffs.size();
  if (!diffs.empty()) {
    double sum = 0.0;
    size_t conservative = 0;
    for (double v : diffs) {
      sum += v;
      if (v < 0.0) ++conservative;
    }
    const double n = static_cast<double>(diffs.size());
    report.mean_difference = sum / n;
    report.fraction_conservative = static_cast<double>(conservative) / n;
    std::sort(diffs.begin(), diffs.end());
    const size_t mid = diffs.size() / 2;
    report.median_difference =
      diffs.size() % 2 == 1 ? diffs[mid] : 0.5 * (diffs[mid - 1] + diffs[mid]);
  }
  return report;
}

void writeReport(const std::filesystem::path & dir, const EvalReport & report)
{
  std::filesystem::create_directories(dir);
  {
    auto out = openOut(dir / "histogram.csv");
    out << "difference_kph,count\n";
    for (const auto & [bin, count] : report.histogram) out << bin << ',' << count << '\n';
  }
  {
    auto out = openOut(dir / "summary.csv");
    out << "metric,value\n"
        << "frames," << report.decisions.size() << '\n'
        << "frames_with_driver," << report.frames_with_driver << '\n'
        << "mean_difference_kph," << formatNumber(report.mean_difference) << '\n'
        << "median_difference_kph," << formatNumber(report.median_difference) << '\n'
        << "fraction_conservative," << formatNumber(report.fraction_conservative) << '\n'
        << "activation_legal," << formatNumber(report.activation.legal) << '\n'
        << "activation_context," << formatNumber(report.activation.context) << '\n'
        << "activation_proximity," << formatNumber(report.activation.proximity) << '\n';
  }
  {
    auto out = openOut(dir / "trace.csv");
    writeDecisionsCsv(out, report.decisions);
  }
  {
    auto out = openOut(dir / "plot.gp");
    out << kPlotScript;
  }
}

std::vector<SweepPoint> scalingSweep(
  const ScenarioFile & scenario, const ControllerConfig & config, std::span<const double> factors)
{
  std::vector<SweepPoint> sweep;
  for (double factor : factors) {
    ControllerConfig cfg = config;
    cfg.proximity.lateral_scaling_factor = factor;
    cfg.proximity.validate();
    const auto decisions = replay(scenario.frames, cfg);
    sweep.push_back({factor, evaluate(decisions, scenario)});
  }
  return sweep;
}

void writeSweep(const std::filesystem::path & dir, std::span<const SweepPoint> sweep)
{
  std::filesystem::create_directories(dir);
  auto out = openOut(dir / "sweep.csv");
  out << "scaling_factor,mean_difference_kph,median_difference_kph,fraction_conservative,"
         "activation_proximity\n";
  for (const auto & p : sweep) {
    out << formatNumber(p.scaling_factor) << ',' << formatNumber(p.report.mean_difference) << ','
        << formatNumber(p.report.median_difference) << ','
        << formatNumber(p.report.fraction_conservative) << ','
        << formatNumber(p.report.activation.proximity) << '\n';
    writeReport(dir / ("factor_" + formatNumber(p.scaling_factor)), p.report);
  }
}

}  // namespace csc
