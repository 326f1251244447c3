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
#include "csc/controller.hpp"
#include "csc/format.hpp"
#include "csc/fusion.hpp"
#include "csc/proximity_layer.hpp"
#include "csc/scenario_io.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace
{

constexpr int kExitValidation = 2;

struct ControllerOptions
{
  std::string profile;
  std::string range_model;
  double scaling_factor{3.0};
  double ttc{3.0};
  std::string speed_law{"ttc"};
  double decel{2.0};
  double max_range{15.0};
  std::string range_form{"additive"};
  bool no_proximity{false};
  bool serial{false};
};

void addControllerOptions(CLI::App & cmd, ControllerOptions & o)
{
  cmd.add_option("--profile", o.profile, "Speed profile CSV (default: built-in lookup)");
  cmd.add_option(
    "--range-model", o.range_model,
    "Height-vs-range record 'slope intercept residual_std' (default: camera prior)");
  cmd.add_option("--scaling-factor", o.scaling_factor, "Lateral scaling factor")
    ->check(CLI::PositiveNumber);
  cmd.add_option("--ttc", o.ttc, "Time-to-collision budget, seconds")->check(CLI::PositiveNumber);
  cmd.add_option("--speed-law", o.speed_law, "Proximity speed law")
    ->check(CLI::IsMember({"ttc", "braking"}));
  cmd.add_option("--decel", o.decel, "Braking-law deceleration, m/s^2")
    ->check(CLI::PositiveNumber);
  cmd.add_option("--max-range", o.max_range, "Ignore detections beyond this effective range, m")
    ->check(CLI::PositiveNumber);
  cmd.add_option("--range-form", o.range_form, "Effective range form")
    ->check(CLI::IsMember({"additive", "replacement"}));
  cmd.add_flag("--no-proximity", o.no_proximity, "Disable the proximity layer");
  cmd.add_flag("--serial", o.serial, "Run fusion kernels single-threaded");
}

csc::ControllerConfig makeConfig(const csc::ScenarioFile & scenario, const ControllerOptions & o)
{
  csc::ControllerConfig base;
  if (!o.profile.empty()) base.profile = csc::loadSpeedProfile(o.profile);
  base.range_model = o.range_model.empty() ? csc::RangeHeightModel::fromCamera(scenario.camera)
                                           : csc::loadRangeHeightModel(o.range_model);
  base.proximity.lateral_scaling_factor = o.scaling_factor;
  base.proximity.ttc = o.ttc;
  base.proximity.speed_law = csc::speedLawFromString(o.speed_law);
  base.proximity.decel = o.decel;
  base.proximity.max_considered_range = o.max_range;
  base.proximity.range_form = csc::rangeFormFromString(o.range_form);
  base.proximity.validate();
  base.proximity_enabled = !o.no_proximity;
  base.fusion.policy = o.serial ? csc::ExecPolicy::Serial : csc::ExecPolicy::Parallel;
  return csc::configFor(scenario, base);
}

std::ofstream openOut(const std::string & path)
{
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

std::vector<double> parseFactors(const std::string & text)
{
  std::vector<double> factors;
  std::size_t begin = 0;
  while (begin <= text.size()) {
    const auto end = text.find(',', begin);
    const auto item = text.substr(begin, end == std::string::npos ? std::string::npos : end - begin);
    factors.push_back(csc::parseNumber(item));
    if (end == std::string::npos) break;
    begin = end + 1;
  }
  return factors;
}

}  // namespace

int main(int argc, char ** argv)
{
  CLI::App app{"Contextual speed controller: replay, scenario generation and evaluation"};
  app.require_subcommand(1);

  ControllerOptions run_opts;
  std::string run_scenario;
  std::string run_out;
  std::optional<std::uint64_t> run_seed;
  auto * run = app.add_subcommand("run", "Replay a scenario through the controller");
  run->add_option("--scenario", run_scenario, "Scenario file")->required()->check(CLI::ExistingFile);
  run->add_option("--out", run_out, "Decision stream CSV")->required();
  run->add_option("--seed", run_seed, "Accepted for uniformity; replay has no random stages");
  addControllerOptions(*run, run_opts);

  std::string gen_spec;
  std::string gen_out;
  std::optional<std::uint64_t> gen_seed;
  auto * gen = app.add_subcommand("gen-scenario", "Generate a synthetic scenario with ground truth");
  gen->add_option("--spec", gen_spec, "Generation spec (JSON)")->required()->check(CLI::ExistingFile);
  gen->add_option("--out", gen_out, "Scenario file to write")->required();
  gen->add_option("--seed", gen_seed, "Override the spec's seed");

  std::string bp_input;
  std::string bp_out;
  std::string bp_hist;
  auto * bp = app.add_subcommand("build-profile", "Build a speed profile from driver speeds");
  bp->add_option("--input", bp_input, "Scenario log")->required()->check(CLI::ExistingFile);
  bp->add_option("--out,--output", bp_out, "Profile CSV to write")->required();
  bp->add_option("--histogram", bp_hist, "Also write the 5 KPH speed tallies per bin");

  std::string cmp_decisions;
  std::string cmp_scenario;
  std::string cmp_out;
  auto * cmp = app.add_subcommand("compare", "Compare a decision stream with the driver");
  cmp->add_option("--decisions", cmp_decisions, "Decision CSV")->required()->check(CLI::ExistingFile);
  cmp->add_option("--scenario", cmp_scenario, "Scenario file")->required()->check(CLI::ExistingFile);
  cmp->add_option("--out", cmp_out, "Report directory")->required();

  ControllerOptions sw_opts;
  std::string sw_scenario;
  std::string sw_out;
  std::string sw_factors{"2,3,5"};
  auto * sw = app.add_subcommand("sweep", "Evaluate a scenario across lateral scaling factors");
  sw->add_option("--scenario", sw_scenario, "Scenario file")->required()->check(CLI::ExistingFile);
  sw->add_option("--factors", sw_factors, "Comma-separated scaling factors");
  sw->add_option("--out", sw_out, "Report directory")->required();
  addControllerOptions(*sw, sw_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp & e) {
    return app.exit(e);
  } catch (const CLI::ParseError & e) {
    app.exit(e);
    return kExitValidation;
  }

  try {
    if (*run) {
      const auto scenario = csc::loadScenario(run_scenario);
      const auto config = makeConfig(scenario, run_opts);
      const auto decisions = csc::replay(scenario.frames, config);
      auto out = openOut(run_out);
      csc::writeDecisionsCsv(out, decisions);
    } else if (*gen) {
      auto spec = csc::loadGenSpec(gen_spec);
      if (gen_seed) spec.seed = *gen_seed;
      csc::saveScenario(gen_out, csc::generateScenario(spec));
    } else if (*bp) {
      const auto scenario = csc::loadScenario(bp_input);
      const auto samples = csc::profileSamples(scenario);
      const auto profile = csc::buildSpeedProfile(samples);
      auto out = openOut(bp_out);
      csc::writeSpeedProfile(out, profile);
      if (!bp_hist.empty()) {
        auto hist = openOut(bp_hist);
        csc::writeSpeedHistogram(hist, profile);
      }
    } else if (*cmp) {
      const auto scenario = csc::loadScenario(cmp_scenario);
      std::ifstream in(cmp_decisions, std::ios::binary);
      const auto decisions = csc::readDecisionsCsv(in);
      const auto report = csc::evaluate(decisions, scenario);
      csc::writeReport(cmp_out, report);
      std::cout << "frames " << report.decisions.size() << ", with driver "
                << report.frames_with_driver << ", mean difference " << report.mean_difference
                << " KPH, conservative " << report.fraction_conservative << '\n';
    } else if (*sw) {
      const auto scenario = csc::loadScenario(sw_scenario);
      const auto config = makeConfig(scenario, sw_opts);
      const auto factors = parseFactors(sw_factors);
      const auto sweep = csc::scalingSweep(scenario, config, factors);
      csc::writeSweep(sw_out, sweep);
      for (const auto & p : sweep) {
        std::cout << "factor " << p.scaling_factor << ": mean difference "
                  << p.report.mean_difference << " KPH\n";
      }
    }
  } catch (const csc::ParseError & e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const csc::ValidationError & e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const csc::MismatchedStreams & e) {
    std::cerr << "mismatched streams: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::invalid_argument & e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception & e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
