// Copyright 2026 The omdp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// omdp: batch driver for online-MDP experiments.
//
//   omdp run <config.json>
//   omdp solve <config.json>
//   omdp sweep <config.json> --seeds 0..19 --jobs 8
//   omdp report <run-dir>

#include <cstdint>
#include <cstdio>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "omdp/equilibrium.h"
#include "omdp/errors.h"
#include "omdp/harness.h"
#include "omdp/io.h"
#include "omdp/mdp.h"
#include "omdp/report.h"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

void ParseSeedRange(const std::string& text, std::uint64_t& first,
                    std::uint64_t& last) {
  auto dots = text.find("..");
  try {
    if (dots == std::string::npos) {
      first = last = std::stoull(text);
    } else {
      first = std::stoull(text.substr(0, dots));
      last = std::stoull(text.substr(dots + 2));
    }
  } catch (const std::exception&) {
    throw omdp::ConfigError("--seeds expects a..b, got '" + text + "'");
  }
  if (last < first) throw omdp::ConfigError("--seeds range is empty");
}

void PrintSummary(const omdp::RunSummary& s, const std::string& dir) {
  std::printf("run %s: T=%lld v=%.6f stationary_regret=%.6f "
              "policy_regret=%.6f eps=%.6f\n",
              dir.c_str(), static_cast<long long>(s.horizon), s.value,
              s.stationary_regret, s.policy_regret, s.eps_final);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Online MDPs against strategic adversaries"};
  app.require_subcommand(1);

  std::string config_path;
  std::string output_dir;
  std::string run_dir;
  std::string seeds = "0..19";
  int jobs = 1;

  auto* run = app.add_subcommand("run", "Run one experiment");
  run->add_option("config", config_path, "JSON run config")->required();
  run->add_option("-o,--output-dir", output_dir, "Override output_dir");

  auto* solve = app.add_subcommand("solve", "Solve the induced game");
  solve->add_option("config", config_path, "JSON run config")->required();

  auto* sweep = app.add_subcommand("sweep", "Run a config over a seed range");
  sweep->add_option("config", config_path, "JSON run config")->required();
  sweep->add_option("--seeds", seeds, "Seed range a..b (inclusive)");
  sweep->add_option("--jobs", jobs, "Worker threads")
      ->check(CLI::PositiveNumber);
  sweep->add_option("-o,--output-dir", output_dir, "Override output_dir");

  auto* report = app.add_subcommand("report", "Regenerate a run's report");
  report->add_option("dir", run_dir, "Run directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*report) {
      PrintSummary(omdp::Report(run_dir), run_dir);
      return 0;
    }
    omdp::RunConfig config =
        omdp::ParseRunConfig(omdp::ReadFile(config_path));
    if (!output_dir.empty()) config.output_dir = output_dir;

    if (*run) {
      PrintSummary(omdp::ExecuteRun(config), config.output_dir);
    } else if (*solve) {
      omdp::Instance inst = omdp::BuildInstance(config);
      omdp::EquilibriumSolution eq = omdp::SolveGame(inst.model, inst.losses);
      std::optional<omdp::SupportReport> supports;
      if (omdp::CountDeterministicPolicies(inst.model) <= 10000) {
        supports = omdp::ComputeSupportReport(inst.model, inst.losses);
      }
      std::cout << omdp::EquilibriumToJson(eq, supports);
    } else if (*sweep) {
      std::uint64_t first = 0, last = 0;
      ParseSeedRange(seeds, first, last);
      auto runs = omdp::Sweep(config, first, last, jobs);
      std::printf("sweep: %zu runs -> %s/sweep.csv\n", runs.size(),
                  config.output_dir.c_str());
    }
  } catch (const omdp::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const omdp::NumericalError& e) {
    std::fprintf(stderr, "numerical error: %s\n", e.what());
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
