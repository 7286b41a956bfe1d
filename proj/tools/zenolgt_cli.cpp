// Copyright 2026 The zenolgt Authors
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

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "zenolgt/config.hpp"
#include "zenolgt/runner.hpp"

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitRuntime = 1;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monitored digital and analog simulation of 1+1d Abelian lattice gauge theories"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(ZENOLGT_VERSION));

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  std::optional<std::string> out_dir;
  auto* run = app.add_subcommand("run", "Execute the protocol described by a JSON config");
  run->add_option("config", config_path, "Path to the run config")->required()->check(CLI::ExistingFile);
  run->add_option("--seed", seed, "Override master_seed");
  run->add_option("--workers", workers, "Override the worker count")->check(CLI::PositiveNumber);
  run->add_option("--out", out_dir, "Override output_dir");

  std::string summary_dir;
  auto* summarize = app.add_subcommand("summarize", "Tabulate the runs stored under a directory");
  summarize->add_option("dir", summary_dir, "Output directory holding run folders")->required();

  double lambda = 0.0;
  double dtm = 0.0;
  int n_charges = 0;
  double t = 0.0;
  double fidelity = 1.0;
  auto* estimate = app.add_subcommand("estimate-survival", "Closed-form survival probability estimate");
  estimate->add_option("--lambda", lambda, "Gauge-breaking strength")->required();
  estimate->add_option("--dtm", dtm, "Time between measurements")->required();
  estimate->add_option("--n", n_charges, "Number of monitored charges")->required();
  estimate->add_option("--t", t, "Evolution time")->required();
  estimate->add_option("--fidelity", fidelity, "Premeasurement rotation fidelity");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    if (*run) {
      zenolgt::RunConfig config = zenolgt::load_config(config_path);
      if (seed) config.master_seed = *seed;
      if (workers) config.workers = *workers;
      if (out_dir) config.output_dir = *out_dir;
      const auto outcome = zenolgt::execute_run(config);
      std::cout << outcome.run_dir.string() << '\n' << outcome.manifest["summary"].dump(2) << '\n';
    } else if (*summarize) {
      std::cout << zenolgt::summarize(summary_dir);
    } else if (*estimate) {
      std::printf("%.10f\n", zenolgt::survival_estimate(lambda, dtm, n_charges, t, fidelity));
    }
  } catch (const zenolgt::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return 0;
}
