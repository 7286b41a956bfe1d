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

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "zenolgt/config.hpp"
#include "zenolgt/ensemble.hpp"

namespace zenolgt {

struct RunOutcome {
  std::filesystem::path run_dir;
  nlohmann::json manifest;
};

/// Executes the configured protocol and writes manifest.json plus CSV artifacts into
/// output_dir/<run_id>. The run id depends on the configuration but not on `workers`.
RunOutcome execute_run(const RunConfig& config);

std::string run_id(const RunConfig& config);

/// Full double precision, scientific notation.
std::string format_double(double v);

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);
void write_stats_csv(const std::filesystem::path& path, const EnsembleStats& stats);
void write_survival_csv(const std::filesystem::path& path, const SurvivalCurve& curve);
void write_histogram_csv(const std::filesystem::path& path, const Histogram& h);
void write_spectrum_csv(const std::filesystem::path& path, const std::vector<SpectrumResult>& spectra);
void write_trajectory_csv(const std::filesystem::path& path, const std::vector<TrajectoryResult>& results);

/// One row per run found under `dir`, sorted by start time; "no runs found" when empty.
std::string summarize(const std::filesystem::path& dir);

}  // namespace zenolgt
