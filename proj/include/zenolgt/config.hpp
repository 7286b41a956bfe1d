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

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "zenolgt/dps.hpp"
#include "zenolgt/liouvillian.hpp"
#include "zenolgt/qjump.hpp"

namespace zenolgt {

inline constexpr int kSchemaVersion = 1;

enum class Protocol { Dps, DpsCorrected, Continuous, Liouvillian, MasterEq };

std::string to_string(Protocol p);
Protocol protocol_from_string(const std::string& name);
std::string to_string(JumpSampler s);
JumpSampler sampler_from_string(const std::string& name);

struct ContinuousParams {
  double gamma = 1.0;
  double dt_int = 0.01;
  double t_final = 10.0;
  int n_output = 200;
  JumpSampler sampler = JumpSampler::Auto;
};

struct SpectrumParams {
  std::vector<double> gamma_grid;
  double fidelity = 1.0;
  std::size_t hilbert_cap = kLiouvillianHilbertCap;
};

struct RunConfig {
  int schema_version = kSchemaVersion;
  Protocol protocol = Protocol::Dps;
  ModelSpec model;
  ScheduleParams schedule;
  NoiseSpec noise;
  ContinuousParams continuous;
  SpectrumParams liouvillian;
  std::vector<double> filter_thresholds{1.0, 2.0};
  int histogram_bins = 40;
  int n_trajectories = 100;
  std::uint64_t master_seed = 1;
  std::string output_dir = "runs";
  int workers = 1;
  bool write_trajectories = false;

  void validate() const;
  JumpConfig jump_config() const;
};

nlohmann::json to_json(const RunConfig& c);
/// Strict parse: unknown keys and wrong types raise ValidationError naming the field.
RunConfig config_from_json(const nlohmann::json& j);
RunConfig load_config(const std::filesystem::path& path);

}  // namespace zenolgt
