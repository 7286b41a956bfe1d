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
#include <vector>

#include "zenolgt/dps.hpp"

namespace zenolgt {

enum class JumpSampler {
  Auto,         // Poisson for Z2, waiting-time otherwise
  Poisson,      // uniform-rate jumps; requires G_n^dagger G_n = I for every charge
  WaitingTime,  // generic norm-decay sampler with a dense non-Hermitian propagator
};

struct JumpConfig {
  ModelSpec spec;
  double gamma = 1.0;
  double dt_int = 0.01;
  double t_final = 10.0;
  int n_output = 200;
  JumpSampler sampler = JumpSampler::Auto;

  int n_integrator_steps() const;
  /// Integrator steps between consecutive output points.
  int output_stride() const;
  std::vector<double> output_times() const;
  void validate() const;
};

/// Dense propagators are used up to this Hilbert dimension.
inline constexpr std::size_t kJumpDenseCap = 1024;

/// H + H_err - (i gamma / 2) sum_n G_n^dagger G_n.
MatrixXc effective_hamiltonian(const ModelSpec& spec, double gamma);

class JumpSimulator {
 public:
  explicit JumpSimulator(const JumpConfig& config);
  JumpSimulator(const JumpConfig& config, const StateVector& initial, const TargetSector& target);

  TrajectoryResult run(std::uint64_t seed) const;

  const JumpConfig& config() const { return config_; }
  const ObservableContext& context() const { return ctx_; }
  JumpSampler sampler() const { return sampler_; }
  const std::vector<double>& output_times() const { return times_; }

 private:
  TrajectoryResult run_poisson(std::uint64_t seed) const;
  TrajectoryResult run_waiting_time(std::uint64_t seed) const;
  void propagate_unitary(VectorXc& amps, double tau) const;
  void apply_jump(VectorXc& amps, int n) const;

  JumpConfig config_;
  ObservableContext ctx_;
  JumpSampler sampler_;
  VectorXc initial_;
  std::vector<double> times_;
  bool scalar_decay_ = false;
  // dense paths
  MatrixXc eigvecs_;
  Eigen::VectorXd energies_;
  MatrixXc step_propagator_;
  std::vector<Eigen::VectorXd> jump_weights_;
};

std::vector<TrajectoryResult> run_jump_ensemble(const JumpSimulator& sim, std::uint64_t master_seed,
                                                int n_trajectories, int workers = 1);

struct DriftCurve {
  std::vector<double> rescaled_time;  // t * lambda / gamma
  std::vector<double> mean_violation;
  std::vector<double> std_error;
};

DriftCurve gauge_drift_curve(const std::vector<TrajectoryResult>& ensemble, double gamma, double lambda);

/// Linear interpolation of a curve at x; x outside the sampled range throws.
double interpolate(const std::vector<double>& xs, const std::vector<double>& ys, double x);

}  // namespace zenolgt
