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
#include <optional>
#include <utility>
#include <vector>

#include "zenolgt/local_kernels.hpp"
#include "zenolgt/models.hpp"
#include "zenolgt/parallel.hpp"
#include "zenolgt/rng.hpp"

namespace zenolgt {

struct ScheduleParams {
  double dt = 0.25;
  int n_steps = 40;
  int measure_every = 1;
  bool measure_enabled = true;
  bool correction_enabled = false;
  /// Probability that a given charge is measured in a measurement layer; 1 measures all.
  double measure_probability = 1.0;
  bool stop_on_violation = false;

  double total_time() const { return dt * n_steps; }
  double measurement_period() const { return dt * measure_every; }
  void validate() const;
};

struct NoiseSpec {
  double p_err = 0.0;
  double sigma = 0.0;

  double fidelity() const { return 1.0 - 3.0 * sigma * sigma; }
  static double sigma_for_fidelity(double fidelity);
  void validate() const;
};

struct MeasurementOutcome {
  int step;
  int charge;
  int label;
};

struct MeasurementRecord {
  std::vector<MeasurementOutcome> outcomes;
  std::optional<int> violation_step;
};

struct FlipEvent {
  int step;
  int site;
};

struct TrajectoryResult {
  std::uint64_t seed = 0;
  std::vector<ObservableSnapshot> snapshots;
  MeasurementRecord record;
  bool survived = true;
  bool corrected_ok = true;
  bool discarded_ambiguous = false;
  std::vector<FlipEvent> flips_injected;
  int n_jumps = 0;
  /// |<reference|psi(t_final)>|^2 when a reference final state was supplied.
  std::optional<double> final_fidelity;
};

struct GateSequence {
  std::vector<int> register_dims;
  std::vector<Gate> gates;
};

/// First-order Trotter step: even-bond hops, odd-bond hops, fused diagonal field and
/// mass layer, then lambda1 link rotations and lambda2 bond hops.
GateSequence build_trotter_step(const ModelSpec& spec, double dt);
void apply_step(const GateSequence& step, VectorXc& amps);

std::vector<double> label_probabilities(const VectorXc& amps, const std::vector<std::uint8_t>& labels,
                                        int n_labels);
int select_label(const std::vector<double>& probs, double u);
void project_onto_label(VectorXc& amps, const std::vector<std::uint8_t>& labels, int label, double probability);

std::pair<int, StateVector> measure_charge(const StateVector& psi, const GaugeChargeSet& charges, int n, Rng& rng);
int measure_charge_inplace(VectorXc& amps, const GaugeChargeSet& charges, int n, Rng& rng);

void noisy_premeasurement_rotation(VectorXc& amps, const std::vector<int>& register_dims,
                                   const std::vector<int>& support, double sigma, Rng& rng);

std::vector<int> apply_bitflip_channel(VectorXc& amps, const std::vector<int>& register_dims, double p_err,
                                       Rng& rng);

enum class DecodeStatus { Corrected, Discarded };

struct Correction {
  DecodeStatus status = DecodeStatus::Corrected;
  std::vector<int> flipped_sites;
};

/// Greedy decoder for Z2: an isolated flipped charge n is undone by X on matter n, an
/// isolated adjacent pair (n, n+1) by X on the link between them; longer runs are discarded.
Correction decode_syndrome(const std::vector<int>& syndrome);
Correction decode_and_correct(const std::vector<int>& syndrome, VectorXc& amps,
                              const std::vector<int>& register_dims);

double survival_estimate(double lambda, double dt_m, int n_charges, double t, double fidelity = 1.0);

class DpsSimulator {
 public:
  DpsSimulator(const ModelSpec& spec, const ScheduleParams& schedule, const NoiseSpec& noise);
  DpsSimulator(const ModelSpec& spec, const ScheduleParams& schedule, const NoiseSpec& noise,
               const StateVector& initial, const TargetSector& target);

  TrajectoryResult run(std::uint64_t seed) const;

  /// True when measurement outcomes and dilution draws are the only randomness, so
  /// trajectories with equal records share their state exactly.
  bool records_determine_state() const;

  void set_reference_final_state(const VectorXc& reference) { reference_ = reference; }

  const ModelSpec& spec() const { return spec_; }
  const ScheduleParams& schedule() const { return schedule_; }
  const NoiseSpec& noise() const { return noise_; }
  const ObservableContext& context() const { return ctx_; }
  const VectorXc& initial_state() const { return initial_; }

 private:
  friend class DpsEnsembleEngine;

  bool is_measurement_step(int step) const;
  void finish(TrajectoryResult& r, const VectorXc& amps) const;

  ModelSpec spec_;
  ScheduleParams schedule_;
  NoiseSpec noise_;
  ObservableContext ctx_;
  GateSequence step_;
  VectorXc initial_;
  std::optional<VectorXc> reference_;
};

TrajectoryResult run_dps_trajectory(const ModelSpec& spec, const ScheduleParams& schedule, const NoiseSpec& noise,
                                    std::uint64_t seed);

/// Runs trajectories `0..n-1` with seeds derive_seed(master_seed, i). Results do not
/// depend on `workers`.
std::vector<TrajectoryResult> run_dps_ensemble(const DpsSimulator& sim, std::uint64_t master_seed,
                                               int n_trajectories, int workers = 1);

/// Unmonitored, error-free Trotter evolution of the meson state.
std::vector<ObservableSnapshot> run_ideal_trotter(const ModelSpec& spec, double dt, int n_steps,
                                                  VectorXc* final_state = nullptr);

}  // namespace zenolgt
