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

#include <functional>
#include <vector>

#include "zenolgt/dps.hpp"

namespace zenolgt {

using Extractor = std::function<double(const ObservableSnapshot&)>;

double field_of(const ObservableSnapshot& s);
double violation_of(const ObservableSnapshot& s);

std::vector<int> all_indices(const std::vector<TrajectoryResult>& results);
std::vector<int> surviving_subset(const std::vector<TrajectoryResult>& results);
/// Trajectories whose every syndrome was decoded, i.e. none was discarded as ambiguous.
std::vector<int> corrected_subset(const std::vector<TrajectoryResult>& results);

struct EnsembleStats {
  std::vector<double> times;
  std::vector<double> mean;
  std::vector<double> std;  // sample standard deviation, 0 for a single member
  std::vector<double> std_error;
  std::vector<int> n_total;
  std::vector<int> n_surviving;
  bool empty = true;
};

/// Pointwise statistics over `subset` on the grid of the longest member. A trajectory
/// that ended early contributes only to the times it reached. An empty subset yields
/// an EnsembleStats with `empty` set.
EnsembleStats ensemble_average(const std::vector<TrajectoryResult>& results, const Extractor& observable,
                               const std::vector<int>& subset);

struct WilsonInterval {
  double lower = 0.0;
  double upper = 1.0;
};

WilsonInterval wilson_interval(int successes, int trials, double z = 1.959963984540054);

struct SurvivalCurve {
  std::vector<double> times;
  std::vector<double> probability;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<int> n_surviving;
  int n_total = 0;
};

/// Fraction of trajectories without a gauge violation up to each grid time.
SurvivalCurve survival_curve(const std::vector<TrajectoryResult>& results);

struct Histogram {
  std::vector<double> edges;
  std::vector<double> density;  // integrates to 1 over the edges
  double mean = 0.0;
  double std_error = 0.0;
  double dip = 0.0;
  std::vector<double> samples;
};

Histogram make_histogram(std::vector<double> samples, int bins);

/// Distribution of observable(traj, t_index) - ideal[t_index] over the subset.
Histogram error_histogram(const std::vector<TrajectoryResult>& results, const std::vector<double>& ideal,
                          std::size_t time_index, int bins, const std::vector<int>& subset,
                          const Extractor& observable = field_of);

struct FilterIteration {
  double threshold = 0.0;
  std::vector<double> mean;
  std::vector<double> std;
  int kept = 0;
};

struct FilterResult {
  std::vector<int> subset;
  std::vector<FilterIteration> iterations;
  bool empty = false;
};

/// Iteration i drops every member whose observable leaves mean +- thresholds[i] * std
/// of the current subset at any recorded time.
FilterResult iterative_filter(const std::vector<TrajectoryResult>& results, const Extractor& observable,
                              const std::vector<int>& subset, const std::vector<double>& thresholds = {1.0, 2.0});

struct CorrectionFailure {
  double p2 = 0.0;
  double p_fail = 0.0;
  double ratio = 1.0;            // P_corr / P_succ
  double ratio_first_order = 1.0;  // (1 + L p_err)^n_t
};

CorrectionFailure correction_failure_estimate(double p_err, int n_qubits, int n_matter, int n_steps);

}  // namespace zenolgt
