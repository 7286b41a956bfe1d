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

#include <optional>
#include <vector>

#include "zenolgt/liouvillian.hpp"

namespace zenolgt {

struct BranchOptions {
  double fit_lo = 3.0;   // in units of lambda
  double fit_hi = 100.0;
  double zero_threshold = 1e-10;
  /// Minimum gap, in decades, between the two clusters at the largest gamma.
  double min_separation = 0.5;
  /// Size of the slow cluster; by default fixed by two-means on the largest-gamma spectrum.
  std::optional<int> slow_count;
};

struct BranchAnalysis {
  std::vector<double> gammas;
  /// Mean of log10|Re e| over the slow and fast clusters at each gamma.
  std::vector<double> slow_centroid;
  std::vector<double> fast_centroid;
  int slow_count = 0;
  double separation = 0.0;
  double slope_slow = 0.0;
  double slope_fast = 0.0;
  bool has_branch = false;
  std::optional<double> branch_point;  // gamma at which the slow cluster turns down
  std::optional<double> slow_minimum;  // gamma of an interior minimum of the slow centroid
};

/// Split sorted values into two groups minimizing the within-group sum of squares;
/// returns the size of the lower group.
int two_means_split(const std::vector<double>& sorted);

double fit_slope(const std::vector<double>& x, const std::vector<double>& y);

/// Slow-set size for a noisy spectrum at the largest gamma: the two-means slow count of
/// the ideal spectrum at the same gamma plus the stationary modes that the noise lifts.
int noisy_slow_count(const SpectrumResult& ideal, const SpectrumResult& noisy, double zero_threshold = 1e-10);

BranchAnalysis branch_slopes(const std::vector<SpectrumResult>& spectra, double lambda,
                             const BranchOptions& options = {});

}  // namespace zenolgt
