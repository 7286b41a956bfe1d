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

#include "zenolgt/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "zenolgt/dip.hpp"

namespace zenolgt {

double field_of(const ObservableSnapshot& s) { return s.field; }
double violation_of(const ObservableSnapshot& s) { return s.gauge_violation; }

std::vector<int> all_indices(const std::vector<TrajectoryResult>& results) {
  std::vector<int> idx(results.size());
  std::iota(idx.begin(), idx.end(), 0);
  return idx;
}

std::vector<int> surviving_subset(const std::vector<TrajectoryResult>& results) {
  std::vector<int> idx;
  for (std::size_t i = 0; i < results.size(); ++i)
    if (results[i].survived) idx.push_back(static_cast<int>(i));
  return idx;
}

std::vector<int> corrected_subset(const std::vector<TrajectoryResult>& results) {
  std::vector<int> idx;
  for (std::size_t i = 0; i < results.size(); ++i)
    if (!results[i].discarded_ambiguous) idx.push_back(static_cast<int>(i));
  return idx;
}

EnsembleStats ensemble_average(const std::vector<TrajectoryResult>& results, const Extractor& observable,
                               const std::vector<int>& subset) {
  EnsembleStats st;
  if (subset.empty()) return st;
  std::size_t longest = 0;
  int ref = subset.front();
  for (int i : subset) {
    if (i < 0 || static_cast<std::size_t>(i) >= results.size())
      throw ValidationError("ensemble_average: subset index out of range");
    if (results[i].snapshots.size() > longest) {
      longest = results[i].snapshots.size();
      ref = i;
    }
  }
  st.empty = false;
  for (std::size_t t = 0; t < longest; ++t) {
    const double time = results[ref].snapshots[t].time;
    double s = 0.0;
    int n = 0;
    int alive = 0;
    for (int i : subset) {
      const auto& r = results[i];
      if (!r.record.violation_step || static_cast<std::size_t>(*r.record.violation_step) > t) ++alive;
      if (t >= r.snapshots.size()) continue;
      s += observable(r.snapshots[t]);
      ++n;
    }
    const double mean = s / n;
    double ss = 0.0;
    for (int i : subset) {
      const auto& r = results[i];
      if (t >= r.snapshots.size()) continue;
      const double d = observable(r.snapshots[t]) - mean;
      ss += d * d;
    }
    const double var = n > 1 ? ss / (n - 1) : 0.0;
    st.times.push_back(time);
    st.mean.push_back(mean);
    st.std.push_back(std::sqrt(var));
    st.std_error.push_back(std::sqrt(var / n));
    st.n_total.push_back(n);
    st.n_surviving.push_back(alive);
  }
  return st;
}

WilsonInterval wilson_interval(int successes, int trials, double z) {
  if (trials <= 0 || successes < 0 || successes > trials) throw ValidationError("wilson_interval: invalid counts");
  const double n = trials;
  const double p = successes / n;
  const double z2 = z * z;
  const double centre = (p + z2 / (2 * n)) / (1 + z2 / n);
  const double half = z * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n)) / (1 + z2 / n);
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

SurvivalCurve survival_curve(const std::vector<TrajectoryResult>& results) {
  if (results.empty()) throw ValidationError("survival_curve: empty ensemble");
  SurvivalCurve c;
  c.n_total = static_cast<int>(results.size());
  const TrajectoryResult* longest = &results.front();
  for (const auto& r : results)
    if (r.snapshots.size() > longest->snapshots.size()) longest = &r;
  for (std::size_t t = 0; t < longest->snapshots.size(); ++t) {
    int alive = 0;
    for (const auto& r : results)
      if (!r.record.violation_step || static_cast<std::size_t>(*r.record.violation_step) > t) ++alive;
    const auto w = wilson_interval(alive, c.n_total);
    c.times.push_back(longest->snapshots[t].time);
    c.probability.push_back(static_cast<double>(alive) / c.n_total);
    c.lower.push_back(w.lower);
    c.upper.push_back(w.upper);
    c.n_surviving.push_back(alive);
  }
  return c;
}

Histogram make_histogram(std::vector<double> samples, int bins) {
  if (samples.empty()) throw ValidationError("histogram: no samples");
  if (bins < 1) throw ValidationError("histogram: bins must be positive");
  Histogram h;
  std::sort(samples.begin(), samples.end());
  double lo = samples.front();
  double hi = samples.back();
  if (hi - lo < 1e-12) {
    lo -= 0.5;
    hi += 0.5;
  }
  const double width = (hi - lo) / bins;
  for (int b = 0; b <= bins; ++b) h.edges.push_back(lo + b * width);
  h.edges.back() = hi;
  std::vector<double> counts(static_cast<std::size_t>(bins), 0.0);
  for (double x : samples) counts[std::min(bins - 1, static_cast<int>((x - lo) / width))] += 1.0;
  const double n = static_cast<double>(samples.size());
  for (double c : counts) h.density.push_back(c / (n * width));
  h.mean = std::accumulate(samples.begin(), samples.end(), 0.0) / n;
  double ss = 0.0;
  for (double x : samples) ss += (x - h.mean) * (x - h.mean);
  h.std_error = samples.size() > 1 ? std::sqrt(ss / (n - 1) / n) : 0.0;
  h.dip = dip_statistic(samples);
  h.samples = std::move(samples);
  return h;
}

Histogram error_histogram(const std::vector<TrajectoryResult>& results, const std::vector<double>& ideal,
                          std::size_t time_index, int bins, const std::vector<int>& subset,
                          const Extractor& observable) {
  if (time_index >= ideal.size()) throw ValidationError("error_histogram: time index beyond the ideal series");
  std::vector<double> samples;
  for (int i : subset) {
    const auto& r = results.at(static_cast<std::size_t>(i));
    if (time_index < r.snapshots.size()) samples.push_back(observable(r.snapshots[time_index]) - ideal[time_index]);
  }
  return make_histogram(std::move(samples), bins);
}

FilterResult iterative_filter(const std::vector<TrajectoryResult>& results, const Extractor& observable,
                              const std::vector<int>& subset, const std::vector<double>& thresholds) {
  if (subset.empty()) throw ValidationError("iterative_filter: empty subset");
  FilterResult out;
  out.subset = subset;
  for (double thr : thresholds) {
    if (!(thr > 0.0)) throw ValidationError("iterative_filter: thresholds must be positive");
    const EnsembleStats st = ensemble_average(results, observable, out.subset);
    FilterIteration it;
    it.threshold = thr;
    it.mean = st.mean;
    it.std = st.std;
    std::vector<int> kept;
    for (int i : out.subset) {
      const auto& snaps = results[i].snapshots;
      bool inside = true;
      for (std::size_t t = 0; t < snaps.size() && inside; ++t)
        if (std::abs(observable(snaps[t]) - st.mean[t]) > thr * st.std[t]) inside = false;
      if (inside) kept.push_back(i);
    }
    it.kept = static_cast<int>(kept.size());
    out.iterations.push_back(std::move(it));
    out.subset = std::move(kept);
    if (out.subset.empty()) {
      out.empty = true;
      break;
    }
  }
  return out;
}

CorrectionFailure correction_failure_estimate(double p_err, int n_qubits, int n_matter, int n_steps) {
  if (!(p_err >= 0.0 && p_err < 1.0)) throw ValidationError("correction_failure: p_err must lie in [0, 1)");
  if (n_qubits < 2 || n_matter < 2 || n_steps < 0) throw ValidationError("correction_failure: invalid sizes");
  CorrectionFailure c;
  c.p2 = p_err * p_err * std::pow(1.0 - p_err, n_qubits - 2) * 6.0 * (n_matter - 1);
  c.p_fail = 1.0 - std::pow(1.0 - c.p2, n_steps);
  c.ratio = std::pow((1.0 - c.p2) / std::pow(1.0 - p_err, n_qubits), n_steps);
  c.ratio_first_order = std::pow(1.0 + n_qubits * p_err, n_steps);
  return c;
}

}  // namespace zenolgt
