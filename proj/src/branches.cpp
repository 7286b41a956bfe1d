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

#include "zenolgt/branches.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace zenolgt {

namespace {

std::vector<double> nonzero_logs(const SpectrumResult& s, double zero_threshold) {
  std::vector<double> out;
  for (const auto& e : s.eigenvalues) {
    const double a = std::abs(e.real());
    if (a > zero_threshold) out.push_back(std::log10(a));
  }
  std::sort(out.begin(), out.end());
  return out;
}

double mean_of(const std::vector<double>& v, std::size_t lo, std::size_t hi) {
  if (hi <= lo) return std::nan("");
  return std::accumulate(v.begin() + static_cast<std::ptrdiff_t>(lo), v.begin() + static_cast<std::ptrdiff_t>(hi),
                         0.0) /
         static_cast<double>(hi - lo);
}

// Abscissa of the vertex of the parabola through three points; falls back to x1.
double parabola_vertex(double x0, double x1, double x2, double y0, double y1, double y2) {
  const double d = (x0 - x1) * (x0 - x2) * (x1 - x2);
  const double a = (x2 * (y1 - y0) + x1 * (y0 - y2) + x0 * (y2 - y1)) / d;
  const double b = (x2 * x2 * (y0 - y1) + x1 * x1 * (y2 - y0) + x0 * x0 * (y1 - y2)) / d;
  if (a == 0.0 || !std::isfinite(a)) return x1;
  return std::clamp(-b / (2.0 * a), x0, x2);
}

}  // namespace

int two_means_split(const std::vector<double>& sorted) {
  const std::size_t n = sorted.size();
  if (n < 2) throw ValidationError("two_means_split: need at least two values");
  std::vector<double> prefix(n + 1, 0.0);
  std::vector<double> prefix2(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    prefix[i + 1] = prefix[i] + sorted[i];
    prefix2[i + 1] = prefix2[i] + sorted[i] * sorted[i];
  }
  auto sse = [&](std::size_t lo, std::size_t hi) {
    const double m = static_cast<double>(hi - lo);
    const double s = prefix[hi] - prefix[lo];
    return (prefix2[hi] - prefix2[lo]) - s * s / m;
  };
  std::size_t best = 1;
  double best_cost = sse(0, 1) + sse(1, n);
  for (std::size_t k = 2; k < n; ++k) {
    const double c = sse(0, k) + sse(k, n);
    if (c < best_cost) {
      best_cost = c;
      best = k;
    }
  }
  return static_cast<int>(best);
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw ValidationError("fit_slope: need at least two points");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  if (sxx == 0.0) throw ValidationError("fit_slope: degenerate abscissae");
  return sxy / sxx;
}

int noisy_slow_count(const SpectrumResult& ideal, const SpectrumResult& noisy, double zero_threshold) {
  if (ideal.eigenvalues.size() != noisy.eigenvalues.size())
    throw ValidationError("noisy_slow_count: spectra of different size");
  const auto ideal_logs = nonzero_logs(ideal, zero_threshold);
  const auto noisy_logs = nonzero_logs(noisy, zero_threshold);
  return two_means_split(ideal_logs) + static_cast<int>(noisy_logs.size() - ideal_logs.size());
}

BranchAnalysis branch_slopes(const std::vector<SpectrumResult>& spectra, double lambda,
                             const BranchOptions& options) {
  if (spectra.size() < 8) throw ValidationError("branch_slopes: need at least 8 gamma points");
  if (!(lambda >= 0.0)) throw ValidationError("branch_slopes: lambda must be non-negative");
  for (std::size_t i = 1; i < spectra.size(); ++i)
    if (!(spectra[i].gamma > spectra[i - 1].gamma)) throw ValidationError("branch_slopes: gammas must increase");
  if (!(spectra.front().gamma > 0.0)) throw ValidationError("branch_slopes: gammas must be positive");

  BranchAnalysis out;
  std::vector<std::vector<double>> logs;
  for (const auto& s : spectra) logs.push_back(nonzero_logs(s, options.zero_threshold));
  const auto& last = logs.back();
  if (last.size() < 2) return out;
  const int k = options.slow_count ? std::clamp(*options.slow_count, 1, static_cast<int>(last.size()) - 1)
                                   : two_means_split(last);
  out.slow_count = k;
  out.separation = last[k] - last[k - 1];

  std::vector<double> lg;
  for (std::size_t i = 0; i < spectra.size(); ++i) {
    const auto& v = logs[i];
    const std::size_t ks = std::min<std::size_t>(static_cast<std::size_t>(k), v.size());
    out.gammas.push_back(spectra[i].gamma);
    lg.push_back(std::log10(spectra[i].gamma));
    out.slow_centroid.push_back(mean_of(v, 0, ks));
    out.fast_centroid.push_back(mean_of(v, ks, v.size()));
  }

  // lambda = 0 has no scale; the fit window then covers the whole grid
  std::vector<double> fx;
  std::vector<double> fs;
  std::vector<double> ff;
  for (std::size_t i = 0; i < spectra.size(); ++i) {
    const double r = lambda > 0.0 ? spectra[i].gamma / lambda : options.fit_lo;
    if (r < options.fit_lo * (1 - 1e-9) || r > options.fit_hi * (1 + 1e-9)) continue;
    if (!std::isfinite(out.slow_centroid[i]) || !std::isfinite(out.fast_centroid[i])) continue;
    fx.push_back(lg[i]);
    fs.push_back(out.slow_centroid[i]);
    ff.push_back(out.fast_centroid[i]);
  }
  if (fx.size() < 2) return out;
  out.slope_slow = fit_slope(fx, fs);
  out.slope_fast = fit_slope(fx, ff);

  const auto& sc = out.slow_centroid;
  for (std::size_t i = 1; i + 1 < sc.size(); ++i) {
    if (sc[i] >= sc[i - 1] && sc[i] > sc[i + 1]) {
      out.branch_point =
          std::pow(10.0, parabola_vertex(lg[i - 1], lg[i], lg[i + 1], sc[i - 1], sc[i], sc[i + 1]));
      break;
    }
  }
  for (std::size_t i = 1; i + 1 < sc.size(); ++i) {
    if (sc[i] < sc[i - 1] && sc[i] <= sc[i + 1]) {
      out.slow_minimum =
          std::pow(10.0, parabola_vertex(lg[i - 1], lg[i], lg[i + 1], sc[i - 1], sc[i], sc[i + 1]));
      break;
    }
  }
  out.has_branch = out.branch_point.has_value() && out.separation >= options.min_separation &&
                   out.slope_slow < 0.0 && out.slope_fast > 0.0;
  return out;
}

}  // namespace zenolgt
