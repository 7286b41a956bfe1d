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

#include "zenolgt/dip.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

#include "zenolgt/models.hpp"
#include "zenolgt/rng.hpp"

namespace zenolgt {

namespace {

// All indices below are 1-based positions in the sorted sample.
class DipSolver {
 public:
  explicit DipSolver(const std::vector<double>& sorted) : x_(sorted.size() + 1), n_(static_cast<int>(sorted.size())) {
    std::copy(sorted.begin(), sorted.end(), x_.begin() + 1);
  }

  double solve() {
    if (n_ < 2 || x_[n_] == x_[1]) return 0.5 / n_;
    build_hull_links();
    int low = 1;
    int high = n_;
    double dip = 1.0;
    while (true) {
      collect(low, high);
      int ig = static_cast<int>(gcm_.size()) - 1;
      int ih = static_cast<int>(lcm_.size()) - 1;
      double d = 1.0;
      if (gcm_.size() != 3 || lcm_.size() != 3) d = widest_gap(ig, ih);
      if (d < dip) break;
      dip = std::max({dip, minorant_dip(ig), majorant_dip(ih)});
      if (low == gcm_[ig] && high == lcm_[ih]) break;
      low = gcm_[ig];
      high = lcm_[ih];
    }
    return dip / (2.0 * n_);
  }

 private:
  // prev_[j]: predecessor of j on the greatest convex minorant of points 1..j;
  // next_[k]: successor of k on the least concave majorant of points k..n.
  void build_hull_links() {
    prev_.assign(n_ + 1, 0);
    next_.assign(n_ + 1, 0);
    prev_[1] = 1;
    for (int j = 2; j <= n_; ++j) {
      int p = j - 1;
      while (p != 1) {
        const int pp = prev_[p];
        if ((x_[j] - x_[p]) * (p - pp) < (x_[p] - x_[pp]) * (j - p)) break;
        p = pp;
      }
      prev_[j] = p;
    }
    next_[n_] = n_;
    for (int k = n_ - 1; k >= 1; --k) {
      int s = k + 1;
      while (s != n_) {
        const int ss = next_[s];
        if ((x_[k] - x_[s]) * (s - ss) < (x_[s] - x_[ss]) * (k - s)) break;
        s = ss;
      }
      next_[k] = s;
    }
  }

  // gcm_[1..] runs from high down to low, lcm_[1..] from low up to high; slot 0 unused.
  void collect(int low, int high) {
    gcm_.assign(2, high);
    while (gcm_.back() > low) gcm_.push_back(prev_[gcm_.back()]);
    lcm_.assign(2, low);
    while (lcm_.back() < high) lcm_.push_back(next_[lcm_.back()]);
  }

  double widest_gap(int& ig, int& ih) const {
    const int n_gcm = static_cast<int>(gcm_.size()) - 1;
    const int n_lcm = static_cast<int>(lcm_.size()) - 1;
    int ix = n_gcm - 1;
    int iv = 2;
    double d = 0.0;
    do {
      const int g = gcm_[ix];
      const int l = lcm_[iv];
      if (g > l) {
        const int g1 = gcm_[ix + 1];
        const double dx = (l - g1 + 1) - (x_[l] - x_[g1]) * (g - g1) / (x_[g] - x_[g1]);
        ++iv;
        if (dx >= d) {
          d = dx;
          ig = ix + 1;
          ih = iv - 1;
        }
      } else {
        const int l1 = lcm_[iv - 1];
        const double dx = (x_[g] - x_[l1]) * (l - l1) / (x_[l] - x_[l1]) - (g - l1 - 1);
        --ix;
        if (dx >= d) {
          d = dx;
          ig = ix + 1;
          ih = iv;
        }
      }
      ix = std::max(ix, 1);
      iv = std::min(iv, n_lcm);
    } while (gcm_[ix] != lcm_[iv]);
    return d;
  }

  double minorant_dip(int ig) const {
    double best = 0.0;
    for (int j = ig; j + 1 < static_cast<int>(gcm_.size()); ++j)
      best = std::max(best, segment_excess(gcm_[j + 1], gcm_[j], true));
    return best;
  }

  double majorant_dip(int ih) const {
    double best = 0.0;
    for (int j = ih; j + 1 < static_cast<int>(lcm_.size()); ++j)
      best = std::max(best, segment_excess(lcm_[j], lcm_[j + 1], false));
    return best;
  }

  // Largest vertical distance, in counts, between the empirical CDF and the hull
  // segment from a to b.
  double segment_excess(int a, int b, bool below) const {
    double m = 1.0;
    if (b - a <= 1 || x_[b] == x_[a]) return m;
    const double slope = (b - a) / (x_[b] - x_[a]);
    for (int j = a; j <= b; ++j) {
      const double t = below ? (j - a + 1) - (x_[j] - x_[a]) * slope : (x_[j] - x_[a]) * slope - (j - a - 1);
      m = std::max(m, t);
    }
    return m;
  }

  std::vector<double> x_;
  int n_;
  std::vector<int> prev_;
  std::vector<int> next_;
  std::vector<int> gcm_;
  std::vector<int> lcm_;
};

}  // namespace

double dip_statistic(std::vector<double> samples) {
  if (samples.empty()) throw ValidationError("dip_statistic: no samples");
  for (double v : samples)
    if (!std::isfinite(v)) throw ValidationError("dip_statistic: non-finite sample");
  std::sort(samples.begin(), samples.end());
  return DipSolver(samples).solve();
}

double dip_critical_value(int n, double alpha, int n_draws, std::uint64_t seed) {
  if (n < 1 || !(alpha > 0.0 && alpha < 1.0) || n_draws < 10) throw ValidationError("dip_critical_value: invalid arguments");
  static std::mutex mutex;
  static std::map<std::tuple<int, double, int, std::uint64_t>, double> cache;
  const auto key = std::make_tuple(n, alpha, n_draws, seed);
  {
    std::lock_guard<std::mutex> lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  Rng rng(seed);
  std::vector<double> dips(static_cast<std::size_t>(n_draws));
  std::vector<double> u(static_cast<std::size_t>(n));
  for (auto& d : dips) {
    for (auto& v : u) v = rng.uniform();
    d = dip_statistic(u);
  }
  std::sort(dips.begin(), dips.end());
  const auto k = static_cast<std::size_t>(std::ceil((1.0 - alpha) * n_draws)) - 1;
  const double q = dips[std::min(k, dips.size() - 1)];
  std::lock_guard<std::mutex> lock(mutex);
  cache[key] = q;
  return q;
}

bool is_bimodal(const std::vector<double>& samples, double alpha) {
  return dip_statistic(samples) > dip_critical_value(static_cast<int>(samples.size()), alpha);
}

}  // namespace zenolgt
