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

// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails. Criterion names given on the command line restrict
// the run to those criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "zenolgt/branches.hpp"
#include "zenolgt/dip.hpp"
#include "zenolgt/dps.hpp"
#include "zenolgt/ensemble.hpp"
#include "zenolgt/liouvillian.hpp"
#include "zenolgt/qjump.hpp"

namespace zenolgt {
namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

class Detail {
 public:
  template <typename T>
  Detail& operator()(const std::string& key, const T& value) {
    if (!text_.str().empty()) text_ << ' ';
    text_ << key << '=' << value;
    return *this;
  }
  std::string str() const { return text_.str(); }

 private:
  std::ostringstream text_;
};

ModelSpec model(Group g, int n, double lambda) {
  ModelSpec s;
  s.group = g;
  s.n_matter = n;
  s.lambda1 = lambda;
  s.lambda2 = lambda;
  return s;
}

std::vector<double> ratio_grid(double lambda) { return log_grid(0.1 * lambda, 100.0 * lambda, 16); }

bool slow_branch_rises(const BranchAnalysis& b) {
  if (!b.slow_minimum) return false;
  const auto lowest = std::min_element(b.slow_centroid.begin(), b.slow_centroid.end());
  return lowest + 1 != b.slow_centroid.end() && b.slow_centroid.back() > *lowest;
}

Verdict zeno_branching() {
  const double lambda = 0.3;
  const auto b = branch_slopes(spectrum_sweep(model(Group::Z2, 3, lambda), ratio_grid(lambda)), lambda);
  const double at = b.branch_point ? *b.branch_point / lambda : std::nan("");
  Verdict v;
  v.pass = std::abs(b.slope_slow + 1.0) <= 0.2 && std::abs(b.slope_fast - 1.0) <= 0.2 && b.has_branch &&
           b.branch_point && std::abs(at - 1.0) <= 0.5;
  v.detail = Detail()("slope_slow", b.slope_slow)("slope_fast", b.slope_fast)("branch_gamma_over_lambda", at).str();
  return v;
}

Verdict noisy_zeno_window() {
  const double lambda = 0.3;
  const auto spec = model(Group::Z2, 3, lambda);
  const auto grid = ratio_grid(lambda);
  const auto ideal_top = spectrum_sweep(spec, {grid.back()});
  const auto noisy = spectrum_sweep(spec, grid, 0.99);
  BranchOptions opt;
  opt.slow_count = noisy_slow_count(ideal_top.back(), noisy.back());
  const auto b = branch_slopes(noisy, lambda, opt);
  const double at = b.slow_minimum ? *b.slow_minimum / lambda : std::nan("");
  Verdict v;
  v.pass = b.slow_minimum && at > 1.0 && at < 30.0 && slow_branch_rises(b);
  v.detail = Detail()("slow_count", b.slow_count)("minimum_gamma_over_lambda", at)("rises_after", slow_branch_rises(b))
                 .str();
  return v;
}

Verdict survival_probability() {
  Verdict v;
  v.pass = true;
  Detail d;
  for (double lambda : {0.1, 0.2}) {
    for (double dt : {0.25, 0.5}) {
      ScheduleParams sched;
      sched.dt = dt;
      sched.n_steps = static_cast<int>(std::lround(10.0 / dt));
      sched.stop_on_violation = true;
      const DpsSimulator sim(model(Group::Z2, 9, lambda), sched, NoiseSpec{});
      const auto curve = survival_curve(run_dps_ensemble(sim, 4000 + static_cast<std::uint64_t>(100 * lambda + 10 * dt), 500));
      int outside = 0;
      for (std::size_t i = 0; i < curve.times.size(); ++i) {
        const double expected = survival_estimate(lambda, dt, 9, curve.times[i]);
        if (expected < curve.lower[i] || expected > curve.upper[i]) ++outside;
      }
      const bool gated = lambda * dt <= 0.05 + 1e-12;
      if (gated && outside > 0) v.pass = false;
      std::ostringstream key;
      key << "lambda" << lambda << "_dt" << dt;
      d(key.str() + "_final", curve.probability.back())(key.str() + "_outside_band", outside);
      if (lambda == 0.2 && dt == 0.25) {
        const double p = curve.probability.back();
        if (p < 0.33 || p > 0.49) v.pass = false;
      }
    }
  }
  v.detail = d.str();
  return v;
}

Verdict dps_determinism() {
  const double lambda = 0.2;
  ScheduleParams sched;
  sched.dt = 0.5;  // gamma = 1 / (2 dt) = 5 lambda
  sched.n_steps = 20;
  const auto spec = model(Group::Z2, 9, lambda);
  const DpsSimulator sim(spec, sched, NoiseSpec{});
  const auto results = run_dps_ensemble(sim, 77, 100);
  const auto alive = surviving_subset(results);
  const auto ideal = run_ideal_trotter(spec, sched.dt, sched.n_steps);
  double spread = 0.0;
  double rel = 0.0;
  if (!alive.empty()) {
    const auto& first = results[alive.front()].snapshots;
    for (int i : alive) {
      const auto& s = results[i].snapshots;
      for (std::size_t t = 0; t < s.size(); ++t) {
        spread = std::max(spread, std::abs(s[t].field - first[t].field));
        spread = std::max(spread, std::abs(s[t].gauge_violation - first[t].gauge_violation));
        for (std::size_t k = 0; k < s[t].excitation.size(); ++k)
          spread = std::max(spread, std::abs(s[t].excitation[k] - first[t].excitation[k]));
      }
    }
    for (std::size_t t = 0; t < first.size(); ++t)
      rel = std::max(rel, std::abs(first[t].field - ideal[t].field) / std::abs(ideal[t].field));
  }
  Verdict v;
  v.pass = alive.size() >= 2 && spread <= 1e-10 && rel < 0.02;
  v.detail = Detail()("survivors", alive.size())("max_spread", spread)("max_relative_deviation", rel).str();
  return v;
}

Verdict unraveling_equivalence() {
  const double lambda = 0.2;
  const double gamma = 2.0;
  const double t_final = 10.0;
  const int n_output = 20;
  const int n_traj = 1000;
  const auto spec = model(Group::Z2, 2, lambda);

  ScheduleParams sched;
  sched.dt = 0.025;
  sched.n_steps = static_cast<int>(std::lround(t_final / sched.dt));
  sched.measure_probability = 2.0 * gamma * sched.dt;
  const DpsSimulator dps(spec, sched, NoiseSpec{});
  const auto dps_runs = run_dps_ensemble(dps, 501, n_traj);
  const auto dps_stats = ensemble_average(dps_runs, field_of, all_indices(dps_runs));

  JumpConfig jc;
  jc.spec = spec;
  jc.gamma = gamma;
  jc.dt_int = 0.01;
  jc.t_final = t_final;
  jc.n_output = n_output;
  const JumpSimulator jump(jc);
  const auto jump_runs = run_jump_ensemble(jump, 502, n_traj);
  const auto jump_stats = ensemble_average(jump_runs, field_of, all_indices(jump_runs));

  const auto [psi, target] = prepare_meson_state(spec);
  const DensityMatrix rho0 = psi.amplitudes * psi.amplitudes.adjoint();
  const auto me = integrate_master_equation(spec, gamma, 1.0, rho0, jump.output_times(), target);

  const int stride = sched.n_steps / n_output;
  double z_dps = 0.0;
  double z_jump = 0.0;
  for (std::size_t i = 0; i < me.times.size(); ++i) {
    const std::size_t k = i * static_cast<std::size_t>(stride);
    const double dd = std::abs(dps_stats.mean[k] - me.field[i]);
    const double dj = std::abs(jump_stats.mean[i] - me.field[i]);
    z_dps = std::max(z_dps, dd == 0.0 ? 0.0 : dd / dps_stats.std_error[k]);
    z_jump = std::max(z_jump, dj == 0.0 ? 0.0 : dj / jump_stats.std_error[i]);
  }

  const auto dps_ideal = run_ideal_trotter(spec, sched.dt, sched.n_steps);
  JumpConfig free = jc;
  free.gamma = 0.0;
  free.spec.lambda1 = 0.0;
  free.spec.lambda2 = 0.0;
  const auto jump_ideal = JumpSimulator(free).run(0).snapshots;
  std::vector<double> ideal_dps;
  for (const auto& s : dps_ideal) ideal_dps.push_back(s.field);
  std::vector<double> ideal_jump;
  for (const auto& s : jump_ideal) ideal_jump.push_back(s.field);
  const auto h_dps = error_histogram(dps_runs, ideal_dps, dps_ideal.size() - 1, 40, all_indices(dps_runs));
  const auto h_jump = error_histogram(jump_runs, ideal_jump, jump_ideal.size() - 1, 40, all_indices(jump_runs));
  const bool dps_bimodal = is_bimodal(h_dps.samples);
  const bool jump_bimodal = is_bimodal(h_jump.samples);

  Verdict v;
  v.pass = z_dps <= 3.0 && z_jump <= 3.0 && dps_bimodal && !jump_bimodal;
  v.detail = Detail()("max_z_dps", z_dps)("max_z_jump", z_jump)("dip_dps", h_dps.dip)("dip_jump", h_jump.dip)(
                 "dip_critical", dip_critical_value(n_traj))
                 .str();
  return v;
}

Verdict gauge_drift_collapse() {
  const double lambda = 0.3;
  std::vector<DriftCurve> curves;
  for (double ratio : {3.0, 5.0, 10.0}) {
    JumpConfig jc;
    jc.spec = model(Group::Z2, 3, lambda);
    jc.gamma = ratio * lambda;
    jc.dt_int = 0.005;
    jc.t_final = 0.5 * ratio;
    jc.n_output = 50;
    const JumpSimulator sim(jc);
    curves.push_back(gauge_drift_curve(run_jump_ensemble(sim, 800 + static_cast<std::uint64_t>(ratio), 200), jc.gamma,
                                       lambda));
  }
  double gap = 0.0;
  for (int i = 0; i <= 50; ++i) {
    const double x = 0.01 * i;
    std::vector<double> ys;
    for (const auto& c : curves) ys.push_back(interpolate(c.rescaled_time, c.mean_violation, x));
    gap = std::max(gap, *std::max_element(ys.begin(), ys.end()) - *std::min_element(ys.begin(), ys.end()));
  }
  Verdict v;
  v.pass = gap < 0.05;
  v.detail = Detail()("max_gap", gap)("final_3", curves[0].mean_violation.back())("final_5",
                                                                                  curves[1].mean_violation.back())(
                 "final_10", curves[2].mean_violation.back())
                 .str();
  return v;
}

Verdict correction_failure() {
  const auto est = correction_failure_estimate(0.02, 17, 9, 20);
  ScheduleParams sched;
  sched.dt = 0.25;
  sched.n_steps = 20;
  sched.correction_enabled = true;
  NoiseSpec noise;
  noise.p_err = 0.02;
  const auto spec = model(Group::Z2, 9, 0.0);
  DpsSimulator sim(spec, sched, noise);
  VectorXc reference;
  run_ideal_trotter(spec, sched.dt, sched.n_steps, &reference);
  sim.set_reference_final_state(reference);
  const int n = 500;
  const auto results = run_dps_ensemble(sim, 900, n);
  int failed = 0;
  int discarded = 0;
  for (const auto& r : results) {
    if (r.discarded_ambiguous) ++discarded;
    if (r.discarded_ambiguous || !r.final_fidelity || *r.final_fidelity < 1.0 - 1e-6) ++failed;
  }
  const auto band = wilson_interval(failed, n);
  Verdict v;
  v.pass = std::abs(est.p_fail - 0.25) <= 0.01 && est.p_fail >= band.lower && est.p_fail <= band.upper;
  v.detail = Detail()("P_fail", est.p_fail)("observed", static_cast<double>(failed) / n)("discarded", discarded)(
                 "wilson_lower", band.lower)("wilson_upper", band.upper)
                 .str();
  return v;
}

double mean_abs_error(const EnsembleStats& s, const std::vector<ObservableSnapshot>& ideal) {
  double sum = 0.0;
  for (std::size_t t = 0; t < s.mean.size(); ++t) sum += std::abs(s.mean[t] - ideal[t].field);
  return sum / static_cast<double>(s.mean.size());
}

double mean_of(const std::vector<double>& v) {
  double sum = 0.0;
  for (double x : v) sum += x;
  return sum / static_cast<double>(v.size());
}

Verdict combined_error_filtering() {
  const auto spec = model(Group::Z2, 9, 0.2);
  ScheduleParams sched;
  sched.dt = 0.25;
  sched.n_steps = 40;
  NoiseSpec noise;
  noise.p_err = 0.02;
  const auto ideal = run_ideal_trotter(spec, sched.dt, sched.n_steps);

  sched.correction_enabled = true;
  const auto corrected = run_dps_ensemble(DpsSimulator(spec, sched, noise), 700, 100);
  const auto kept = corrected_subset(corrected);
  const auto unfiltered = ensemble_average(corrected, field_of, kept);
  const auto filter = iterative_filter(corrected, field_of, kept);

  sched.correction_enabled = false;
  const auto raw = run_dps_ensemble(DpsSimulator(spec, sched, noise), 701, 100);
  const auto uncorrected = ensemble_average(raw, field_of, all_indices(raw));

  Verdict v;
  if (filter.empty || unfiltered.empty) {
    v.detail = Detail()("corrected", kept.size())("filter_empty", filter.empty).str();
    return v;
  }
  const auto filtered = ensemble_average(corrected, field_of, filter.subset);
  const double e_f = mean_abs_error(filtered, ideal);
  const double e_c = mean_abs_error(unfiltered, ideal);
  const double e_u = mean_abs_error(uncorrected, ideal);
  const double s_f = mean_of(filtered.std);
  const double s_c = mean_of(unfiltered.std);
  v.pass = e_f < e_c && e_f < e_u && s_f < s_c;
  v.detail = Detail()("corrected", kept.size())("filtered", filter.subset.size())("err_filtered", e_f)(
                 "err_corrected", e_c)("err_uncorrected", e_u)("std_filtered", s_f)("std_corrected", s_c)
                 .str();
  return v;
}

Verdict generality(Group group) {
  const double lambda = 0.2;
  const std::size_t cap = 72;
  const auto spec = model(group, 3, lambda);
  const auto grid = ratio_grid(lambda);
  const auto ideal = spectrum_sweep(spec, grid, 1.0, cap);
  const auto b = branch_slopes(ideal, lambda);
  const auto noisy = spectrum_sweep(spec, grid, 0.99, cap);
  BranchOptions opt;
  opt.slow_count = noisy_slow_count(ideal.back(), noisy.back());
  const auto nb = branch_slopes(noisy, lambda, opt);
  const double at = nb.slow_minimum ? *nb.slow_minimum / lambda : std::nan("");
  const double bp = b.branch_point ? *b.branch_point / lambda : std::nan("");
  Verdict v;
  v.pass = std::abs(b.slope_slow + 1.0) <= 0.3 && std::abs(b.slope_fast - 1.0) <= 0.3 && b.has_branch &&
           nb.slow_minimum && at > 1.0 && at < 30.0 && slow_branch_rises(nb);
  v.detail = Detail()("slope_slow", b.slope_slow)("slope_fast", b.slope_fast)("branch_gamma_over_lambda", bp)(
                 "noisy_minimum_gamma_over_lambda", at)("rises_after", slow_branch_rises(nb))
                 .str();
  return v;
}

Verdict z3_u1_generality() {
  const Verdict z3 = generality(Group::Z3);
  const Verdict u1 = generality(Group::U1_S1);
  return {z3.pass && u1.pass, "Z3[" + z3.detail + "] U1_S1[" + u1.detail + "]"};
}

Verdict shot_noise_dominance() {
  const double lambda = 0.2;
  JumpConfig base;
  base.spec = model(Group::Z2, 9, lambda);
  base.dt_int = 0.1;
  base.t_final = 10.0;
  base.n_output = 20;
  JumpConfig free = base;
  free.gamma = 0.0;
  free.spec.lambda1 = 0.0;
  free.spec.lambda2 = 0.0;
  const auto ideal = JumpSimulator(free).run(0).snapshots;

  Verdict v;
  v.pass = true;
  Detail d;
  for (double ratio : {1.0, 5.0}) {
    JumpConfig jc = base;
    jc.gamma = ratio * lambda;
    const auto runs = run_jump_ensemble(JumpSimulator(jc), 1100 + static_cast<std::uint64_t>(ratio), 50);
    const auto stats = ensemble_average(runs, field_of, all_indices(runs));
    double worst = -1e300;
    for (std::size_t t = 0; t < stats.std.size(); ++t) {
      const double quantum = std::sqrt(std::max(0.0, ideal[t].field_variance));
      worst = std::max(worst, stats.std[t] - quantum);
      if (stats.std[t] > quantum + 1e-12) v.pass = false;
    }
    std::ostringstream key;
    key << "gamma" << ratio << "lambda";
    d(key.str() + "_max_excess", worst)(key.str() + "_std_final", stats.std.back());
  }
  d("quantum_std_final", std::sqrt(ideal.back().field_variance));
  v.detail = d.str();
  return v;
}

struct Criterion {
  const char* name;
  std::function<Verdict()> check;
};

}  // namespace
}  // namespace zenolgt

int main(int argc, char** argv) {
  using namespace zenolgt;
  const std::vector<Criterion> criteria{
      {"zeno_branching", zeno_branching},
      {"noisy_zeno_window", noisy_zeno_window},
      {"survival_probability", survival_probability},
      {"dps_determinism", dps_determinism},
      {"unraveling_equivalence", unraveling_equivalence},
      {"gauge_drift_collapse", gauge_drift_collapse},
      {"correction_failure", correction_failure},
      {"combined_error_filtering", combined_error_filtering},
      {"z3_u1_generality", z3_u1_generality},
      {"shot_noise_dominance", shot_noise_dominance},
  };
  std::set<std::string> selected(argv + 1, argv + argc);
  int failures = 0;
  for (const auto& c : criteria) {
    if (!selected.empty() && !selected.count(c.name)) continue;
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.check();
    } catch (const std::exception& e) {
      v = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!v.pass) ++failures;
    std::printf("%s %s (%.1fs): %s\n", v.pass ? "PASS" : "FAIL", c.name, secs, v.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
