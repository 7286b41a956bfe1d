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

#include "zenolgt/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "zenolgt/branches.hpp"
#include "zenolgt/dip.hpp"

namespace zenolgt {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  const auto ms =
      std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()).count() % 1000;
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%S", &tm);
  char out[48];
  std::snprintf(out, sizeof out, "%s.%03dZ", buf, static_cast<int>(ms));
  return out;
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::ofstream open_for_write(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  return out;
}

std::vector<double> field_series(const std::vector<ObservableSnapshot>& snaps) {
  std::vector<double> v;
  for (const auto& s : snaps) v.push_back(s.field);
  return v;
}

struct Artifacts {
  fs::path dir;
  std::vector<std::string> files;
  void add(const std::string& name) { files.push_back(name); }
  fs::path operator/(const std::string& name) const { return dir / name; }
};

json run_trajectory_protocol(const RunConfig& c, const std::vector<TrajectoryResult>& results,
                             const std::vector<double>& ideal, Artifacts& art) {
  json summary;
  const auto all = all_indices(results);
  const auto field_stats = ensemble_average(results, field_of, all);
  const auto gauge_stats = ensemble_average(results, violation_of, all);
  write_stats_csv(art / "stats.csv", field_stats);
  art.add("stats.csv");
  write_stats_csv(art / "gauge_stats.csv", gauge_stats);
  art.add("gauge_stats.csv");

  const std::size_t last = std::min(ideal.size(), field_stats.times.size()) - 1;
  const auto hist = error_histogram(results, ideal, last, c.histogram_bins, all);
  write_histogram_csv(art / "histogram.csv", hist);
  art.add("histogram.csv");

  summary["n_trajectories"] = results.size();
  summary["final_time"] = field_stats.times.back();
  summary["final_field_mean"] = field_stats.mean.back();
  summary["final_violation"] = gauge_stats.mean.back();
  summary["histogram_dip"] = hist.dip;
  summary["histogram_bimodal"] = hist.samples.size() >= 4 && hist.dip > dip_critical_value(static_cast<int>(hist.samples.size()));
  if (c.write_trajectories) {
    write_trajectory_csv(art / "trajectories.csv", results);
    art.add("trajectories.csv");
  }
  return summary;
}

json run_dps(const RunConfig& c, Artifacts& art) {
  DpsSimulator sim(c.model, c.schedule, c.noise);
  VectorXc reference;
  const auto ideal = run_ideal_trotter(c.model, c.schedule.dt, c.schedule.n_steps, &reference);
  if (c.schedule.correction_enabled) sim.set_reference_final_state(reference);
  const auto results = run_dps_ensemble(sim, c.master_seed, c.n_trajectories, c.workers);
  json summary = run_trajectory_protocol(c, results, field_series(ideal), art);

  const auto survival = survival_curve(results);
  write_survival_csv(art / "survival.csv", survival);
  art.add("survival.csv");
  summary["surviving_fraction"] = survival.probability.back();
  const auto survivors = surviving_subset(results);
  if (!survivors.empty()) {
    write_stats_csv(art / "survivor_stats.csv", ensemble_average(results, field_of, survivors));
    art.add("survivor_stats.csv");
  }
  if (c.schedule.correction_enabled) {
    const auto corrected = corrected_subset(results);
    summary["n_discarded"] = results.size() - corrected.size();
    int silent = 0;
    for (int i : corrected)
      if (results[i].final_fidelity && *results[i].final_fidelity < 1.0 - 1e-6) ++silent;
    summary["n_final_fidelity_below_one"] = silent;
    if (!corrected.empty()) {
      write_stats_csv(art / "corrected_stats.csv", ensemble_average(results, field_of, corrected));
      art.add("corrected_stats.csv");
      const auto filtered = iterative_filter(results, field_of, corrected, c.filter_thresholds);
      summary["n_filtered"] = filtered.subset.size();
      if (!filtered.empty) {
        write_stats_csv(art / "filtered_stats.csv", ensemble_average(results, field_of, filtered.subset));
        art.add("filtered_stats.csv");
      }
    }
  }
  std::vector<std::vector<double>> rows;
  for (const auto& s : ideal) rows.push_back({s.time, s.field});
  write_csv(art / "ideal.csv", {"time", "field"}, rows);
  art.add("ideal.csv");
  return summary;
}

json run_continuous(const RunConfig& c, Artifacts& art) {
  const JumpSimulator sim(c.jump_config());
  JumpConfig ideal_cfg = c.jump_config();
  ideal_cfg.gamma = 0.0;
  ideal_cfg.spec.lambda1 = 0.0;
  ideal_cfg.spec.lambda2 = 0.0;
  const auto ideal = JumpSimulator(ideal_cfg).run(0);
  const auto results = run_jump_ensemble(sim, c.master_seed, c.n_trajectories, c.workers);
  json summary = run_trajectory_protocol(c, results, field_series(ideal.snapshots), art);
  double jumps = 0.0;
  for (const auto& r : results) jumps += r.n_jumps;
  summary["mean_jumps"] = jumps / static_cast<double>(results.size());
  summary["sampler"] = to_string(sim.sampler());
  return summary;
}

json run_liouvillian(const RunConfig& c, Artifacts& art) {
  auto grid = c.liouvillian.gamma_grid;
  std::sort(grid.begin(), grid.end());
  const auto spectra = spectrum_sweep(c.model, grid, c.liouvillian.fidelity, c.liouvillian.hilbert_cap, c.workers);
  write_spectrum_csv(art / "spectrum.csv", spectra);
  art.add("spectrum.csv");
  json summary;
  summary["n_gamma"] = spectra.size();
  summary["eigenvalues_per_gamma"] = spectra.front().eigenvalues.size();
  double max_re = -1e300;
  for (const auto& s : spectra) max_re = std::max(max_re, s.eigenvalues.front().real());
  summary["max_real_part"] = max_re;
  const double lambda = std::max(c.model.lambda1, c.model.lambda2);
  bool strictly_increasing = true;
  for (std::size_t i = 1; i < grid.size(); ++i) strictly_increasing &= grid[i] > grid[i - 1];
  if (spectra.size() >= 8 && strictly_increasing && grid.front() > 0.0) {
    BranchOptions options;
    if (c.liouvillian.fidelity < 1.0)
      options.slow_count = noisy_slow_count(
          spectrum(build_liouvillian(c.model, grid.back(), 1.0, c.liouvillian.hilbert_cap)), spectra.back());
    const auto b = branch_slopes(spectra, lambda, options);
    summary["slope_slow"] = b.slope_slow;
    summary["slope_fast"] = b.slope_fast;
    summary["has_branch"] = b.has_branch;
    summary["branch_point"] = b.branch_point ? json(*b.branch_point) : json(nullptr);
    summary["branch_point_over_lambda"] = b.branch_point && lambda > 0.0 ? json(*b.branch_point / lambda) : json(nullptr);
    summary["slow_minimum"] = b.slow_minimum ? json(*b.slow_minimum) : json(nullptr);
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < b.gammas.size(); ++i) rows.push_back({b.gammas[i], b.slow_centroid[i], b.fast_centroid[i]});
    write_csv(art / "branches.csv", {"gamma", "slow_log10", "fast_log10"}, rows);
    art.add("branches.csv");
  }
  return summary;
}

json run_master_eq(const RunConfig& c, Artifacts& art) {
  const auto [psi, target] = prepare_meson_state(c.model);
  const DensityMatrix rho0 = psi.amplitudes * psi.amplitudes.adjoint();
  std::vector<double> times;
  for (int i = 0; i <= c.continuous.n_output; ++i) times.push_back(c.continuous.t_final * i / c.continuous.n_output);
  const auto me = integrate_master_equation(c.model, c.continuous.gamma, c.liouvillian.fidelity, rho0, times, target,
                                            false, c.liouvillian.hilbert_cap);
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < me.times.size(); ++i)
    rows.push_back({me.times[i], me.field[i], me.field_variance[i], me.gauge_violation[i], me.trace[i]});
  write_csv(art / "master_eq.csv", {"time", "field", "field_variance", "gauge_violation", "trace"}, rows);
  art.add("master_eq.csv");
  json summary;
  summary["final_time"] = me.times.back();
  summary["final_field_mean"] = me.field.back();
  summary["final_violation"] = me.gauge_violation.back();
  return summary;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17e", v);
  return buf;
}

void write_csv(const fs::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  auto out = open_for_write(path);
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << '\n';
  for (const auto& row : rows) {
    if (row.size() != header.size()) throw std::logic_error("write_csv: row width does not match header");
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_double(row[i]);
    out << '\n';
  }
}

void write_stats_csv(const fs::path& path, const EnsembleStats& stats) {
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < stats.times.size(); ++i)
    rows.push_back({stats.times[i], stats.mean[i], stats.std[i], static_cast<double>(stats.n_surviving[i])});
  write_csv(path, {"time", "mean", "std", "n_surviving"}, rows);
}

void write_survival_csv(const fs::path& path, const SurvivalCurve& curve) {
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < curve.times.size(); ++i)
    rows.push_back({curve.times[i], curve.probability[i], curve.lower[i], curve.upper[i],
                    static_cast<double>(curve.n_surviving[i])});
  write_csv(path, {"time", "survival", "wilson_lower", "wilson_upper", "n_surviving"}, rows);
}

void write_histogram_csv(const fs::path& path, const Histogram& h) {
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < h.density.size(); ++i) rows.push_back({h.edges[i], h.edges[i + 1], h.density[i]});
  write_csv(path, {"bin_left", "bin_right", "density"}, rows);
}

void write_spectrum_csv(const fs::path& path, const std::vector<SpectrumResult>& spectra) {
  std::vector<std::vector<double>> rows;
  for (const auto& s : spectra)
    for (const auto& e : s.eigenvalues) rows.push_back({s.gamma, e.real(), e.imag()});
  write_csv(path, {"gamma", "re_eigenvalue", "im_eigenvalue"}, rows);
}

void write_trajectory_csv(const fs::path& path, const std::vector<TrajectoryResult>& results) {
  if (results.empty()) throw std::logic_error("write_trajectory_csv: no trajectories");
  const std::size_t sites = results.front().snapshots.front().excitation.size();
  std::vector<std::string> header{"trajectory", "time", "field", "gauge_violation", "survived"};
  for (std::size_t s = 0; s < sites; ++s) header.push_back("excitation_" + std::to_string(s));
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& r = results[i];
    for (std::size_t t = 0; t < r.snapshots.size(); ++t) {
      const auto& sn = r.snapshots[t];
      const bool alive = !r.record.violation_step || static_cast<std::size_t>(*r.record.violation_step) > t;
      std::vector<double> row{static_cast<double>(i), sn.time, sn.field, sn.gauge_violation, alive ? 1.0 : 0.0};
      row.insert(row.end(), sn.excitation.begin(), sn.excitation.end());
      rows.push_back(std::move(row));
    }
  }
  write_csv(path, header, rows);
}

std::string run_id(const RunConfig& config) {
  json j = to_json(config);
  j.erase("workers");
  j.erase("output_dir");
  std::ostringstream id;
  id << to_string(config.protocol) << '_' << std::hex << std::setw(16) << std::setfill('0') << fnv1a(j.dump());
  return id.str();
}

RunOutcome execute_run(const RunConfig& config) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  const std::string started_at = utc_timestamp();
  Artifacts art;
  art.dir = fs::path(config.output_dir) / run_id(config);
  fs::create_directories(art.dir);

  json summary;
  switch (config.protocol) {
    case Protocol::Dps:
    case Protocol::DpsCorrected:
      summary = run_dps(config, art);
      break;
    case Protocol::Continuous:
      summary = run_continuous(config, art);
      break;
    case Protocol::Liouvillian:
      summary = run_liouvillian(config, art);
      break;
    case Protocol::MasterEq:
      summary = run_master_eq(config, art);
      break;
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  json manifest;
  manifest["schema_version"] = kSchemaVersion;
  manifest["run_id"] = run_id(config);
  manifest["code_version"] = ZENOLGT_VERSION;
  manifest["started_at"] = started_at;
  manifest["wall_time_s"] = wall;
  manifest["master_seed"] = config.master_seed;
  manifest["protocol"] = to_string(config.protocol);
  manifest["config"] = to_json(config);
  manifest["artifacts"] = art.files;
  manifest["summary"] = summary;
  auto out = open_for_write(art.dir / "manifest.json");
  out << manifest.dump(2) << '\n';
  return {art.dir, manifest};
}

std::string summarize(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw ValidationError("summarize: '" + dir.string() + "' is not a directory");
  struct Row {
    std::string started_at;
    std::string text;
  };
  std::vector<Row> rows;
  std::vector<std::string> problems;
  std::vector<fs::path> candidates;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_directory()) candidates.push_back(entry.path());
  std::sort(candidates.begin(), candidates.end());
  for (const auto& run : candidates) {
    const fs::path mpath = run / "manifest.json";
    if (!fs::exists(mpath)) {
      problems.push_back(run.filename().string() + ": missing manifest");
      continue;
    }
    try {
      std::ifstream in(mpath);
      const json m = json::parse(in);
      const json& cfg = m.at("config");
      const json& model = cfg.at("model");
      const json& s = m.at("summary");
      std::ostringstream params;
      params << model.at("group").get<std::string>() << " N=" << model.at("n_matter").get<int>()
             << " lambda=" << model.at("lambda1").get<double>();
      const std::string protocol = m.at("protocol").get<std::string>();
      if (protocol == "dps" || protocol == "dps_corrected")
        params << " dt=" << cfg.at("schedule").at("dt").get<double>();
      else if (protocol == "continuous" || protocol == "master_eq")
        params << " gamma=" << cfg.at("continuous").at("gamma").get<double>();
      else
        params << " n_gamma=" << s.value("n_gamma", 0);
      auto num = [&](const char* key) {
        if (!s.contains(key) || !s.at(key).is_number()) return std::string("-");
        std::ostringstream v;
        v << std::setprecision(4) << s.at(key).get<double>();
        return v.str();
      };
      std::ostringstream line;
      line << std::left << std::setw(34) << m.at("run_id").get<std::string>() << std::setw(15) << protocol
           << std::setw(34) << params.str() << std::setw(11) << num("surviving_fraction") << std::setw(12)
           << num("final_violation") << std::setprecision(3) << std::fixed << m.at("wall_time_s").get<double>();
      rows.push_back({m.at("started_at").get<std::string>(), line.str()});
    } catch (const std::exception& e) {
      problems.push_back(run.filename().string() + ": corrupt manifest (" + e.what() + ")");
    }
  }
  std::ostringstream out;
  if (rows.empty() && problems.empty()) return "no runs found\n";
  std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.started_at < b.started_at; });
  out << std::left << std::setw(34) << "run" << std::setw(15) << "protocol" << std::setw(34) << "parameters"
      << std::setw(11) << "surviving" << std::setw(12) << "final_dg"
      << "wall_s\n";
  for (const auto& r : rows) out << r.text << '\n';
  for (const auto& p : problems) out << "! " << p << '\n';
  return out.str();
}

}  // namespace zenolgt
