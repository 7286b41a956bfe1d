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

#include <map>

#include "dps_detail.hpp"
#include "zenolgt/dps.hpp"

namespace zenolgt {

// Trajectories whose measurement records coincide carry identical states when the
// only randomness is in the measurement layer. The engine evolves one state per
// distinct record and splits groups as outcomes diverge; each member still consumes
// its own random stream in the same order as DpsSimulator::run.
class DpsEnsembleEngine {
 public:
  explicit DpsEnsembleEngine(const DpsSimulator& sim) : sim_(sim) {}

  std::vector<TrajectoryResult> run(const std::vector<std::uint64_t>& seeds) {
    const std::size_t n = seeds.size();
    results_.assign(n, TrajectoryResult{});
    rngs_.clear();
    rngs_.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      results_[i].seed = seeds[i];
      rngs_.emplace_back(seeds[i]);
    }
    std::vector<Group> groups(1);
    groups[0].amps = sim_.initial_;
    for (std::size_t i = 0; i < n; ++i) groups[0].members.push_back(static_cast<int>(i));
    snapshot(groups, 0.0);

    const auto& sched = sim_.schedule_;
    for (int step = 1; step <= sched.n_steps && !groups.empty(); ++step) {
      step_ = step;
      for (auto& g : groups) apply_step(sim_.step_, g.amps);
      if (sim_.is_measurement_step(step)) {
        std::vector<Group> next;
        for (auto& g : groups) branch(std::move(g), 0, {}, next);
        groups = std::move(next);
        for (auto& g : groups) {
          const auto outcome =
              detail::resolve_layer(sim_, g.amps, g.syndrome, results_[g.members.front()].discarded_ambiguous);
          for (int m : g.members) detail::record_layer(results_[m], outcome, step);
        }
      }
      snapshot(groups, step * sched.dt);
      if (sched.stop_on_violation) {
        std::vector<Group> alive;
        for (auto& g : groups) {
          if (results_[g.members.front()].survived)
            alive.push_back(std::move(g));
          else
            finish(g);
        }
        groups = std::move(alive);
      }
    }
    for (auto& g : groups) finish(g);
    return std::move(results_);
  }

 private:
  struct Group {
    VectorXc amps;
    std::vector<int> members;
    std::vector<int> syndrome;
  };

  void snapshot(const std::vector<Group>& groups, double time) {
    for (const auto& g : groups) {
      const auto snap = observables(g.amps, sim_.ctx_, time);
      for (int m : g.members) results_[m].snapshots.push_back(snap);
    }
  }

  void finish(const Group& g) {
    for (int m : g.members) sim_.finish(results_[m], g.amps);
  }

  void branch(Group g, int n, std::vector<int> syndrome, std::vector<Group>& out) {
    const auto& ctx = sim_.ctx_;
    if (n == ctx.charges.size()) {
      g.syndrome = std::move(syndrome);
      out.push_back(std::move(g));
      return;
    }
    const double q = sim_.schedule_.measure_probability;
    std::vector<int> measured;
    std::vector<int> skipped;
    if (q < 1.0) {
      for (int m : g.members) (rngs_[m].uniform() < q ? measured : skipped).push_back(m);
    } else {
      measured = std::move(g.members);
    }
    if (measured.empty()) {
      g.members = std::move(skipped);
      branch(std::move(g), n + 1, std::move(syndrome), out);
      return;
    }
    if (!skipped.empty()) branch(Group{g.amps, std::move(skipped), {}}, n + 1, syndrome, out);

    const auto& labels = ctx.charges.labels[n];
    const auto probs = label_probabilities(g.amps, labels, static_cast<int>(ctx.charges.eigenvalues[n].size()));
    std::map<int, std::vector<int>> buckets;
    for (int m : measured) {
      const int k = select_label(probs, rngs_[m].uniform());
      results_[m].record.outcomes.push_back({step_, n, k});
      buckets[k].push_back(m);
    }
    std::size_t remaining = buckets.size();
    for (auto& [k, members] : buckets) {
      Group h;
      if (--remaining == 0)
        h.amps = std::move(g.amps);
      else
        h.amps = g.amps;
      h.members = std::move(members);
      project_onto_label(h.amps, labels, k, probs[k]);
      std::vector<int> syn = syndrome;
      if (k != ctx.target.labels[n]) syn.push_back(n);
      branch(std::move(h), n + 1, std::move(syn), out);
    }
  }

  const DpsSimulator& sim_;
  std::vector<TrajectoryResult> results_;
  std::vector<Rng> rngs_;
  int step_ = 0;
};

std::vector<TrajectoryResult> run_dps_ensemble(const DpsSimulator& sim, std::uint64_t master_seed,
                                               int n_trajectories, int workers) {
  if (n_trajectories < 0) throw ValidationError("n_trajectories: must be non-negative");
  std::vector<std::uint64_t> seeds(static_cast<std::size_t>(n_trajectories));
  for (int i = 0; i < n_trajectories; ++i) seeds[i] = derive_seed(master_seed, static_cast<std::uint64_t>(i));

  const double bytes = 16.0 * static_cast<double>(sim.spec().dim()) * n_trajectories;
  if (sim.records_determine_state() && (sim.schedule().stop_on_violation || bytes <= 256.0 * (1 << 20)))
    return DpsEnsembleEngine(sim).run(seeds);

  std::vector<TrajectoryResult> out(seeds.size());
  parallel_for(n_trajectories, workers, [&](int i) { out[i] = sim.run(seeds[i]); });
  return out;
}

}  // namespace zenolgt
