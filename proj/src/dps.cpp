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

#include "zenolgt/dps.hpp"

#include <algorithm>
#include <cmath>

#include "dps_detail.hpp"

namespace zenolgt {

namespace {

const cplx kMinusI(0.0, -1.0);

LocalGate gate_from_term(const LocalTerm& t, double dt) {
  return LocalGate(t.first_site, t.n_sites, expm_small(kMinusI * dt * t.matrix));
}

}  // namespace

void ScheduleParams::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ValidationError("schedule.dt: must be positive");
  if (n_steps < 0) throw ValidationError("schedule.n_steps: must be non-negative");
  if (measure_every < 1) throw ValidationError("schedule.measure_every: must be at least 1");
  if (!(measure_probability > 0.0 && measure_probability <= 1.0))
    throw ValidationError("schedule.measure_probability: must lie in (0, 1]");
}

double NoiseSpec::sigma_for_fidelity(double fidelity) {
  if (!(fidelity > 0.0 && fidelity <= 1.0)) throw ValidationError("noise.fidelity: must lie in (0, 1]");
  return std::sqrt((1.0 - fidelity) / 3.0);
}

void NoiseSpec::validate() const {
  if (!(p_err >= 0.0 && p_err <= 1.0)) throw ValidationError("noise.p_err: must lie in [0, 1]");
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw ValidationError("noise.sigma: must be non-negative");
  if (!(fidelity() > 0.0)) throw ValidationError("noise.sigma: implied fidelity must be positive");
}

GateSequence build_trotter_step(const ModelSpec& spec, double dt) {
  if (!(dt > 0.0)) throw ValidationError("build_trotter_step: dt must be positive");
  GateSequence seq;
  seq.register_dims = spec.register_dims();
  const auto terms = hamiltonian_terms(spec);
  for (int parity : {0, 1})
    for (const auto& t : terms)
      if (t.kind == TermKind::Hopping && t.index % 2 == parity && t.matrix.cwiseAbs().maxCoeff() > 0.0)
        seq.gates.emplace_back(gate_from_term(t, dt));
  const Eigen::VectorXd diag = field_and_mass_diagonal(spec);
  if (diag.cwiseAbs().maxCoeff() > 0.0) {
    VectorXc phases(diag.size());
    for (Eigen::Index i = 0; i < diag.size(); ++i) phases(i) = std::polar(1.0, -dt * diag(i));
    seq.gates.emplace_back(DiagonalGate{std::move(phases)});
  }
  for (TermKind kind : {TermKind::FieldError, TermKind::HoppingError})
    for (const auto& t : error_terms(spec))
      if (t.kind == kind) seq.gates.emplace_back(gate_from_term(t, dt));
  return seq;
}

void apply_step(const GateSequence& step, VectorXc& amps) { apply_gates(amps, step.register_dims, step.gates); }

std::vector<double> label_probabilities(const VectorXc& amps, const std::vector<std::uint8_t>& labels,
                                        int n_labels) {
  std::vector<double> p(static_cast<std::size_t>(n_labels), 0.0);
  for (Eigen::Index i = 0; i < amps.size(); ++i) p[labels[static_cast<std::size_t>(i)]] += std::norm(amps(i));
  double total = 0.0;
  for (double x : p) total += x;
  if (std::abs(total - 1.0) > 1e-8) throw NumericalError("measurement probabilities do not sum to 1");
  return p;
}

int select_label(const std::vector<double>& probs, double u) {
  double total = 0.0;
  for (double x : probs) total += x;
  double acc = 0.0;
  int last = -1;
  for (std::size_t k = 0; k < probs.size(); ++k) {
    if (probs[k] <= 0.0) continue;
    last = static_cast<int>(k);
    acc += probs[k];
    if (u * total < acc) return last;
  }
  if (last < 0) throw NumericalError("select_label: all probabilities vanish");
  return last;
}

void project_onto_label(VectorXc& amps, const std::vector<std::uint8_t>& labels, int label, double probability) {
  if (!(probability > 0.0)) throw NumericalError("project_onto_label: zero-probability outcome");
  const double scale = 1.0 / std::sqrt(probability);
  const auto l = static_cast<std::uint8_t>(label);
  for (Eigen::Index i = 0; i < amps.size(); ++i)
    amps(i) = (labels[static_cast<std::size_t>(i)] == l) ? amps(i) * scale : cplx(0.0);
}

int measure_charge_inplace(VectorXc& amps, const GaugeChargeSet& charges, int n, Rng& rng) {
  const auto& labels = charges.labels.at(n);
  const auto probs = label_probabilities(amps, labels, static_cast<int>(charges.eigenvalues[n].size()));
  const int k = select_label(probs, rng.uniform());
  project_onto_label(amps, labels, k, probs[k]);
  return k;
}

std::pair<int, StateVector> measure_charge(const StateVector& psi, const GaugeChargeSet& charges, int n, Rng& rng) {
  StateVector out = psi;
  const int k = measure_charge_inplace(out.amplitudes, charges, n, rng);
  return {k, std::move(out)};
}

void noisy_premeasurement_rotation(VectorXc& amps, const std::vector<int>& register_dims,
                                   const std::vector<int>& support, double sigma, Rng& rng) {
  if (sigma < 0.0) throw ValidationError("noisy rotation: sigma must be non-negative");
  if (sigma == 0.0) return;
  for (int site : support) {
    const int d = register_dims.at(site);
    const double xi = rng.normal(sigma);
    const double eta = rng.normal(sigma);
    const MatrixXc u = expm_small(kMinusI * xi * ops::rotation_generator_z(d)) *
                       expm_small(kMinusI * eta * ops::rotation_generator_x(d));
    apply_local(amps, register_dims, LocalGate(site, 1, u));
  }
}

std::vector<int> apply_bitflip_channel(VectorXc& amps, const std::vector<int>& register_dims, double p_err,
                                       Rng& rng) {
  if (!(p_err >= 0.0 && p_err <= 1.0)) throw ValidationError("bit-flip channel: p_err must lie in [0, 1]");
  std::vector<int> flipped;
  if (p_err == 0.0) return flipped;
  for (int d : register_dims)
    if (d != 2) throw ValidationError("bit-flip channel: only defined for qubit registers");
  static const LocalGate kX0(0, 1, ops::sigma_x());
  for (int s = 0; s < static_cast<int>(register_dims.size()); ++s) {
    if (rng.uniform() < p_err) {
      LocalGate x = kX0;
      x.first_site = s;
      apply_local(amps, register_dims, x);
      flipped.push_back(s);
    }
  }
  return flipped;
}

Correction decode_syndrome(const std::vector<int>& syndrome) {
  Correction c;
  std::vector<int> s = syndrome;
  std::sort(s.begin(), s.end());
  std::size_t i = 0;
  while (i < s.size()) {
    std::size_t j = i;
    while (j + 1 < s.size() && s[j + 1] == s[j] + 1) ++j;
    const std::size_t run = j - i + 1;
    if (run == 1) {
      c.flipped_sites.push_back(matter_site(s[i]));
    } else if (run == 2) {
      c.flipped_sites.push_back(link_site(s[i]));
    } else {
      c.status = DecodeStatus::Discarded;
      c.flipped_sites.clear();
      return c;
    }
    i = j + 1;
  }
  return c;
}

Correction decode_and_correct(const std::vector<int>& syndrome, VectorXc& amps,
                              const std::vector<int>& register_dims) {
  Correction c = decode_syndrome(syndrome);
  if (c.status == DecodeStatus::Corrected)
    for (int site : c.flipped_sites) apply_local(amps, register_dims, LocalGate(site, 1, ops::sigma_x()));
  return c;
}

double survival_estimate(double lambda, double dt_m, int n_charges, double t, double fidelity) {
  if (!(dt_m > 0.0) || n_charges < 0 || t < 0.0 || !(fidelity > 0.0 && fidelity <= 1.0))
    throw ValidationError("survival_estimate: invalid arguments");
  return std::exp(-(lambda * lambda * dt_m + (1.0 - fidelity) / dt_m) * n_charges * t);
}

DpsSimulator::DpsSimulator(const ModelSpec& spec, const ScheduleParams& schedule, const NoiseSpec& noise)
    : DpsSimulator(spec, schedule, noise, prepare_meson_state(spec).first, prepare_meson_state(spec).second) {}

DpsSimulator::DpsSimulator(const ModelSpec& spec, const ScheduleParams& schedule, const NoiseSpec& noise,
                           const StateVector& initial, const TargetSector& target)
    : spec_(spec), schedule_(schedule), noise_(noise), ctx_(spec, build_gauss_charges(spec), target),
      step_(build_trotter_step(spec, schedule.dt)), initial_(initial.amplitudes) {
  spec_.validate();
  schedule_.validate();
  noise_.validate();
  if (schedule_.correction_enabled && spec_.group != Group::Z2)
    throw ValidationError("schedule.correction_enabled: error correction is only supported for Z2");
  if (noise_.p_err > 0.0 && spec_.group != Group::Z2)
    throw ValidationError("noise.p_err: the bit-flip channel is only supported for Z2");
  if (initial.dim() != static_cast<Eigen::Index>(spec_.dim()))
    throw DimensionError("DpsSimulator: initial state dimension mismatch");
}

bool DpsSimulator::records_determine_state() const { return noise_.p_err == 0.0 && noise_.sigma == 0.0; }

bool DpsSimulator::is_measurement_step(int step) const {
  return schedule_.measure_enabled && step % schedule_.measure_every == 0;
}

void DpsSimulator::finish(TrajectoryResult& r, const VectorXc& amps) const {
  if (reference_) r.final_fidelity = std::norm(reference_->dot(amps));
}

namespace detail {

LayerOutcome resolve_layer(const DpsSimulator& sim, VectorXc& amps, const std::vector<int>& syndrome,
                           bool already_discarded) {
  LayerOutcome o;
  if (syndrome.empty()) return o;
  if (!sim.schedule().correction_enabled || already_discarded) {
    o.violation = true;
    return o;
  }
  const Correction c = decode_and_correct(syndrome, amps, sim.context().register_dims);
  if (c.status == DecodeStatus::Discarded) {
    o.violation = true;
    o.discarded = true;
    return o;
  }
  const auto& ctx = sim.context();
  for (int n : syndrome)
    if (std::abs(probability_of_label(amps, ctx.charges.labels[n], ctx.target.labels[n]) - 1.0) > 1e-8)
      o.verify_failed = true;
  return o;
}

void record_layer(TrajectoryResult& r, const LayerOutcome& o, int step) {
  if (o.discarded) {
    r.discarded_ambiguous = true;
    r.corrected_ok = false;
  }
  if (o.verify_failed) r.corrected_ok = false;
  if (o.violation && !r.record.violation_step) {
    r.record.violation_step = step;
    r.survived = false;
  }
}

}  // namespace detail

TrajectoryResult DpsSimulator::run(std::uint64_t seed) const {
  TrajectoryResult r;
  r.seed = seed;
  Rng rng(seed);
  VectorXc psi = initial_;
  const auto& dims = ctx_.register_dims;
  const int n_charges = ctx_.charges.size();
  const double q = schedule_.measure_probability;
  r.snapshots.push_back(observables(psi, ctx_, 0.0));
  for (int step = 1; step <= schedule_.n_steps; ++step) {
    apply_step(step_, psi);
    if (noise_.p_err > 0.0)
      for (int site : apply_bitflip_channel(psi, dims, noise_.p_err, rng)) r.flips_injected.push_back({step, site});
    if (is_measurement_step(step)) {
      std::vector<int> syndrome;
      for (int n = 0; n < n_charges; ++n) {
        if (q < 1.0 && rng.uniform() >= q) continue;
        noisy_premeasurement_rotation(psi, dims, ctx_.charges.supports[n], noise_.sigma, rng);
        const int k = measure_charge_inplace(psi, ctx_.charges, n, rng);
        r.record.outcomes.push_back({step, n, k});
        if (k != ctx_.target.labels[n]) syndrome.push_back(n);
      }
      detail::record_layer(r, detail::resolve_layer(*this, psi, syndrome, r.discarded_ambiguous), step);
    }
    r.snapshots.push_back(observables(psi, ctx_, step * schedule_.dt));
    if (schedule_.stop_on_violation && !r.survived) break;
  }
  finish(r, psi);
  return r;
}

TrajectoryResult run_dps_trajectory(const ModelSpec& spec, const ScheduleParams& schedule, const NoiseSpec& noise,
                                    std::uint64_t seed) {
  return DpsSimulator(spec, schedule, noise).run(seed);
}

std::vector<ObservableSnapshot> run_ideal_trotter(const ModelSpec& spec, double dt, int n_steps,
                                                  VectorXc* final_state) {
  ModelSpec ideal = spec;
  ideal.lambda1 = 0.0;
  ideal.lambda2 = 0.0;
  auto charges = build_gauss_charges(ideal);
  auto [psi, target] = prepare_meson_state(ideal, charges);
  ObservableContext ctx(ideal, std::move(charges), std::move(target));
  const GateSequence step = build_trotter_step(ideal, dt);
  VectorXc amps = psi.amplitudes;
  std::vector<ObservableSnapshot> out;
  out.push_back(observables(amps, ctx, 0.0));
  for (int s = 1; s <= n_steps; ++s) {
    apply_step(step, amps);
    out.push_back(observables(amps, ctx, s * dt));
  }
  if (final_state) *final_state = amps;
  return out;
}

}  // namespace zenolgt
