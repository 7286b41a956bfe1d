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

#include "zenolgt/qjump.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

namespace zenolgt {

namespace {

constexpr double kMaxIntegratorStep = 0.1;
constexpr double kNormMismatchTol = 1e-6;

JumpSampler resolve(const JumpConfig& c) {
  if (c.sampler != JumpSampler::Auto) return c.sampler;
  return c.spec.group == Group::Z2 ? JumpSampler::Poisson : JumpSampler::WaitingTime;
}

bool unit_weights(const std::vector<Eigen::VectorXd>& w) {
  for (const auto& v : w)
    if ((v.array() - 1.0).abs().maxCoeff() > 1e-12) return false;
  return true;
}

}  // namespace

int JumpConfig::n_integrator_steps() const { return static_cast<int>(std::llround(t_final / dt_int)); }

int JumpConfig::output_stride() const { return std::max(1, n_integrator_steps() / n_output); }

std::vector<double> JumpConfig::output_times() const {
  const int stride = output_stride();
  std::vector<double> t;
  for (int k = 0; k <= n_integrator_steps(); k += stride) t.push_back(k * dt_int);
  return t;
}

void JumpConfig::validate() const {
  spec.validate();
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw ValidationError("jump.gamma: must be non-negative");
  if (!(dt_int > 0.0) || dt_int > kMaxIntegratorStep)
    throw ValidationError("jump.dt_int: must lie in (0, 0.1]");
  if (!(t_final > 0.0) || !std::isfinite(t_final)) throw ValidationError("jump.t_final: must be positive");
  if (std::abs(n_integrator_steps() * dt_int - t_final) > 1e-9 * std::max(1.0, t_final))
    throw ValidationError("jump.t_final: must be an integer multiple of dt_int");
  if (n_output < 1) throw ValidationError("jump.n_output: must be at least 1");
  if (resolve(*this) == JumpSampler::WaitingTime) {
    if (spec.n_matter * gamma * dt_int > 0.1 + 1e-12)
      throw ValidationError("jump.dt_int: N * gamma * dt_int must not exceed 0.1");
    if (spec.dim() > kJumpDenseCap)
      throw DimensionError("jump: waiting-time sampler needs a dense propagator, dimension exceeds 1024");
  }
}

MatrixXc effective_hamiltonian(const ModelSpec& spec, double gamma) {
  spec.validate();
  if (spec.dim() > kDefaultEigCap) throw DimensionError("effective_hamiltonian: dimension exceeds dense cap");
  MatrixXc h(build_total_hamiltonian(spec));
  const auto charges = build_gauss_charges(spec);
  Eigen::VectorXd decay = Eigen::VectorXd::Zero(h.rows());
  for (const auto& g : charges.diagonals) decay += g.cwiseAbs2();
  h.diagonal() += cplx(0.0, -0.5 * gamma) * decay.cast<cplx>();
  return h;
}

JumpSimulator::JumpSimulator(const JumpConfig& config)
    : JumpSimulator(config, prepare_meson_state(config.spec).first, prepare_meson_state(config.spec).second) {}

JumpSimulator::JumpSimulator(const JumpConfig& config, const StateVector& initial, const TargetSector& target)
    : config_(config), ctx_(config.spec, build_gauss_charges(config.spec), target), sampler_(resolve(config)),
      initial_(initial.amplitudes) {
  config_.validate();
  if (initial.dim() != static_cast<Eigen::Index>(config_.spec.dim()))
    throw DimensionError("JumpSimulator: initial state dimension mismatch");
  times_ = config_.output_times();
  for (const auto& g : ctx_.charges.diagonals) jump_weights_.push_back(g.cwiseAbs2());
  scalar_decay_ = unit_weights(jump_weights_);
  if (sampler_ == JumpSampler::Poisson) {
    if (!scalar_decay_) throw ValidationError("jump.sampler: Poisson sampler requires unitary charges");
    if (config_.spec.dim() <= kJumpDenseCap) {
      Eigen::SelfAdjointEigenSolver<MatrixXc> es(MatrixXc(build_total_hamiltonian(config_.spec)));
      if (es.info() != Eigen::Success) throw SolverError("JumpSimulator: Hermitian eigensolver failed");
      eigvecs_ = es.eigenvectors();
      energies_ = es.eigenvalues();
    }
  } else {
    step_propagator_ = expm_dense(MatrixXc(cplx(0.0, -config_.dt_int) * effective_hamiltonian(config_.spec, config_.gamma)),
                                  kJumpDenseCap);
  }
}

void JumpSimulator::propagate_unitary(VectorXc& amps, double tau) const {
  if (tau <= 0.0) return;
  if (eigvecs_.size() > 0) {
    VectorXc c = eigvecs_.adjoint() * amps;
    for (Eigen::Index i = 0; i < c.size(); ++i) c(i) *= std::polar(1.0, -energies_(i) * tau);
    amps = eigvecs_ * c;
    return;
  }
  const int m = std::max(1, static_cast<int>(std::ceil(tau / config_.dt_int - 1e-9)));
  const GateSequence step = build_trotter_step(config_.spec, tau / m);
  for (int i = 0; i < m; ++i) apply_step(step, amps);
}

void JumpSimulator::apply_jump(VectorXc& amps, int n) const {
  amps = amps.cwiseProduct(ctx_.charges.diagonals[n]);
  const double norm = amps.norm();
  if (!(norm > 0.0)) throw NumericalError("jump: selected channel annihilates the state");
  amps /= norm;
}

TrajectoryResult JumpSimulator::run(std::uint64_t seed) const {
  return sampler_ == JumpSampler::Poisson ? run_poisson(seed) : run_waiting_time(seed);
}

TrajectoryResult JumpSimulator::run_poisson(std::uint64_t seed) const {
  TrajectoryResult r;
  r.seed = seed;
  Rng rng(seed);
  const int n_ch = ctx_.charges.size();
  const double rate = n_ch * config_.gamma;
  VectorXc psi = initial_;
  double t = 0.0;
  double next_jump = rate > 0.0 ? rng.exponential(rate) : std::numeric_limits<double>::infinity();
  r.snapshots.push_back(observables(psi, ctx_, 0.0));
  for (std::size_t j = 1; j < times_.size(); ++j) {
    const double t_out = times_[j];
    while (next_jump <= t_out) {
      propagate_unitary(psi, next_jump - t);
      t = next_jump;
      apply_jump(psi, static_cast<int>(rng.index(static_cast<std::uint64_t>(n_ch))));
      ++r.n_jumps;
      next_jump += rng.exponential(rate);
    }
    propagate_unitary(psi, t_out - t);
    t = t_out;
    r.snapshots.push_back(observables(psi, ctx_, t));
  }
  return r;
}

TrajectoryResult JumpSimulator::run_waiting_time(std::uint64_t seed) const {
  TrajectoryResult r;
  r.seed = seed;
  Rng rng(seed);
  const double dt = config_.dt_int;
  const int n_steps = config_.n_integrator_steps();
  const int stride = config_.output_stride();
  const double scalar_ratio = std::exp(-ctx_.charges.size() * config_.gamma * dt);
  VectorXc psi = initial_;
  double threshold = rng.uniform();
  r.snapshots.push_back(observables(psi, ctx_, 0.0));
  for (int k = 1; k <= n_steps; ++k) {
    const double before = psi.squaredNorm();
    psi = step_propagator_ * psi;
    const double norm2 = psi.squaredNorm();
    if (!(norm2 > 1e-300)) throw NumericalError("jump: norm underflow");
    if (norm2 > before * (1.0 + 1e-12)) throw NumericalError("jump: norm increased between jumps");
    if (scalar_decay_ && std::abs(norm2 / before - scalar_ratio) > kNormMismatchTol)
      throw NumericalError("jump: integrator step too large, norm decay deviates from the analytic rate");
    if (norm2 <= threshold) {
      std::vector<double> w(jump_weights_.size());
      for (std::size_t n = 0; n < w.size(); ++n) w[n] = psi.cwiseAbs2().dot(jump_weights_[n]);
      apply_jump(psi, select_label(w, rng.uniform()));
      ++r.n_jumps;
      threshold = rng.uniform();
    }
    if (k % stride == 0) r.snapshots.push_back(observables(VectorXc(psi / psi.norm()), ctx_, k * dt));
  }
  return r;
}

std::vector<TrajectoryResult> run_jump_ensemble(const JumpSimulator& sim, std::uint64_t master_seed,
                                                int n_trajectories, int workers) {
  if (n_trajectories < 0) throw ValidationError("n_trajectories: must be non-negative");
  std::vector<TrajectoryResult> out(static_cast<std::size_t>(n_trajectories));
  parallel_for(n_trajectories, workers,
               [&](int i) { out[i] = sim.run(derive_seed(master_seed, static_cast<std::uint64_t>(i))); });
  return out;
}

DriftCurve gauge_drift_curve(const std::vector<TrajectoryResult>& ensemble, double gamma, double lambda) {
  if (ensemble.empty()) throw ValidationError("gauge_drift_curve: empty ensemble");
  if (!(lambda > 0.0) || !(gamma > lambda)) throw ValidationError("gauge_drift_curve: requires gamma > lambda > 0");
  const std::size_t n_t = ensemble.front().snapshots.size();
  for (const auto& r : ensemble)
    if (r.snapshots.size() != n_t) throw ValidationError("gauge_drift_curve: trajectories on different grids");
  DriftCurve c;
  const double m = static_cast<double>(ensemble.size());
  for (std::size_t i = 0; i < n_t; ++i) {
    double s = 0.0;
    for (const auto& r : ensemble) s += r.snapshots[i].gauge_violation;
    const double mean = s / m;
    double ss = 0.0;
    for (const auto& r : ensemble) ss += (r.snapshots[i].gauge_violation - mean) * (r.snapshots[i].gauge_violation - mean);
    const double var = m > 1.0 ? ss / (m - 1.0) : 0.0;
    c.rescaled_time.push_back(ensemble.front().snapshots[i].time * lambda / gamma);
    c.mean_violation.push_back(mean);
    c.std_error.push_back(std::sqrt(var / m));
  }
  return c;
}

double interpolate(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
  if (xs.empty() || xs.size() != ys.size()) throw ValidationError("interpolate: mismatched samples");
  const double tol = 1e-12 * std::max(1.0, std::abs(xs.back()));
  if (x < xs.front() - tol || x > xs.back() + tol) throw ValidationError("interpolate: x outside sampled range");
  auto it = std::lower_bound(xs.begin(), xs.end(), x);
  if (it == xs.begin()) return ys.front();
  if (it == xs.end()) return ys.back();
  const std::size_t j = static_cast<std::size_t>(it - xs.begin());
  const double w = (x - xs[j - 1]) / (xs[j] - xs[j - 1]);
  return (1.0 - w) * ys[j - 1] + w * ys[j];
}

}  // namespace zenolgt
