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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "zenolgt/dps.hpp"

namespace zenolgt {
namespace {

ModelSpec make(Group g, int n, double lam = 0.0) {
  ModelSpec s;
  s.group = g;
  s.n_matter = n;
  s.lambda1 = lam;
  s.lambda2 = lam;
  if (g != Group::Z2) s.mu = 0.1;
  return s;
}

MatrixXc step_matrix(const GateSequence& seq) {
  const auto d = static_cast<Eigen::Index>(register_dimension(seq.register_dims));
  MatrixXc u(d, d);
  for (Eigen::Index c = 0; c < d; ++c) {
    VectorXc e = VectorXc::Unit(d, c);
    apply_gates(e, seq.register_dims, seq.gates);
    u.col(c) = e;
  }
  return u;
}

void expect_same(const TrajectoryResult& a, const TrajectoryResult& b) {
  ASSERT_EQ(a.seed, b.seed);
  ASSERT_EQ(a.record.outcomes.size(), b.record.outcomes.size());
  for (std::size_t i = 0; i < a.record.outcomes.size(); ++i) {
    EXPECT_EQ(a.record.outcomes[i].step, b.record.outcomes[i].step);
    EXPECT_EQ(a.record.outcomes[i].charge, b.record.outcomes[i].charge);
    EXPECT_EQ(a.record.outcomes[i].label, b.record.outcomes[i].label);
  }
  EXPECT_EQ(a.record.violation_step, b.record.violation_step);
  EXPECT_EQ(a.survived, b.survived);
  ASSERT_EQ(a.snapshots.size(), b.snapshots.size());
  for (std::size_t i = 0; i < a.snapshots.size(); ++i) {
    EXPECT_EQ(a.snapshots[i].time, b.snapshots[i].time);
    EXPECT_EQ(a.snapshots[i].excitation, b.snapshots[i].excitation);
    EXPECT_EQ(a.snapshots[i].gauge_violation, b.snapshots[i].gauge_violation);
  }
}

TEST(Trotter, StepIsUnitary) {
  for (Group g : {Group::Z2, Group::Z3, Group::U1_S1}) {
    ModelSpec s = make(g, 2, 0.2);
    MatrixXc u = step_matrix(build_trotter_step(s, 0.3));
    EXPECT_LT(max_abs(MatrixXc(u.adjoint() * u - MatrixXc::Identity(u.rows(), u.cols()))), 1e-12);
  }
}

TEST(Trotter, LocalErrorIsSecondOrder) {
  for (Group g : {Group::Z2, Group::Z3}) {
    ModelSpec s = make(g, 3, 0.2);
    MatrixXc h(build_total_hamiltonian(s));
    double prev = 0.0;
    for (double dt : {0.08, 0.04, 0.02}) {
      MatrixXc exact = expm_dense(MatrixXc(cplx(0, -dt) * h), 4096);
      const double err = (step_matrix(build_trotter_step(s, dt)) - exact).norm();
      if (prev > 0.0) EXPECT_NEAR(prev / err, 4.0, 0.4);
      prev = err;
    }
  }
}

TEST(Trotter, ZeroLambdaHasNoErrorGates) {
  ModelSpec s = make(Group::Z2, 3);
  // bond 0, bond 1 and the diagonal layer
  EXPECT_EQ(build_trotter_step(s, 0.1).gates.size(), 3u);
}

TEST(Trotter, QuarterTurnLinkRotationFlipsLink) {
  ModelSpec s = make(Group::Z2, 2);
  s.J = 0.0;
  s.f = 0.0;
  s.lambda1 = 1.0;
  auto [psi, target] = prepare_meson_state(s);
  VectorXc a = psi.amplitudes;
  apply_step(build_trotter_step(s, std::numbers::pi / 2), a);
  auto digits = basis_digits(psi.register_dims, 0);
  for (Eigen::Index i = 0; i < psi.amplitudes.size(); ++i)
    if (std::abs(psi.amplitudes(i)) > 0.5) digits = basis_digits(psi.register_dims, static_cast<std::size_t>(i));
  digits[1] ^= 1;
  EXPECT_NEAR(std::abs(a(static_cast<Eigen::Index>(basis_index(psi.register_dims, digits)))), 1.0, 1e-12);
  EXPECT_NEAR(gauge_violation(a, build_gauss_charges(s), target), 1.0, 1e-12);
}

TEST(Trotter, IdealEvolutionStaysInSector) {
  auto snaps = run_ideal_trotter(make(Group::Z2, 3, 0.3), 0.1, 30);
  ASSERT_EQ(snaps.size(), 31u);
  for (const auto& sn : snaps) EXPECT_LT(sn.gauge_violation, 1e-12);
  EXPECT_NEAR(snaps.back().time, 3.0, 1e-12);
}

TEST(Measurement, EqualSuperpositionProbabilities) {
  ModelSpec s = make(Group::Z2, 2);
  auto charges = build_gauss_charges(s);
  auto [psi, target] = prepare_meson_state(s, charges);
  VectorXc flipped = psi.amplitudes;
  apply_local(flipped, psi.register_dims, LocalGate(1, 1, ops::sigma_x()));
  VectorXc mix = (psi.amplitudes + flipped) / std::sqrt(2.0);
  auto p = label_probabilities(mix, charges.labels[0], 2);
  EXPECT_NEAR(p[0], 0.5, 1e-12);
  EXPECT_NEAR(p[1], 0.5, 1e-12);
  Rng rng(3);
  const int k = measure_charge_inplace(mix, charges, 0, rng);
  EXPECT_NEAR(mix.norm(), 1.0, 1e-12);
  EXPECT_NEAR(probability_of_label(mix, charges.labels[0], k), 1.0, 1e-12);
  const int k1 = (k == target.labels[0]) ? target.labels[1] : 1 - target.labels[1];
  EXPECT_NEAR(probability_of_label(mix, charges.labels[1], k1), 1.0, 1e-12);
}

TEST(Measurement, RejectsUnnormalizedState) {
  ModelSpec s = make(Group::Z2, 2);
  auto charges = build_gauss_charges(s);
  VectorXc a = 2.0 * prepare_meson_state(s, charges).first.amplitudes;
  EXPECT_THROW(label_probabilities(a, charges.labels[0], 2), NumericalError);
}

TEST(Measurement, SelectLabelSkipsZeroWeights) {
  EXPECT_EQ(select_label({0.0, 1.0, 0.0}, 0.0), 1);
  EXPECT_EQ(select_label({0.0, 1.0, 0.0}, 0.999999), 1);
  EXPECT_EQ(select_label({0.25, 0.75}, 0.2), 0);
  EXPECT_EQ(select_label({0.25, 0.75}, 0.3), 1);
}

TEST(Measurement, ProbabilitiesSumToOneForAllGroups) {
  for (Group g : {Group::Z2, Group::Z3, Group::U1_S1}) {
    ModelSpec s = make(g, 3, 0.4);
    auto charges = build_gauss_charges(s);
    VectorXc a = prepare_meson_state(s, charges).first.amplitudes;
    auto step = build_trotter_step(s, 0.5);
    for (int i = 0; i < 5; ++i) apply_step(step, a);
    for (int n = 0; n < charges.size(); ++n) {
      auto p = label_probabilities(a, charges.labels[n], static_cast<int>(charges.eigenvalues[n].size()));
      double t = 0.0;
      for (double x : p) {
        EXPECT_GE(x, 0.0);
        t += x;
      }
      EXPECT_NEAR(t, 1.0, 1e-10);
    }
  }
}

TEST(NoisyRotation, ZeroSigmaIsIdentityAndNormIsKept) {
  ModelSpec s = make(Group::Z3, 2);
  auto charges = build_gauss_charges(s);
  VectorXc a = prepare_meson_state(s, charges).first.amplitudes;
  VectorXc b = a;
  Rng rng(5);
  noisy_premeasurement_rotation(b, s.register_dims(), charges.supports[0], 0.0, rng);
  EXPECT_EQ((a - b).norm(), 0.0);
  noisy_premeasurement_rotation(b, s.register_dims(), charges.supports[0], 0.1, rng);
  EXPECT_NEAR(b.norm(), 1.0, 1e-12);
  EXPECT_GT((a - b).norm(), 0.0);
}

TEST(NoisyRotation, FidelityRelation) {
  EXPECT_NEAR(NoiseSpec::sigma_for_fidelity(0.97), 0.1, 1e-12);
  NoiseSpec n;
  n.sigma = 0.1;
  EXPECT_NEAR(n.fidelity(), 0.97, 1e-12);
}

TEST(Decoder, IsolatedChargeFlipsMatter) {
  auto c = decode_syndrome({2});
  EXPECT_EQ(c.status, DecodeStatus::Corrected);
  EXPECT_EQ(c.flipped_sites, std::vector<int>{4});
}

TEST(Decoder, AdjacentPairFlipsLink) {
  auto c = decode_syndrome({2, 3});
  EXPECT_EQ(c.status, DecodeStatus::Corrected);
  EXPECT_EQ(c.flipped_sites, std::vector<int>{5});
}

TEST(Decoder, RunOfThreeIsDiscarded) {
  auto c = decode_syndrome({1, 2, 3});
  EXPECT_EQ(c.status, DecodeStatus::Discarded);
  EXPECT_TRUE(c.flipped_sites.empty());
}

TEST(Decoder, MixedSyndrome) {
  auto c = decode_syndrome({3, 0, 4});
  EXPECT_EQ(c.status, DecodeStatus::Corrected);
  EXPECT_EQ(c.flipped_sites, (std::vector<int>{0, 7}));
  EXPECT_TRUE(decode_syndrome({}).flipped_sites.empty());
}

TEST(Decoder, UndoesSingleFlipsOnMeson) {
  ModelSpec s = make(Group::Z2, 5);
  auto charges = build_gauss_charges(s);
  auto [psi, target] = prepare_meson_state(s, charges);
  for (int site = 0; site < s.n_sites(); ++site) {
    VectorXc a = psi.amplitudes;
    apply_local(a, psi.register_dims, LocalGate(site, 1, ops::sigma_x()));
    std::vector<int> syndrome;
    for (int n = 0; n < charges.size(); ++n)
      if (probability_of_label(a, charges.labels[n], target.labels[n]) < 0.5) syndrome.push_back(n);
    auto c = decode_and_correct(syndrome, a, psi.register_dims);
    EXPECT_EQ(c.status, DecodeStatus::Corrected);
    EXPECT_LT((a - psi.amplitudes).norm(), 1e-14) << "site " << site;
  }
}

// Exact failure probability of one flip-and-correct round on an open Z2 chain: sum over
// all flip patterns that the run-length decoder discards or maps to a different pattern.
double exact_round_failure(int n_matter, double p) {
  const int sites = 2 * n_matter - 1;
  double q = 0.0;
  for (int mask = 0; mask < (1 << sites); ++mask) {
    std::vector<int> charge(n_matter, 0);
    int k = 0;
    for (int s = 0; s < sites; ++s) {
      if (!(mask >> s & 1)) continue;
      ++k;
      if (s % 2 == 0) {
        charge[s / 2] ^= 1;
      } else {
        charge[(s - 1) / 2] ^= 1;
        charge[(s + 1) / 2] ^= 1;
      }
    }
    int correction = 0;
    bool discarded = false;
    for (int n = 0; n < n_matter;) {
      if (!charge[n]) {
        ++n;
        continue;
      }
      int len = 0;
      while (n + len < n_matter && charge[n + len]) ++len;
      if (len == 1) correction |= 1 << (2 * n);
      else if (len == 2) correction |= 1 << (2 * n + 1);
      else discarded = true;
      n += len;
    }
    if (discarded || correction != mask) q += std::pow(p, k) * std::pow(1.0 - p, sites - k);
  }
  return q;
}

TEST(Correction, FailureRateMatchesDecoderCombinatorics) {
  const int n_matter = 4;
  const double p = 0.05;
  ScheduleParams sch;
  sch.dt = 0.25;
  sch.n_steps = 10;
  sch.correction_enabled = true;
  NoiseSpec noise;
  noise.p_err = p;
  const ModelSpec s = make(Group::Z2, n_matter);
  DpsSimulator sim(s, sch, noise);
  VectorXc ref;
  run_ideal_trotter(s, sch.dt, sch.n_steps, &ref);
  sim.set_reference_final_state(ref);
  const int runs = 3000;
  int failed = 0;
  for (const auto& r : run_dps_ensemble(sim, 4242, runs))
    if (r.discarded_ambiguous || *r.final_fidelity < 1.0 - 1e-6) ++failed;
  const double expected = 1.0 - std::pow(1.0 - exact_round_failure(n_matter, p), sch.n_steps);
  const double observed = static_cast<double>(failed) / runs;
  EXPECT_NEAR(observed, expected, 3.0 * std::sqrt(expected * (1.0 - expected) / runs));
}

TEST(BitFlip, OnlyForQubits) {
  Rng rng(1);
  VectorXc a = VectorXc::Unit(18, 0);
  EXPECT_THROW(apply_bitflip_channel(a, {2, 3, 3}, 0.1, rng), ValidationError);
  VectorXc b = VectorXc::Unit(8, 0);
  EXPECT_TRUE(apply_bitflip_channel(b, {2, 2, 2}, 0.0, rng).empty());
  EXPECT_EQ(apply_bitflip_channel(b, {2, 2, 2}, 1.0, rng).size(), 3u);
  EXPECT_NEAR(std::abs(b(7)), 1.0, 1e-15);
}

TEST(Survival, EstimateFormula) {
  EXPECT_NEAR(survival_estimate(0.2, 0.25, 3, 10.0), std::exp(-0.04 * 0.25 * 30.0), 1e-14);
  EXPECT_NEAR(survival_estimate(0.2, 0.5, 2, 1.0, 0.97), std::exp(-(0.02 + 0.06) * 2.0), 1e-14);
  EXPECT_THROW(survival_estimate(0.2, 0.0, 2, 1.0), ValidationError);
}

TEST(Simulator, RejectsCorrectionOutsideZ2) {
  ScheduleParams sch;
  sch.correction_enabled = true;
  EXPECT_THROW(DpsSimulator(make(Group::Z3, 2), sch, NoiseSpec{}), ValidationError);
  ScheduleParams bad;
  bad.dt = 0.0;
  EXPECT_THROW(DpsSimulator(make(Group::Z2, 2), bad, NoiseSpec{}), ValidationError);
}

TEST(Simulator, NoErrorsMeansNoViolations) {
  ScheduleParams sch;
  sch.dt = 0.2;
  sch.n_steps = 20;
  DpsSimulator sim(make(Group::U1_S1, 2), sch, NoiseSpec{});
  auto r = sim.run(11);
  EXPECT_TRUE(r.survived);
  EXPECT_FALSE(r.record.violation_step.has_value());
  EXPECT_EQ(r.record.outcomes.size(), 40u);
  auto ideal = run_ideal_trotter(make(Group::U1_S1, 2), 0.2, 20);
  for (std::size_t i = 0; i < ideal.size(); ++i)
    for (std::size_t k = 0; k < ideal[i].excitation.size(); ++k)
      EXPECT_NEAR(r.snapshots[i].excitation[k], ideal[i].excitation[k], 1e-10);
}

TEST(Simulator, ReferenceFidelityIsOneWithoutErrors) {
  ModelSpec s = make(Group::Z2, 3);
  ScheduleParams sch;
  sch.dt = 0.5;
  sch.n_steps = 10;
  sch.correction_enabled = true;
  DpsSimulator sim(s, sch, NoiseSpec{});
  VectorXc ref;
  run_ideal_trotter(s, 0.5, 10, &ref);
  sim.set_reference_final_state(ref);
  auto r = sim.run(2);
  ASSERT_TRUE(r.final_fidelity.has_value());
  EXPECT_NEAR(*r.final_fidelity, 1.0, 1e-12);
  EXPECT_TRUE(r.corrected_ok);
}

TEST(Simulator, StopOnViolationTruncates) {
  ScheduleParams sch;
  sch.dt = 0.5;
  sch.n_steps = 200;
  sch.stop_on_violation = true;
  DpsSimulator sim(make(Group::Z2, 3, 0.4), sch, NoiseSpec{});
  auto r = sim.run(4);
  ASSERT_TRUE(r.record.violation_step.has_value());
  EXPECT_EQ(r.snapshots.size(), static_cast<std::size_t>(*r.record.violation_step + 1));
}

TEST(Simulator, SameSeedSameTrajectory) {
  ScheduleParams sch;
  sch.dt = 0.25;
  sch.n_steps = 30;
  NoiseSpec noise;
  noise.sigma = 0.05;
  DpsSimulator sim(make(Group::Z2, 3, 0.2), sch, noise);
  expect_same(sim.run(99), sim.run(99));
}

class EnsembleEquivalence : public ::testing::TestWithParam<std::tuple<double, bool>> {};

TEST_P(EnsembleEquivalence, GroupedMatchesIndividualRuns) {
  const auto [q, stop] = GetParam();
  ScheduleParams sch;
  sch.dt = 0.25;
  sch.n_steps = 30;
  sch.measure_probability = q;
  sch.stop_on_violation = stop;
  DpsSimulator sim(make(Group::Z2, 3, 0.3), sch, NoiseSpec{});
  ASSERT_TRUE(sim.records_determine_state());
  auto grouped = run_dps_ensemble(sim, 17, 40);
  ASSERT_EQ(grouped.size(), 40u);
  for (int i = 0; i < 40; ++i) expect_same(grouped[i], sim.run(derive_seed(17, i)));
}

INSTANTIATE_TEST_SUITE_P(Dilution, EnsembleEquivalence,
                         ::testing::Combine(::testing::Values(1.0, 0.3), ::testing::Bool()));

TEST(Ensemble, IndependentOfWorkers) {
  ScheduleParams sch;
  sch.dt = 0.25;
  sch.n_steps = 10;
  NoiseSpec noise;
  noise.sigma = 0.05;
  DpsSimulator sim(make(Group::Z3, 2, 0.2), sch, noise);
  auto a = run_dps_ensemble(sim, 5, 6, 1);
  auto b = run_dps_ensemble(sim, 5, 6, 3);
  for (int i = 0; i < 6; ++i) expect_same(a[i], b[i]);
}

}  // namespace
}  // namespace zenolgt
