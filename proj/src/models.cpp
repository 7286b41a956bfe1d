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

#include "zenolgt/models.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "zenolgt/local_kernels.hpp"

namespace zenolgt {

namespace {

const cplx kI(0.0, 1.0);

cplx omega(int k) { return std::polar(1.0, 2.0 * std::numbers::pi * k / 3.0); }

MatrixXc hc_sum(const MatrixXc& a) { return a + a.adjoint(); }

MatrixXc kron3(const MatrixXc& a, const MatrixXc& b, const MatrixXc& c) { return kron(kron(a, b), c); }

}  // namespace

std::string to_string(Group g) {
  switch (g) {
    case Group::Z2:
      return "Z2";
    case Group::Z3:
      return "Z3";
    case Group::U1_S1:
      return "U1_S1";
  }
  return "unknown";
}

Group group_from_string(const std::string& name) {
  if (name == "Z2") return Group::Z2;
  if (name == "Z3") return Group::Z3;
  if (name == "U1_S1" || name == "U1") return Group::U1_S1;
  throw ValidationError("model.group: unknown group '" + name + "'");
}

std::vector<int> ModelSpec::register_dims() const {
  std::vector<int> dims(static_cast<std::size_t>(n_sites()));
  for (int k = 0; k < n_sites(); ++k) dims[k] = (k % 2 == 0) ? 2 : link_dim();
  return dims;
}

void ModelSpec::validate() const {
  if (n_matter < 2) throw ValidationError("model.n_matter: must be at least 2");
  for (double v : {J, f, mu, lambda1, lambda2})
    if (!std::isfinite(v)) throw ValidationError("model: couplings must be finite");
  register_dimension(register_dims());
}

namespace ops {

MatrixXc identity(int d) { return MatrixXc::Identity(d, d); }

MatrixXc sigma_x() {
  MatrixXc m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

MatrixXc sigma_y() {
  MatrixXc m(2, 2);
  m << 0, -kI, kI, 0;
  return m;
}

MatrixXc sigma_z() {
  MatrixXc m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

MatrixXc sigma_plus() {
  MatrixXc m = MatrixXc::Zero(2, 2);
  m(0, 1) = 1.0;
  return m;
}

MatrixXc sigma_minus() { return sigma_plus().transpose(); }

MatrixXc clock() {
  MatrixXc m = MatrixXc::Zero(3, 3);
  for (int k = 0; k < 3; ++k) m(k, k) = omega(k);
  return m;
}

MatrixXc shift() {
  MatrixXc m = MatrixXc::Zero(3, 3);
  for (int k = 0; k < 3; ++k) m((k + 1) % 3, k) = 1.0;
  return m;
}

MatrixXc spin1_z() {
  MatrixXc m = MatrixXc::Zero(3, 3);
  m(0, 0) = -1.0;
  m(2, 2) = 1.0;
  return m;
}

MatrixXc spin1_raise() {
  MatrixXc m = MatrixXc::Zero(3, 3);
  m(1, 0) = 1.0;
  m(2, 1) = 1.0;
  return m;
}

MatrixXc link_rotation(Group g) {
  switch (g) {
    case Group::Z2:
      return sigma_x();
    case Group::Z3:
      return hc_sum(shift());
    case Group::U1_S1:
      return hc_sum(spin1_raise());
  }
  return {};
}

MatrixXc weyl_x(int d) {
  if (d == 2) return sigma_x();
  if (d == 3) return shift();
  throw DimensionError("weyl_x: unsupported local dimension");
}

MatrixXc weyl_z(int d) {
  if (d == 2) return sigma_z();
  if (d == 3) return clock();
  throw DimensionError("weyl_z: unsupported local dimension");
}

MatrixXc rotation_generator_x(int d) { return d == 2 ? sigma_x() : MatrixXc(0.5 * hc_sum(shift())); }

MatrixXc rotation_generator_z(int d) { return d == 2 ? sigma_z() : MatrixXc(0.5 * hc_sum(clock())); }

}  // namespace ops

std::vector<LocalTerm> hamiltonian_terms(const ModelSpec& spec) {
  spec.validate();
  const int n = spec.n_matter;
  std::vector<LocalTerm> terms;
  MatrixXc link_hop;
  MatrixXc field;
  switch (spec.group) {
    case Group::Z2:
      link_hop = ops::sigma_x();
      field = spec.f * ops::sigma_z();
      break;
    case Group::Z3:
      link_hop = ops::shift().adjoint();
      field = 0.5 * spec.f * hc_sum(ops::clock());
      break;
    case Group::U1_S1:
      link_hop = ops::spin1_raise();
      field = spec.f * ops::spin1_z() * ops::spin1_z();
      break;
  }
  const MatrixXc hop = spec.J * hc_sum(kron3(ops::sigma_plus(), link_hop, ops::sigma_minus()));
  for (int b = 0; b + 1 < n; ++b) terms.push_back({TermKind::Hopping, b, matter_site(b), 3, hop});
  for (int b = 0; b + 1 < n; ++b) terms.push_back({TermKind::Field, b, link_site(b), 1, field});
  for (int m = 0; m < n; ++m) {
    const double sign = (m % 2 == 0) ? 1.0 : -1.0;
    terms.push_back({TermKind::Mass, m, matter_site(m), 1, MatrixXc(0.5 * spec.mu * sign * ops::sigma_z())});
  }
  return terms;
}

std::vector<LocalTerm> error_terms(const ModelSpec& spec) {
  spec.validate();
  const int n = spec.n_matter;
  const int dl = spec.link_dim();
  std::vector<LocalTerm> terms;
  if (spec.lambda1 != 0.0) {
    const MatrixXc rot = spec.lambda1 * ops::link_rotation(spec.group);
    for (int b = 0; b + 1 < n; ++b) terms.push_back({TermKind::FieldError, b, link_site(b), 1, rot});
  }
  if (spec.lambda2 != 0.0) {
    const MatrixXc hop = spec.lambda2 * hc_sum(kron3(ops::sigma_plus(), ops::identity(dl), ops::sigma_minus()));
    for (int b = 0; b + 1 < n; ++b) terms.push_back({TermKind::HoppingError, b, matter_site(b), 3, hop});
  }
  return terms;
}

SparseOp assemble(const std::vector<LocalTerm>& terms, const std::vector<int>& register_dims) {
  const auto dim = static_cast<Eigen::Index>(register_dimension(register_dims));
  SparseOp h(dim, dim);
  for (const auto& t : terms) {
    std::vector<int> targets(static_cast<std::size_t>(t.n_sites));
    for (int k = 0; k < t.n_sites; ++k) targets[k] = t.first_site + k;
    h += embed(t.matrix, register_dims, targets);
  }
  prune(h);
  return h;
}

SparseOp build_hamiltonian(const ModelSpec& spec) {
  return assemble(hamiltonian_terms(spec), spec.register_dims());
}

SparseOp build_error_hamiltonian(const ModelSpec& spec) { return assemble(error_terms(spec), spec.register_dims()); }

SparseOp build_total_hamiltonian(const ModelSpec& spec) {
  auto terms = hamiltonian_terms(spec);
  auto err = error_terms(spec);
  terms.insert(terms.end(), err.begin(), err.end());
  return assemble(terms, spec.register_dims());
}

namespace {

Eigen::VectorXd diagonal_of_terms(const ModelSpec& spec, bool include_mass) {
  const auto dims = spec.register_dims();
  Eigen::VectorXd d = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(register_dimension(dims)));
  for (const auto& t : hamiltonian_terms(spec)) {
    if (t.kind == TermKind::Field || (include_mass && t.kind == TermKind::Mass)) {
      const Eigen::VectorXd local = t.matrix.diagonal().real();
      d += embed_diagonal(local, dims, t.first_site, t.n_sites).real();
    }
  }
  return d;
}

}  // namespace

SparseOp build_field_hamiltonian(const ModelSpec& spec) {
  std::vector<LocalTerm> terms;
  for (auto& t : hamiltonian_terms(spec))
    if (t.kind == TermKind::Field) terms.push_back(std::move(t));
  return assemble(terms, spec.register_dims());
}

Eigen::VectorXd field_diagonal(const ModelSpec& spec) { return diagonal_of_terms(spec, false); }

Eigen::VectorXd field_and_mass_diagonal(const ModelSpec& spec) { return diagonal_of_terms(spec, true); }

SparseOp GaugeChargeSet::charge(int n) const {
  const auto dim = diagonals.at(n).size();
  SparseOp g(dim, dim);
  std::vector<Eigen::Triplet<cplx>> t;
  t.reserve(static_cast<std::size_t>(dim));
  for (Eigen::Index i = 0; i < dim; ++i)
    if (std::abs(diagonals[n](i)) > kDropTolerance) t.emplace_back(i, i, diagonals[n](i));
  g.setFromTriplets(t.begin(), t.end());
  return g;
}

Eigen::VectorXd GaugeChargeSet::projector_diagonal(int n, int k) const {
  const auto& lab = labels.at(n);
  Eigen::VectorXd p(static_cast<Eigen::Index>(lab.size()));
  for (std::size_t i = 0; i < lab.size(); ++i) p(static_cast<Eigen::Index>(i)) = (lab[i] == k) ? 1.0 : 0.0;
  return p;
}

SparseOp GaugeChargeSet::projector(int n, int k) const {
  const auto& lab = labels.at(n);
  const auto dim = static_cast<Eigen::Index>(lab.size());
  SparseOp p(dim, dim);
  std::vector<Eigen::Triplet<cplx>> t;
  for (std::size_t i = 0; i < lab.size(); ++i)
    if (lab[i] == k) t.emplace_back(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i), 1.0);
  p.setFromTriplets(t.begin(), t.end());
  return p;
}

int GaugeChargeSet::label_of(int n, cplx value, double tol) const {
  const auto& ev = eigenvalues.at(n);
  for (std::size_t k = 0; k < ev.size(); ++k)
    if (std::abs(ev[k] - value) < tol) return static_cast<int>(k);
  return -1;
}

GaugeChargeSet build_gauss_charges(const ModelSpec& spec) {
  spec.validate();
  const int n_matter = spec.n_matter;
  const auto dims = spec.register_dims();
  const std::size_t dim = register_dimension(dims);
  GaugeChargeSet set;
  set.group = spec.group;
  set.register_dims = dims;
  set.diagonals.assign(n_matter, VectorXc(static_cast<Eigen::Index>(dim)));
  set.labels.assign(n_matter, std::vector<std::uint8_t>(dim));
  set.supports.resize(n_matter);
  for (int n = 0; n < n_matter; ++n) {
    if (n > 0) set.supports[n].push_back(link_site(n - 1));
    set.supports[n].push_back(matter_site(n));
    if (n + 1 < n_matter) set.supports[n].push_back(link_site(n));
  }

  std::vector<int> digits(dims.size(), 0);
  for (std::size_t i = 0; i < dim; ++i) {
    for (int n = 0; n < n_matter; ++n) {
      const double sz = digits[matter_site(n)] == 0 ? 1.0 : -1.0;
      const int left = n > 0 ? digits[link_site(n - 1)] : -1;
      const int right = n + 1 < n_matter ? digits[link_site(n)] : -1;
      cplx g;
      switch (spec.group) {
        case Group::Z2: {
          const double tl = left < 0 ? 1.0 : (left == 0 ? 1.0 : -1.0);
          const double tr = right < 0 ? 1.0 : (right == 0 ? 1.0 : -1.0);
          g = -tl * sz * tr;
          break;
        }
        case Group::Z3: {
          const int ml = left < 0 ? 0 : left;
          const int mr = right < 0 ? 0 : right;
          g = omega(ml - mr) * std::exp(-kI * (std::numbers::pi / 3.0) * (1.0 + sz));
          break;
        }
        case Group::U1_S1: {
          const double ml = left < 0 ? 0.0 : left - 1.0;
          const double mr = right < 0 ? 0.0 : right - 1.0;
          const double stag = (n % 2 == 0) ? 1.0 : -1.0;
          g = mr - ml - 0.5 * (stag + sz);
          break;
        }
      }
      set.diagonals[n](static_cast<Eigen::Index>(i)) = g;
    }
    for (std::size_t s = dims.size(); s-- > 0;) {
      if (++digits[s] < dims[s]) break;
      digits[s] = 0;
    }
  }

  for (int n = 0; n < n_matter; ++n) {
    std::vector<cplx>& ev = set.eigenvalues.emplace_back();
    switch (spec.group) {
      case Group::Z2:
        ev = {1.0, -1.0};
        break;
      case Group::Z3:
        ev = {omega(0), omega(1), omega(2)};
        break;
      case Group::U1_S1: {
        std::vector<double> vals;
        for (Eigen::Index i = 0; i < set.diagonals[n].size(); ++i) vals.push_back(std::round(set.diagonals[n](i).real()));
        std::sort(vals.begin(), vals.end());
        vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
        for (double v : vals) ev.emplace_back(v, 0.0);
        break;
      }
    }
    for (std::size_t i = 0; i < dim; ++i) {
      const int k = set.label_of(n, set.diagonals[n](static_cast<Eigen::Index>(i)));
      if (k < 0) throw NumericalError("build_gauss_charges: charge value outside its eigenvalue set");
      set.labels[n][i] = static_cast<std::uint8_t>(k);
    }
  }
  return set;
}

int center_site(const ModelSpec& spec) { return spec.n_matter / 2; }

double probability_of_label(const VectorXc& amps, const std::vector<std::uint8_t>& labels, int label) {
  double p = 0.0;
  const auto l = static_cast<std::uint8_t>(label);
  for (Eigen::Index i = 0; i < amps.size(); ++i)
    if (labels[static_cast<std::size_t>(i)] == l) p += std::norm(amps(i));
  return p;
}

TargetSector sector_of(const StateVector& psi, const GaugeChargeSet& charges, double tol) {
  TargetSector t;
  const double norm2 = psi.amplitudes.squaredNorm();
  for (int n = 0; n < charges.size(); ++n) {
    int found = -1;
    for (std::size_t k = 0; k < charges.eigenvalues[n].size(); ++k)
      if (std::abs(probability_of_label(psi.amplitudes, charges.labels[n], static_cast<int>(k)) - norm2) < tol)
        found = static_cast<int>(k);
    if (found < 0) throw NumericalError("sector_of: state is not an eigenstate of charge " + std::to_string(n));
    t.labels.push_back(found);
    t.values.push_back(charges.eigenvalues[n][found]);
  }
  return t;
}

std::pair<StateVector, TargetSector> prepare_meson_state(const ModelSpec& spec, const GaugeChargeSet& charges) {
  spec.validate();
  const auto dims = spec.register_dims();
  const int c = center_site(spec);
  std::vector<int> digits(dims.size(), 0);
  if (spec.group == Group::U1_S1) {
    // Staggered vacuum plus one gauge-invariant hop next to the center.
    for (int n = 0; n < spec.n_matter; ++n) digits[matter_site(n)] = (n % 2 == 0) ? 1 : 0;
    for (int b = 0; b + 1 < spec.n_matter; ++b) digits[link_site(b)] = 1;
    const int b = std::min(c, spec.n_matter - 2);
    digits[matter_site(b)] ^= 1;
    digits[matter_site(b + 1)] ^= 1;
    digits[link_site(b)] = (b % 2 == 0) ? 2 : 0;
  } else {
    digits[matter_site(c)] = 1;
  }
  StateVector psi = StateVector::basis(dims, digits);
  TargetSector target = sector_of(psi, charges);
  return {std::move(psi), std::move(target)};
}

std::pair<StateVector, TargetSector> prepare_meson_state(const ModelSpec& spec) {
  return prepare_meson_state(spec, build_gauss_charges(spec));
}

double gauge_violation_populations(const Eigen::VectorXd& p, const GaugeChargeSet& charges,
                                   const TargetSector& target) {
  const int n = charges.size();
  if (static_cast<int>(target.labels.size()) != n) throw DimensionError("gauge_violation: target size mismatch");
  double acc = 0.0;
  if (charges.group == Group::Z2) {
    for (int k = 0; k < n; ++k) {
      const double g = p.dot(charges.diagonals[k].real());
      acc += std::abs(g - target.values[k].real());
    }
    return acc / (2.0 * n);
  }
  for (int k = 0; k < n; ++k) {
    const auto& lab = charges.labels[k];
    const auto l = static_cast<std::uint8_t>(target.labels[k]);
    double in = 0.0;
    for (Eigen::Index i = 0; i < p.size(); ++i)
      if (lab[static_cast<std::size_t>(i)] == l) in += p(i);
    acc += 1.0 - in;
  }
  return acc / n;
}

double gauge_violation(const VectorXc& amps, const GaugeChargeSet& charges, const TargetSector& target) {
  return gauge_violation_populations(amps.cwiseAbs2(), charges, target);
}

double gauge_violation(const StateVector& psi, const GaugeChargeSet& charges, const TargetSector& target) {
  return gauge_violation(psi.amplitudes, charges, target);
}

ObservableContext::ObservableContext(const ModelSpec& s, GaugeChargeSet c, TargetSector t)
    : spec(s), register_dims(s.register_dims()), field_diag(field_diagonal(s)), charges(std::move(c)),
      target(std::move(t)) {
  reference_level.assign(register_dims.size(), 0);
  if (s.group == Group::U1_S1)
    for (int b = 0; b + 1 < s.n_matter; ++b) reference_level[link_site(b)] = 1;
}

ObservableSnapshot observables(const VectorXc& amps, const ObservableContext& ctx, double time) {
  ObservableSnapshot snap;
  snap.time = time;
  const Eigen::VectorXd p = amps.cwiseAbs2();
  const auto& dims = ctx.register_dims;
  const std::size_t sites = dims.size();
  snap.excitation.assign(sites, 0.0);
  std::size_t inner = static_cast<std::size_t>(p.size());
  std::size_t outer = 1;
  for (std::size_t s = 0; s < sites; ++s) {
    const auto d = static_cast<std::size_t>(dims[s]);
    inner /= d;
    const std::size_t ref = static_cast<std::size_t>(ctx.reference_level[s]);
    double at_ref = 0.0;
    for (std::size_t o = 0; o < outer; ++o) {
      const double* blk = p.data() + (o * d + ref) * inner;
      for (std::size_t lo = 0; lo < inner; ++lo) at_ref += blk[lo];
    }
    snap.excitation[s] = 1.0 - at_ref;
    outer *= d;
  }
  const double total = p.sum();
  snap.field = p.dot(ctx.field_diag) / total;
  const double second = p.dot(ctx.field_diag.cwiseAbs2()) / total;
  snap.field_variance = std::max(0.0, second - snap.field * snap.field);
  snap.gauge_violation = gauge_violation(amps, ctx.charges, ctx.target);
  return snap;
}

ObservableSnapshot observables(const StateVector& psi, const ModelSpec& spec) {
  auto charges = build_gauss_charges(spec);
  auto target = prepare_meson_state(spec, charges).second;
  ObservableContext ctx(spec, std::move(charges), std::move(target));
  return observables(psi.amplitudes, ctx, 0.0);
}

}  // namespace zenolgt
