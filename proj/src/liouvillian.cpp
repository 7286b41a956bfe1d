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

#include "zenolgt/liouvillian.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "zenolgt/parallel.hpp"

namespace zenolgt {

namespace {

const cplx kI(0.0, 1.0);

int find_root(std::vector<int>& parent, int x) {
  while (parent[x] != x) {
    parent[x] = parent[parent[x]];
    x = parent[x];
  }
  return x;
}

// Columns are vec(M_k) for the orthonormal Hermitian basis E_aa, (E_ab + E_ba)/sqrt2,
// i(E_ab - E_ba)/sqrt2 with a < b.
SparseOp hermitian_basis(int d) {
  const double r = 1.0 / std::sqrt(2.0);
  std::vector<Eigen::Triplet<cplx>> trip;
  int k = 0;
  for (int a = 0; a < d; ++a) trip.emplace_back(a + a * d, k++, 1.0);
  for (int a = 0; a < d; ++a)
    for (int b = a + 1; b < d; ++b) {
      trip.emplace_back(a + b * d, k, r);
      trip.emplace_back(b + a * d, k, r);
      ++k;
      trip.emplace_back(a + b * d, k, kI * r);
      trip.emplace_back(b + a * d, k, -kI * r);
      ++k;
    }
  SparseOp m(d * d, d * d);
  m.setFromTriplets(trip.begin(), trip.end());
  return m;
}

SparseOp transpose_of(const SparseOp& a) { return SparseOp(a.transpose()); }

}  // namespace

MatrixXc Superoperator::dense(std::size_t cap) const {
  if (static_cast<std::size_t>(size()) > cap) throw DimensionError("Superoperator::dense: dimension exceeds cap");
  return MatrixXc(matrix);
}

Superoperator build_lindbladian(const SparseOp& h, const std::vector<JumpChannel>& jumps) {
  if (h.rows() != h.cols()) throw DimensionError("build_lindbladian: Hamiltonian must be square");
  const auto d = static_cast<std::size_t>(h.rows());
  const SparseOp id = sparse_identity(d);
  SparseOp l = cplx(0.0, -1.0) * (kron(id, h) - kron(transpose_of(h), id));
  for (const auto& j : jumps) {
    if (j.op.rows() != h.rows() || j.op.cols() != h.cols())
      throw DimensionError("build_lindbladian: jump operator dimension mismatch");
    if (!(j.rate >= 0.0)) throw ValidationError("build_lindbladian: negative rate");
    if (j.rate == 0.0) continue;
    const SparseOp ada = SparseOp(j.op.adjoint()) * j.op;
    const SparseOp conj_a = j.op.conjugate();
    l += j.rate * (kron(conj_a, j.op) - 0.5 * kron(id, ada) - 0.5 * kron(transpose_of(ada), id));
  }
  prune(l);
  Superoperator s;
  s.hilbert_dim = static_cast<int>(d);
  s.matrix = std::move(l);
  return s;
}

Superoperator build_liouvillian(const ModelSpec& spec, double gamma, double fidelity, std::size_t hilbert_cap) {
  spec.validate();
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw ValidationError("liouvillian.gamma: must be non-negative");
  if (!(fidelity > 0.0 && fidelity <= 1.0)) throw ValidationError("liouvillian.fidelity: must lie in (0, 1]");
  if (spec.dim() > hilbert_cap) throw DimensionError("build_liouvillian: Hilbert dimension exceeds cap");
  const auto dims = spec.register_dims();
  const auto charges = build_gauss_charges(spec);
  std::vector<JumpChannel> jumps;
  for (int n = 0; n < charges.size(); ++n) jumps.push_back({charges.charge(n), gamma});
  if (fidelity < 1.0) {
    const double rate = (1.0 - fidelity) * gamma;
    for (int k = 0; k < static_cast<int>(dims.size()); ++k) {
      jumps.push_back({embed(ops::weyl_x(dims[k]), dims, {k}), rate});
      jumps.push_back({embed(ops::weyl_z(dims[k]), dims, {k}), rate});
    }
  }
  Superoperator s = build_lindbladian(build_total_hamiltonian(spec), jumps);
  s.gamma = gamma;
  s.fidelity = fidelity;
  return s;
}

SpectrumResult spectrum(const Superoperator& l) {
  const int d = l.hilbert_dim;
  const Eigen::Index n = l.size();
  if (n != static_cast<Eigen::Index>(d) * d) throw DimensionError("spectrum: inconsistent superoperator");
  const SparseOp basis = hermitian_basis(d);
  SparseOp rot = SparseOp(basis.adjoint()) * l.matrix * basis;
  prune(rot, 1e-13);

  double imag = 0.0;
  for (Eigen::Index r = 0; r < rot.outerSize(); ++r)
    for (SparseOp::InnerIterator it(rot, r); it; ++it) imag = std::max(imag, std::abs(it.value().imag()));
  if (imag > 1e-9 * std::max(1.0, max_abs(rot)))
    throw NumericalError("spectrum: generator does not preserve Hermiticity");

  std::vector<int> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), 0);
  for (Eigen::Index r = 0; r < rot.outerSize(); ++r)
    for (SparseOp::InnerIterator it(rot, r); it; ++it) {
      const int a = find_root(parent, static_cast<int>(it.row()));
      const int b = find_root(parent, static_cast<int>(it.col()));
      if (a != b) parent[a] = b;
    }
  std::vector<std::vector<int>> blocks;
  std::vector<int> block_of(static_cast<std::size_t>(n), -1);
  std::vector<int> slot(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const int root = find_root(parent, i);
    if (block_of[root] < 0) {
      block_of[root] = static_cast<int>(blocks.size());
      blocks.emplace_back();
    }
    auto& b = blocks[block_of[root]];
    slot[i] = static_cast<int>(b.size());
    b.push_back(i);
  }

  SpectrumResult out;
  out.gamma = l.gamma;
  out.fidelity = l.fidelity;
  out.eigenvalues.reserve(static_cast<std::size_t>(n));
  std::vector<Eigen::MatrixXd> dense(blocks.size());
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const auto m = static_cast<Eigen::Index>(blocks[b].size());
    if (static_cast<std::size_t>(m) > kDefaultEigCap) throw DimensionError("spectrum: block exceeds eigensolver cap");
    dense[b] = Eigen::MatrixXd::Zero(m, m);
  }
  for (Eigen::Index r = 0; r < rot.outerSize(); ++r)
    for (SparseOp::InnerIterator it(rot, r); it; ++it) {
      const int b = block_of[find_root(parent, static_cast<int>(it.row()))];
      dense[b](slot[it.row()], slot[it.col()]) = it.value().real();
    }
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    out.block_sizes.push_back(static_cast<int>(blocks[b].size()));
    if (blocks[b].size() == 1) {
      out.eigenvalues.emplace_back(dense[b](0, 0), 0.0);
      continue;
    }
    const auto eig = eig_general(dense[b]);
    for (Eigen::Index i = 0; i < eig.values.size(); ++i) out.eigenvalues.push_back(eig.values(i));
  }
  std::sort(out.eigenvalues.begin(), out.eigenvalues.end(), [](const cplx& a, const cplx& b) {
    return a.real() != b.real() ? a.real() > b.real() : a.imag() > b.imag();
  });
  return out;
}

std::vector<double> log_grid(double lo, double hi, int n) {
  if (!(lo > 0.0) || !(hi >= lo) || n < 1) throw ValidationError("log_grid: requires 0 < lo <= hi and n >= 1");
  std::vector<double> g(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    g[i] = n == 1 ? lo : std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * i / (n - 1));
  return g;
}

std::vector<SpectrumResult> spectrum_sweep(const ModelSpec& spec, const std::vector<double>& gammas,
                                           double fidelity, std::size_t hilbert_cap, int workers) {
  std::vector<SpectrumResult> out(gammas.size());
  parallel_for(static_cast<int>(gammas.size()), workers,
               [&](int i) { out[i] = spectrum(build_liouvillian(spec, gammas[i], fidelity, hilbert_cap)); });
  return out;
}

VectorXc vectorize(const DensityMatrix& rho) { return Eigen::Map<const VectorXc>(rho.data(), rho.size()); }

DensityMatrix unvectorize(const VectorXc& v, int dim) {
  if (v.size() != static_cast<Eigen::Index>(dim) * dim) throw DimensionError("unvectorize: size mismatch");
  return Eigen::Map<const MatrixXc>(v.data(), dim, dim);
}

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionError("trace_distance: dimension mismatch");
  const MatrixXc diff = a - b;
  Eigen::SelfAdjointEigenSolver<MatrixXc> es(MatrixXc(0.5 * (diff + diff.adjoint())));
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

MasterEquationSeries integrate_master_equation(const ModelSpec& spec, double gamma, double fidelity,
                                               const DensityMatrix& rho0, const std::vector<double>& t_grid,
                                               const TargetSector& target, bool keep_states,
                                               std::size_t hilbert_cap) {
  const Superoperator l = build_liouvillian(spec, gamma, fidelity, hilbert_cap);
  const int d = l.hilbert_dim;
  if (rho0.rows() != d || rho0.cols() != d) throw DimensionError("integrate_master_equation: rho0 dimension");
  const auto charges = build_gauss_charges(spec);
  const Eigen::VectorXd hf = field_diagonal(spec);
  MasterEquationSeries out;
  VectorXc v = vectorize(rho0);
  double t = 0.0;
  for (double target_time : t_grid) {
    if (!(target_time >= t)) throw ValidationError("integrate_master_equation: t_grid must be non-decreasing and >= 0");
    v = expm_multiply(l.matrix, v, target_time - t);
    t = target_time;
    const DensityMatrix rho = unvectorize(v, d);
    const Eigen::VectorXd pop = rho.diagonal().real();
    const double tr = rho.trace().real();
    const double f = pop.dot(hf) / tr;
    out.times.push_back(t);
    out.field.push_back(f);
    out.field_variance.push_back(std::max(0.0, pop.dot(hf.cwiseAbs2()) / tr - f * f));
    out.gauge_violation.push_back(gauge_violation_populations(pop / tr, charges, target));
    out.trace.push_back(tr);
    out.hermiticity_error.push_back(max_abs(MatrixXc(rho - rho.adjoint())));
    if (keep_states) out.states.push_back(rho);
  }
  return out;
}

MasterEquationSeries integrate_master_equation(const ModelSpec& spec, double gamma, double fidelity,
                                               const DensityMatrix& rho0, const std::vector<double>& t_grid,
                                               bool keep_states, std::size_t hilbert_cap) {
  return integrate_master_equation(spec, gamma, fidelity, rho0, t_grid, prepare_meson_state(spec).second,
                                   keep_states, hilbert_cap);
}

}  // namespace zenolgt
