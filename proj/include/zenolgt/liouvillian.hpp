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

#pragma once

#include <vector>

#include "zenolgt/models.hpp"

namespace zenolgt {

/// Largest Hilbert dimension accepted by default for superoperator work.
inline constexpr std::size_t kLiouvillianHilbertCap = 64;

struct JumpChannel {
  SparseOp op;
  double rate = 1.0;
};

/// Lindblad generator in column-stacking convention, vec(A rho B) = (B^T kron A) vec(rho).
struct Superoperator {
  int hilbert_dim = 0;
  double gamma = 0.0;
  double fidelity = 1.0;
  SparseOp matrix;

  Eigen::Index size() const { return matrix.rows(); }
  MatrixXc dense(std::size_t cap = kDefaultEigCap) const;
};

Superoperator build_lindbladian(const SparseOp& hamiltonian, const std::vector<JumpChannel>& jumps);

/// Ideal charge dissipators gamma D[G_n]; for fidelity < 1 also (1-F) gamma D[X_k] and
/// (1-F) gamma D[Z_k] on every register site (shift and clock on 3-level links).
Superoperator build_liouvillian(const ModelSpec& spec, double gamma, double fidelity = 1.0,
                                std::size_t hilbert_cap = kLiouvillianHilbertCap);

struct SpectrumResult {
  double gamma = 0.0;
  double fidelity = 1.0;
  /// Sorted by real part, descending.
  std::vector<cplx> eigenvalues;
  std::vector<int> block_sizes;
};

/// Full spectrum. The generator is rotated to the Hermitian operator basis, where it is
/// real, and diagonalized block by block over the connected components of its sparsity graph.
SpectrumResult spectrum(const Superoperator& l);

std::vector<double> log_grid(double lo, double hi, int n);

std::vector<SpectrumResult> spectrum_sweep(const ModelSpec& spec, const std::vector<double>& gammas,
                                           double fidelity = 1.0, std::size_t hilbert_cap = kLiouvillianHilbertCap,
                                           int workers = 1);

VectorXc vectorize(const DensityMatrix& rho);
DensityMatrix unvectorize(const VectorXc& v, int dim);
double trace_distance(const DensityMatrix& a, const DensityMatrix& b);

struct MasterEquationSeries {
  std::vector<double> times;
  std::vector<double> field;
  std::vector<double> field_variance;  // <H_f^2> - <H_f>^2 in the mixed state
  std::vector<double> gauge_violation;
  std::vector<double> trace;
  std::vector<double> hermiticity_error;
  std::vector<DensityMatrix> states;  // filled only when requested
};

/// rho(t) = exp(L t) rho0 on a non-decreasing grid of times >= 0. The gauge violation is
/// measured against `target`.
MasterEquationSeries integrate_master_equation(const ModelSpec& spec, double gamma, double fidelity,
                                               const DensityMatrix& rho0, const std::vector<double>& t_grid,
                                               const TargetSector& target, bool keep_states = false,
                                               std::size_t hilbert_cap = kLiouvillianHilbertCap);

/// Same, with the target sector of the meson state.
MasterEquationSeries integrate_master_equation(const ModelSpec& spec, double gamma, double fidelity,
                                               const DensityMatrix& rho0, const std::vector<double>& t_grid,
                                               bool keep_states = false,
                                               std::size_t hilbert_cap = kLiouvillianHilbertCap);

}  // namespace zenolgt
