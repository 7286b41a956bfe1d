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

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "zenolgt/linalg.hpp"

namespace zenolgt {

enum class Group { Z2, Z3, U1_S1 };

std::string to_string(Group g);
Group group_from_string(const std::string& name);

class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Open chain with N matter sites and N-1 links, interleaved as m0, l01, m1, l12, ...
struct ModelSpec {
  Group group = Group::Z2;
  int n_matter = 3;
  double J = 1.0;
  double f = 0.5;
  double mu = 0.0;
  double lambda1 = 0.0;
  double lambda2 = 0.0;

  int n_sites() const { return 2 * n_matter - 1; }
  int link_dim() const { return group == Group::Z2 ? 2 : 3; }
  std::vector<int> register_dims() const;
  std::size_t dim() const { return register_dimension(register_dims()); }
  void validate() const;
};

constexpr int matter_site(int n) { return 2 * n; }
constexpr int link_site(int n) { return 2 * n + 1; }  // link (n, n+1)

namespace ops {
MatrixXc identity(int d);
MatrixXc sigma_x();
MatrixXc sigma_y();
MatrixXc sigma_z();
MatrixXc sigma_plus();   // |0><1|
MatrixXc sigma_minus();  // |1><0|
MatrixXc clock();        // Q|m> = w^m |m>
MatrixXc shift();        // P|m> = |m+1 mod 3>
MatrixXc spin1_z();      // S^z, index k = m + 1
MatrixXc spin1_raise();  // U|m> = |m+1>, U|1> = 0

/// Link operator whose exponential rotates the field, per group.
MatrixXc link_rotation(Group g);
/// Pauli-like unitary pair used for noise on a site of dimension d.
MatrixXc weyl_x(int d);
MatrixXc weyl_z(int d);
/// Hermitian generators for noisy rotations on a site of dimension d.
MatrixXc rotation_generator_x(int d);
MatrixXc rotation_generator_z(int d);
}  // namespace ops

enum class TermKind { Hopping, Field, Mass, FieldError, HoppingError };

/// A Hermitian term supported on a contiguous block of sites.
struct LocalTerm {
  TermKind kind;
  int index;  // bond, link or matter index
  int first_site;
  int n_sites;
  MatrixXc matrix;
};

std::vector<LocalTerm> hamiltonian_terms(const ModelSpec& spec);
std::vector<LocalTerm> error_terms(const ModelSpec& spec);
SparseOp assemble(const std::vector<LocalTerm>& terms, const std::vector<int>& register_dims);

SparseOp build_hamiltonian(const ModelSpec& spec);
SparseOp build_error_hamiltonian(const ModelSpec& spec);
SparseOp build_total_hamiltonian(const ModelSpec& spec);
SparseOp build_field_hamiltonian(const ModelSpec& spec);
/// Diagonal of H_f and of H_f + H_m; both are diagonal in the computational basis.
Eigen::VectorXd field_diagonal(const ModelSpec& spec);
Eigen::VectorXd field_and_mass_diagonal(const ModelSpec& spec);

/// All charges are diagonal in the computational basis, so projectors are stored as
/// per-basis-state eigenvalue labels.
struct GaugeChargeSet {
  Group group = Group::Z2;
  std::vector<int> register_dims;
  std::vector<VectorXc> diagonals;
  std::vector<std::vector<cplx>> eigenvalues;
  std::vector<std::vector<std::uint8_t>> labels;
  std::vector<std::vector<int>> supports;

  int size() const { return static_cast<int>(diagonals.size()); }
  SparseOp charge(int n) const;
  SparseOp projector(int n, int k) const;
  Eigen::VectorXd projector_diagonal(int n, int k) const;
  int label_of(int n, cplx value, double tol = 1e-9) const;
};

struct TargetSector {
  std::vector<cplx> values;
  std::vector<int> labels;
};

GaugeChargeSet build_gauss_charges(const ModelSpec& spec);

std::pair<StateVector, TargetSector> prepare_meson_state(const ModelSpec& spec);
std::pair<StateVector, TargetSector> prepare_meson_state(const ModelSpec& spec, const GaugeChargeSet& charges);
/// Reads the sector of a simultaneous charge eigenstate; throws if psi is not one.
TargetSector sector_of(const StateVector& psi, const GaugeChargeSet& charges, double tol = 1e-10);
/// Index of the central matter site, floor(N/2).
int center_site(const ModelSpec& spec);

double probability_of_label(const VectorXc& amps, const std::vector<std::uint8_t>& labels, int label);
double gauge_violation(const StateVector& psi, const GaugeChargeSet& charges, const TargetSector& target);
double gauge_violation(const VectorXc& amps, const GaugeChargeSet& charges, const TargetSector& target);
/// Same measure evaluated on basis populations, e.g. the diagonal of a density matrix.
double gauge_violation_populations(const Eigen::VectorXd& p, const GaugeChargeSet& charges,
                                   const TargetSector& target);

struct ObservableSnapshot {
  double time = 0.0;
  std::vector<double> excitation;  // per register site
  double field = 0.0;              // <H_f>
  double field_variance = 0.0;     // <H_f^2> - <H_f>^2
  double gauge_violation = 0.0;
};

/// Precomputed data for fast snapshots along a trajectory.
struct ObservableContext {
  ModelSpec spec;
  std::vector<int> register_dims;
  Eigen::VectorXd field_diag;
  std::vector<int> reference_level;  // per site: level counted as "not excited"
  GaugeChargeSet charges;
  TargetSector target;

  ObservableContext(const ModelSpec& s, GaugeChargeSet c, TargetSector t);
};

ObservableSnapshot observables(const VectorXc& amps, const ObservableContext& ctx, double time = 0.0);
ObservableSnapshot observables(const StateVector& psi, const ModelSpec& spec);

}  // namespace zenolgt
