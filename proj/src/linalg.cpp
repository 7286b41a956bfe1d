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

#include "zenolgt/linalg.hpp"

#include <algorithm>
#include <cmath>

#include <lapacke.h>
#include <unsupported/Eigen/MatrixFunctions>

namespace zenolgt {

StateVector::StateVector(VectorXc amps, std::vector<int> dims)
    : amplitudes(std::move(amps)), register_dims(std::move(dims)) {
  if (register_dimension(register_dims) != static_cast<std::size_t>(amplitudes.size()))
    throw DimensionError("StateVector: amplitude count does not match register dims");
}

void StateVector::normalize() {
  const double n = amplitudes.norm();
  if (!(n > 0.0)) throw NumericalError("StateVector: cannot normalize a zero vector");
  amplitudes /= n;
}

StateVector StateVector::basis(const std::vector<int>& dims, const std::vector<int>& digits) {
  VectorXc v = VectorXc::Zero(static_cast<Eigen::Index>(register_dimension(dims)));
  v(static_cast<Eigen::Index>(basis_index(dims, digits))) = 1.0;
  return StateVector(std::move(v), dims);
}

std::size_t register_dimension(const std::vector<int>& dims) {
  std::size_t d = 1;
  for (int x : dims) {
    if (x <= 0) throw DimensionError("register: local dimensions must be positive");
    d *= static_cast<std::size_t>(x);
    if (d > kDefaultDimCap) throw DimensionError("register: dimension exceeds cap");
  }
  return d;
}

std::size_t basis_index(const std::vector<int>& dims, const std::vector<int>& digits) {
  if (digits.size() != dims.size()) throw DimensionError("basis_index: digit count mismatch");
  std::size_t idx = 0;
  for (std::size_t s = 0; s < dims.size(); ++s) {
    if (digits[s] < 0 || digits[s] >= dims[s]) throw DimensionError("basis_index: digit out of range");
    idx = idx * static_cast<std::size_t>(dims[s]) + static_cast<std::size_t>(digits[s]);
  }
  return idx;
}

std::vector<int> basis_digits(const std::vector<int>& dims, std::size_t index) {
  std::vector<int> digits(dims.size());
  for (std::size_t s = dims.size(); s-- > 0;) {
    digits[s] = static_cast<int>(index % static_cast<std::size_t>(dims[s]));
    index /= static_cast<std::size_t>(dims[s]);
  }
  return digits;
}

SparseOp kron(const SparseOp& a, const SparseOp& b, std::size_t cap) {
  if (static_cast<std::size_t>(a.rows() * b.rows()) > cap ||
      static_cast<std::size_t>(a.cols() * b.cols()) > cap)
    throw DimensionError("kron: dimension exceeds cap");
  SparseOp out = Eigen::kroneckerProduct(a, b).eval();
  prune(out);
  return out;
}

SparseOp sparsify(const MatrixXc& m, double drop_tol) {
  SparseOp out = m.sparseView(1.0, drop_tol);
  if (!m.allFinite()) throw NumericalError("sparsify: non-finite entries");
  prune(out, drop_tol);
  return out;
}

void prune(SparseOp& m, double drop_tol) {
  m.prune([drop_tol](Eigen::Index, Eigen::Index, const cplx& v) { return std::abs(v) > drop_tol; });
  m.makeCompressed();
}

SparseOp sparse_identity(std::size_t dim) {
  SparseOp id(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  id.setIdentity();
  return id;
}

SparseOp embed(const MatrixXc& local, const std::vector<int>& register_dims, const std::vector<int>& targets,
               std::size_t cap) {
  const int n_sites = static_cast<int>(register_dims.size());
  if (targets.empty()) throw DimensionError("embed: no target sites");
  for (std::size_t i = 0; i < targets.size(); ++i) {
    if (targets[i] < 0 || targets[i] >= n_sites) throw DimensionError("embed: target out of range");
    if (i > 0 && targets[i] <= targets[i - 1]) throw DimensionError("embed: targets must be sorted and unique");
  }
  std::size_t local_dim = 1;
  for (int t : targets) local_dim *= static_cast<std::size_t>(register_dims[t]);
  if (static_cast<std::size_t>(local.rows()) != local_dim || static_cast<std::size_t>(local.cols()) != local_dim)
    throw DimensionError("embed: local operator dimension does not match targets");
  const std::size_t dim = register_dimension(register_dims);
  if (dim > cap) throw DimensionError("embed: dimension exceeds cap");

  std::vector<std::size_t> stride(n_sites);
  std::size_t s = 1;
  for (int k = n_sites - 1; k >= 0; --k) {
    stride[k] = s;
    s *= static_cast<std::size_t>(register_dims[k]);
  }

  // Offset contributed by each local basis index; the last target varies fastest.
  std::vector<std::size_t> local_offset(local_dim, 0);
  for (std::size_t k = 0; k < local_dim; ++k) {
    std::size_t rem = k;
    for (std::size_t j = targets.size(); j-- > 0;) {
      const auto d = static_cast<std::size_t>(register_dims[targets[j]]);
      local_offset[k] += (rem % d) * stride[targets[j]];
      rem /= d;
    }
  }

  std::vector<int> rest;
  for (int k = 0; k < n_sites; ++k)
    if (!std::binary_search(targets.begin(), targets.end(), k)) rest.push_back(k);
  std::vector<std::size_t> bases{0};
  for (int k : rest) {
    std::vector<std::size_t> next;
    next.reserve(bases.size() * static_cast<std::size_t>(register_dims[k]));
    for (std::size_t b : bases)
      for (int v = 0; v < register_dims[k]; ++v) next.push_back(b + static_cast<std::size_t>(v) * stride[k]);
    bases.swap(next);
  }

  std::vector<Eigen::Triplet<cplx>> triplets;
  std::vector<std::pair<std::size_t, std::size_t>> nz;
  std::vector<cplx> nz_val;
  for (Eigen::Index r = 0; r < local.rows(); ++r)
    for (Eigen::Index c = 0; c < local.cols(); ++c)
      if (std::abs(local(r, c)) > kDropTolerance) {
        nz.emplace_back(static_cast<std::size_t>(r), static_cast<std::size_t>(c));
        nz_val.push_back(local(r, c));
      }
  triplets.reserve(nz.size() * bases.size());
  for (std::size_t b : bases)
    for (std::size_t k = 0; k < nz.size(); ++k)
      triplets.emplace_back(static_cast<Eigen::Index>(b + local_offset[nz[k].first]),
                            static_cast<Eigen::Index>(b + local_offset[nz[k].second]), nz_val[k]);
  SparseOp out(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  out.setFromTriplets(triplets.begin(), triplets.end());
  out.makeCompressed();
  return out;
}

MatrixXc expm_dense(const MatrixXc& a, std::size_t cap) {
  if (a.rows() != a.cols()) throw DimensionError("expm: matrix must be square");
  if (static_cast<std::size_t>(a.rows()) > cap) throw DimensionError("expm: dimension exceeds cap");
  if (!a.allFinite()) throw NumericalError("expm: non-finite input");
  return a.exp();
}

MatrixXc expm_small(const MatrixXc& a) { return expm_dense(a, kExpmSmallCap); }

double norm1(const SparseOp& a) {
  Eigen::VectorXd col = Eigen::VectorXd::Zero(a.cols());
  for (Eigen::Index r = 0; r < a.outerSize(); ++r)
    for (SparseOp::InnerIterator it(a, r); it; ++it) col(it.col()) += std::abs(it.value());
  return a.cols() > 0 ? col.maxCoeff() : 0.0;
}

VectorXc expm_multiply(const SparseOp& a, const VectorXc& v, double t) {
  if (a.rows() != a.cols() || a.cols() != v.size()) throw DimensionError("expm_multiply: dimension mismatch");
  const double scaled = std::abs(t) * norm1(a);
  const int s = std::max(1, static_cast<int>(std::ceil(scaled)));
  const double h = t / s;
  VectorXc out = v;
  for (int step = 0; step < s; ++step) {
    VectorXc term = out;
    VectorXc acc = out;
    const double ref = std::max(out.cwiseAbs().maxCoeff(), 1e-300);
    int small = 0;
    for (int k = 1; k <= 60 && small < 2; ++k) {
      term = (a * term) * (h / k);
      acc += term;
      small = term.cwiseAbs().maxCoeff() <= 1e-17 * ref ? small + 1 : 0;
    }
    if (small < 2) throw NumericalError("expm_multiply: Taylor series did not converge");
    if (!acc.allFinite()) throw NumericalError("expm_multiply: non-finite result");
    out = std::move(acc);
  }
  return out;
}

StateVector apply(const SparseOp& op, const StateVector& psi) {
  if (op.cols() != psi.dim() || op.rows() != psi.dim()) throw DimensionError("apply: dimension mismatch");
  return StateVector(op * psi.amplitudes, psi.register_dims);
}

cplx expectation(const SparseOp& op, const StateVector& psi) {
  if (op.cols() != psi.dim() || op.rows() != psi.dim()) throw DimensionError("expectation: dimension mismatch");
  return psi.amplitudes.dot(op * psi.amplitudes);
}

namespace {

void normalize_columns(MatrixXc& v) {
  for (Eigen::Index c = 0; c < v.cols(); ++c) {
    const double n = v.col(c).norm();
    if (n > 0) v.col(c) /= n;
  }
}

}  // namespace

EigenDecomposition eig_general(const MatrixXc& m, bool want_vectors, std::size_t cap) {
  if (m.rows() != m.cols()) throw DimensionError("eig_general: matrix must be square");
  if (static_cast<std::size_t>(m.rows()) > cap) throw DimensionError("eig_general: dimension exceeds cap");
  if (!m.allFinite()) throw NumericalError("eig_general: non-finite input");
  const auto n = static_cast<lapack_int>(m.rows());
  EigenDecomposition out;
  out.values.resize(n);
  if (n == 0) return out;
  MatrixXc work = m;
  MatrixXc vr;
  if (want_vectors) vr.resize(n, n);
  const lapack_int info =
      LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', want_vectors ? 'V' : 'N', n,
                    reinterpret_cast<lapack_complex_double*>(work.data()), n,
                    reinterpret_cast<lapack_complex_double*>(out.values.data()), nullptr, 1,
                    want_vectors ? reinterpret_cast<lapack_complex_double*>(vr.data()) : nullptr, n);
  if (info != 0) throw SolverError("eig_general: zgeev failed with info=" + std::to_string(info));
  if (want_vectors) {
    normalize_columns(vr);
    out.vectors = std::move(vr);
  }
  return out;
}

EigenDecomposition eig_general(const Eigen::MatrixXd& m, bool want_vectors, std::size_t cap) {
  if (m.rows() != m.cols()) throw DimensionError("eig_general: matrix must be square");
  if (static_cast<std::size_t>(m.rows()) > cap) throw DimensionError("eig_general: dimension exceeds cap");
  if (!m.allFinite()) throw NumericalError("eig_general: non-finite input");
  const auto n = static_cast<lapack_int>(m.rows());
  EigenDecomposition out;
  out.values.resize(n);
  if (n == 0) return out;
  Eigen::MatrixXd work = m;
  Eigen::VectorXd wr(n), wi(n);
  Eigen::MatrixXd vr;
  if (want_vectors) vr.resize(n, n);
  const lapack_int info = LAPACKE_dgeev(LAPACK_COL_MAJOR, 'N', want_vectors ? 'V' : 'N', n, work.data(), n,
                                        wr.data(), wi.data(), nullptr, 1, want_vectors ? vr.data() : nullptr, n);
  if (info != 0) throw SolverError("eig_general: dgeev failed with info=" + std::to_string(info));
  for (lapack_int k = 0; k < n; ++k) out.values(k) = cplx(wr(k), wi(k));
  if (want_vectors) {
    // dgeev packs a conjugate pair (k, k+1) as real and imaginary parts.
    MatrixXc v(n, n);
    for (lapack_int k = 0; k < n; ++k) {
      if (wi(k) != 0.0 && k + 1 < n) {
        v.col(k) = vr.col(k).cast<cplx>() + cplx(0, 1) * vr.col(k + 1).cast<cplx>();
        v.col(k + 1) = v.col(k).conjugate();
        ++k;
      } else {
        v.col(k) = vr.col(k).cast<cplx>();
      }
    }
    normalize_columns(v);
    out.vectors = std::move(v);
  }
  return out;
}

bool is_hermitian(const MatrixXc& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

double max_abs(const MatrixXc& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

double max_abs(const SparseOp& m) {
  double best = 0.0;
  for (Eigen::Index k = 0; k < m.outerSize(); ++k)
    for (SparseOp::InnerIterator it(m, k); it; ++it) best = std::max(best, std::abs(it.value()));
  return best;
}

SparseOp commutator(const SparseOp& a, const SparseOp& b) {
  SparseOp c = (a * b - b * a).eval();
  prune(c);
  return c;
}

void check_density_matrix(const DensityMatrix& m, double herm_tol, double trace_tol, double eig_tol) {
  if (m.rows() != m.cols()) throw DimensionError("density matrix must be square");
  if (!is_hermitian(m, herm_tol)) throw NumericalError("density matrix is not Hermitian");
  if (std::abs(m.trace() - 1.0) > trace_tol) throw NumericalError("density matrix trace differs from 1");
  Eigen::SelfAdjointEigenSolver<MatrixXc> es(0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -eig_tol) throw NumericalError("density matrix has negative eigenvalues");
}

}  // namespace zenolgt
