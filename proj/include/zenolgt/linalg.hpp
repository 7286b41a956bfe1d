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

#include <complex>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <unsupported/Eigen/KroneckerProduct>

namespace zenolgt {

using cplx = std::complex<double>;

template <typename Scalar>
using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using SparseMatrix = Eigen::SparseMatrix<Scalar, Eigen::RowMajor>;

using MatrixXc = DenseMatrix<cplx>;
using VectorXc = Eigen::VectorXcd;
using SparseOp = SparseMatrix<cplx>;
using DensityMatrix = MatrixXc;

inline constexpr std::size_t kDefaultDimCap = std::size_t{1} << 20;
inline constexpr std::size_t kDefaultEigCap = 4096;
inline constexpr std::size_t kExpmSmallCap = 64;
inline constexpr double kDropTolerance = 1e-14;

class DimensionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Amplitudes on a tensor-product register. Site 0 is the leftmost
/// (slowest-varying) factor.
struct StateVector {
  VectorXc amplitudes;
  std::vector<int> register_dims;

  StateVector() = default;
  StateVector(VectorXc amps, std::vector<int> dims);

  Eigen::Index dim() const { return amplitudes.size(); }
  double norm() const { return amplitudes.norm(); }
  void normalize();

  static StateVector basis(const std::vector<int>& dims, const std::vector<int>& digits);
};

std::size_t register_dimension(const std::vector<int>& dims);
std::size_t basis_index(const std::vector<int>& dims, const std::vector<int>& digits);
std::vector<int> basis_digits(const std::vector<int>& dims, std::size_t index);

template <typename DA, typename DB>
DenseMatrix<typename DA::Scalar> kron(const Eigen::MatrixBase<DA>& a, const Eigen::MatrixBase<DB>& b,
                                      std::size_t cap = kDefaultDimCap) {
  if (static_cast<std::size_t>(a.rows() * b.rows()) > cap ||
      static_cast<std::size_t>(a.cols() * b.cols()) > cap)
    throw DimensionError("kron: dimension exceeds cap");
  return Eigen::kroneckerProduct(a.derived(), b.derived()).eval();
}

SparseOp kron(const SparseOp& a, const SparseOp& b, std::size_t cap = kDefaultDimCap);

SparseOp sparsify(const MatrixXc& m, double drop_tol = kDropTolerance);
void prune(SparseOp& m, double drop_tol = kDropTolerance);
SparseOp sparse_identity(std::size_t dim);

/// Places `local` on the target sites and the identity elsewhere. Targets must be
/// sorted but need not be contiguous.
SparseOp embed(const MatrixXc& local, const std::vector<int>& register_dims, const std::vector<int>& targets,
               std::size_t cap = kDefaultDimCap);

MatrixXc expm_dense(const MatrixXc& a, std::size_t cap);
MatrixXc expm_small(const MatrixXc& a);

/// exp(t A) v by truncated Taylor series on substeps with |t A / s|_1 <= 1.
VectorXc expm_multiply(const SparseOp& a, const VectorXc& v, double t);
double norm1(const SparseOp& a);

StateVector apply(const SparseOp& op, const StateVector& psi);
cplx expectation(const SparseOp& op, const StateVector& psi);

struct EigenDecomposition {
  VectorXc values;
  std::optional<MatrixXc> vectors;
};

EigenDecomposition eig_general(const MatrixXc& m, bool want_vectors = false,
                               std::size_t cap = kDefaultEigCap);
EigenDecomposition eig_general(const Eigen::MatrixXd& m, bool want_vectors = false,
                               std::size_t cap = kDefaultEigCap);

bool is_hermitian(const MatrixXc& m, double tol);
double max_abs(const MatrixXc& m);
double max_abs(const SparseOp& m);
SparseOp commutator(const SparseOp& a, const SparseOp& b);

/// Throws NumericalError unless m is Hermitian, unit trace and positive to the given tolerances.
void check_density_matrix(const DensityMatrix& m, double herm_tol = 1e-10, double trace_tol = 1e-10,
                          double eig_tol = 1e-8);

}  // namespace zenolgt
