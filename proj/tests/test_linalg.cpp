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

#include <random>

#include "zenolgt/linalg.hpp"
#include "zenolgt/local_kernels.hpp"
#include "zenolgt/models.hpp"

namespace zenolgt {
namespace {

MatrixXc random_matrix(int r, int c, std::mt19937_64& gen) {
  std::normal_distribution<double> nd;
  MatrixXc m(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m(i, j) = cplx(nd(gen), nd(gen));
  return m;
}

TEST(Kron, IdentityTimesIdentity) {
  EXPECT_TRUE(kron(ops::identity(2), ops::identity(2)).isApprox(ops::identity(4)));
}

TEST(Kron, DiagonalProduct) {
  MatrixXc expected = MatrixXc::Zero(4, 4);
  expected.diagonal() << 1, -1, -1, 1;
  EXPECT_LT(max_abs(MatrixXc(kron(ops::sigma_z(), ops::sigma_z()) - expected)), 1e-15);
}

TEST(Kron, XZOnZeroZeroGivesOneZero) {
  VectorXc v = VectorXc::Zero(4);
  v(0) = 1.0;
  VectorXc out = kron(ops::sigma_x(), ops::sigma_z()) * v;
  VectorXc expected = VectorXc::Zero(4);
  expected(2) = 1.0;  // |10>
  EXPECT_LT((out - expected).norm(), 1e-15);
}

TEST(Kron, SparseMatchesDense) {
  std::mt19937_64 gen(7);
  MatrixXc a = random_matrix(3, 2, gen), b = random_matrix(2, 4, gen);
  SparseOp s = kron(sparsify(a), sparsify(b));
  EXPECT_LT(max_abs(MatrixXc(MatrixXc(s) - kron(a, b))), 1e-14);
}

TEST(Kron, DimensionCap) {
  EXPECT_THROW(kron(ops::identity(4), ops::identity(4), 8), DimensionError);
  SparseOp big = sparse_identity(2048);
  EXPECT_THROW(kron(big, big), DimensionError);
}

TEST(KronProperty, Associativity) {
  std::mt19937_64 gen(11);
  for (int trial = 0; trial < 20; ++trial) {
    MatrixXc a = random_matrix(2, 3, gen), b = random_matrix(3, 2, gen), c = random_matrix(2, 2, gen);
    MatrixXc lhs = kron(kron(a, b), c), rhs = kron(a, kron(b, c));
    EXPECT_LT(max_abs(MatrixXc(lhs - rhs)), 1e-14);
  }
}

TEST(Embed, SingleFlip) {
  StateVector psi = StateVector::basis({2, 2, 2}, {0, 0, 0});
  StateVector out = zenolgt::apply(embed(ops::sigma_x(), {2, 2, 2}, {1}), psi);
  EXPECT_LT((out.amplitudes - StateVector::basis({2, 2, 2}, {0, 1, 0}).amplitudes).norm(), 1e-15);
}

TEST(Embed, NonContiguousTargets) {
  SparseOp e = embed(kron(ops::sigma_z(), ops::sigma_z()), {2, 2, 2}, {0, 2});
  MatrixXc expected = kron(kron(ops::sigma_z(), ops::identity(2)), ops::sigma_z());
  EXPECT_LT(max_abs(MatrixXc(MatrixXc(e) - expected)), 1e-15);
}

TEST(Embed, IdentityIsGlobalIdentity) {
  std::vector<int> dims{2, 3, 2};
  SparseOp e = embed(ops::identity(3), dims, {1});
  EXPECT_LT(max_abs(MatrixXc(MatrixXc(e) - MatrixXc::Identity(12, 12))), 1e-15);
}

TEST(Embed, Errors) {
  EXPECT_THROW(embed(ops::sigma_x(), {2, 2}, {2}), DimensionError);
  EXPECT_THROW(embed(ops::sigma_x(), {2, 3}, {1}), DimensionError);
  EXPECT_THROW(embed(ops::identity(4), {2, 2, 2}, {2, 0}), DimensionError);
}

// Basis-by-basis construction of an embedded operator.
MatrixXc embed_reference(const MatrixXc& local, const std::vector<int>& dims, const std::vector<int>& targets) {
  const std::size_t dim = register_dimension(dims);
  MatrixXc out = MatrixXc::Zero(dim, dim);
  for (std::size_t r = 0; r < dim; ++r)
    for (std::size_t c = 0; c < dim; ++c) {
      auto dr = basis_digits(dims, r), dc = basis_digits(dims, c);
      bool same_rest = true;
      for (std::size_t s = 0; s < dims.size(); ++s)
        if (std::find(targets.begin(), targets.end(), static_cast<int>(s)) == targets.end() && dr[s] != dc[s])
          same_rest = false;
      if (!same_rest) continue;
      std::size_t lr = 0, lc = 0;
      for (int t : targets) {
        lr = lr * dims[t] + dr[t];
        lc = lc * dims[t] + dc[t];
      }
      out(r, c) = local(lr, lc);
    }
  return out;
}

TEST(EmbedProperty, MatchesReferenceUpToFiveSites) {
  std::mt19937_64 gen(3);
  const std::vector<std::vector<int>> registers{{2, 2}, {2, 3, 2}, {2, 2, 2, 2}, {2, 3, 2, 3, 2}};
  for (const auto& dims : registers) {
    const int n = static_cast<int>(dims.size());
    for (int mask = 1; mask < (1 << n); ++mask) {
      std::vector<int> targets;
      int d = 1;
      for (int s = 0; s < n; ++s)
        if (mask & (1 << s)) {
          targets.push_back(s);
          d *= dims[s];
        }
      if (d > 16) continue;
      MatrixXc local = random_matrix(d, d, gen);
      MatrixXc got(embed(local, dims, targets));
      EXPECT_LT(max_abs(MatrixXc(got - embed_reference(local, dims, targets))), 1e-14);
    }
  }
}

TEST(EmbedProperty, ProductOfSingleSiteEmbedsIsKronChain) {
  std::mt19937_64 gen(5);
  std::vector<int> dims{2, 3, 2, 3, 2};
  std::vector<MatrixXc> locals;
  for (int d : dims) locals.push_back(random_matrix(d, d, gen));
  MatrixXc chain = locals[0];
  for (std::size_t s = 1; s < dims.size(); ++s) chain = kron(chain, locals[s]);
  SparseOp prod = sparse_identity(register_dimension(dims));
  for (std::size_t s = 0; s < dims.size(); ++s) prod = prod * embed(locals[s], dims, {static_cast<int>(s)});
  EXPECT_LT(max_abs(MatrixXc(MatrixXc(prod) - chain)), 1e-12);
}

TEST(Expm, ZeroIsIdentity) { EXPECT_LT(max_abs(MatrixXc(expm_small(MatrixXc::Zero(5, 5)) - ops::identity(5))), 1e-15); }

TEST(Expm, PauliXRotation) {
  const double theta = 0.37;
  MatrixXc u = expm_small(cplx(0, -theta) * ops::sigma_x());
  MatrixXc expected = std::cos(theta) * ops::identity(2) - cplx(0, std::sin(theta)) * ops::sigma_x();
  EXPECT_LT(max_abs(MatrixXc(u - expected)), 1e-12);
}

TEST(Expm, HalfPiZRotation) {
  MatrixXc u = expm_small(cplx(0, -M_PI / 2) * ops::sigma_z());
  MatrixXc expected = MatrixXc::Zero(2, 2);
  expected(0, 0) = cplx(0, -1);
  expected(1, 1) = cplx(0, 1);
  EXPECT_LT(max_abs(MatrixXc(u - expected)), 1e-12);
}

TEST(Expm, RefusesLargeMatrices) { EXPECT_THROW(expm_small(MatrixXc::Zero(65, 65)), DimensionError); }

TEST(ExpmProperty, AntiHermitianGivesUnitary) {
  std::mt19937_64 gen(13);
  for (int d : {2, 3, 8, 27, 64}) {
    MatrixXc a = random_matrix(d, d, gen);
    MatrixXc h = 0.5 * (a + a.adjoint());
    MatrixXc u = expm_small(cplx(0, -1) * h);
    EXPECT_LT(max_abs(MatrixXc(u.adjoint() * u - ops::identity(d))), 1e-10) << "d=" << d;
  }
}

TEST(Apply, IdentityAndFlip) {
  StateVector psi = StateVector::basis({2, 2}, {0, 0});
  EXPECT_LT((zenolgt::apply(sparse_identity(4), psi).amplitudes - psi.amplitudes).norm(), 1e-15);
  StateVector out = zenolgt::apply(sparsify(kron(ops::sigma_x(), ops::identity(2))), psi);
  EXPECT_LT((out.amplitudes - StateVector::basis({2, 2}, {1, 0}).amplitudes).norm(), 1e-15);
  EXPECT_THROW(zenolgt::apply(sparse_identity(8), psi), DimensionError);
}

TEST(Apply, ProjectorOnEigenstate) {
  ModelSpec spec;
  spec.n_matter = 3;
  auto charges = build_gauss_charges(spec);
  auto [psi, target] = prepare_meson_state(spec, charges);
  for (int n = 0; n < charges.size(); ++n) {
    StateVector out = zenolgt::apply(charges.projector(n, target.labels[n]), psi);
    EXPECT_LT((out.amplitudes - psi.amplitudes).norm(), 1e-15);
  }
}

TEST(Expectation, PauliValues) {
  StateVector zero = StateVector::basis({2}, {0});
  EXPECT_NEAR(expectation(sparsify(ops::sigma_z()), zero).real(), 1.0, 1e-15);
  EXPECT_NEAR(std::abs(expectation(sparsify(ops::sigma_x()), zero)), 0.0, 1e-15);
  VectorXc plus(2);
  plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  EXPECT_NEAR(std::abs(expectation(sparsify(ops::sigma_z()), StateVector(plus, {2}))), 0.0, 1e-15);
}

TEST(Expectation, HermitianHasRealValue) {
  std::mt19937_64 gen(17);
  MatrixXc a = random_matrix(8, 8, gen);
  MatrixXc h = a + a.adjoint();
  VectorXc v = random_matrix(8, 1, gen);
  StateVector psi(v.normalized(), {2, 2, 2});
  EXPECT_LT(std::abs(expectation(sparsify(h), psi).imag()), 1e-10);
}

std::vector<cplx> sorted(const VectorXc& v) {
  std::vector<cplx> out(v.data(), v.data() + v.size());
  std::sort(out.begin(), out.end(), [](cplx a, cplx b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return out;
}

// Greedy nearest-neighbour matching distance between two eigenvalue lists.
double matching_distance(const VectorXc& a, const VectorXc& b) {
  std::vector<cplx> pool(b.data(), b.data() + b.size());
  double worst = 0.0;
  for (Eigen::Index k = 0; k < a.size(); ++k) {
    auto it = std::min_element(pool.begin(), pool.end(),
                               [&](cplx x, cplx y) { return std::abs(x - a(k)) < std::abs(y - a(k)); });
    worst = std::max(worst, std::abs(*it - a(k)));
    pool.erase(it);
  }
  return worst;
}

TEST(EigGeneral, Diagonal) {
  MatrixXc m = MatrixXc::Zero(2, 2);
  m(0, 0) = 1.0;
  m(1, 1) = cplx(0, 2);
  auto ev = sorted(eig_general(m).values);
  EXPECT_LT(std::abs(ev[0] - cplx(0, 2)), 1e-14);
  EXPECT_LT(std::abs(ev[1] - cplx(1, 0)), 1e-14);
}

TEST(EigGeneral, PauliX) {
  auto ev = sorted(eig_general(ops::sigma_x()).values);
  EXPECT_LT(std::abs(ev[0] + 1.0), 1e-14);
  EXPECT_LT(std::abs(ev[1] - 1.0), 1e-14);
}

TEST(EigGeneral, DefectiveJordanBlock) {
  // Characteristic polynomial of [[0,1],[0,0]] is x^2.
  auto ev = eig_general(ops::sigma_plus()).values;
  EXPECT_LT(std::abs(ev(0)), 1e-14);
  EXPECT_LT(std::abs(ev(1)), 1e-14);
}

TEST(EigGeneral, CapEnforced) {
  EXPECT_THROW(eig_general(MatrixXc(MatrixXc::Zero(5, 5)), false, 4), DimensionError);
}

TEST(EigGeneralProperty, TraceAndResidual) {
  std::mt19937_64 gen(19);
  for (int d : {3, 10, 40, 120}) {
    MatrixXc m = random_matrix(d, d, gen);
    auto res = eig_general(m, true);
    EXPECT_LT(std::abs(res.values.sum() - m.trace()), 1e-8 * d);
    const MatrixXc& v = *res.vectors;
    for (int k = 0; k < d; ++k)
      EXPECT_LT((m * v.col(k) - res.values(k) * v.col(k)).norm() / v.col(k).norm(), 1e-8);
  }
}

TEST(EigGeneralProperty, RealPathMatchesComplexPath) {
  std::mt19937_64 gen(23);
  std::normal_distribution<double> nd;
  Eigen::MatrixXd m(30, 30);
  for (int i = 0; i < 30; ++i)
    for (int j = 0; j < 30; ++j) m(i, j) = nd(gen);
  EXPECT_LT(matching_distance(eig_general(m).values, eig_general(MatrixXc(m.cast<cplx>())).values), 1e-9);
  auto res = eig_general(m, true);
  for (int k = 0; k < 30; ++k) {
    const VectorXc v = res.vectors->col(k);
    EXPECT_LT((m.cast<cplx>() * v - res.values(k) * v).norm(), 1e-8);
  }
}

TEST(Sparsify, DropsTinyEntriesAndRejectsNonFinite) {
  MatrixXc m = MatrixXc::Zero(2, 2);
  m(0, 0) = 1.0;
  m(1, 1) = 1e-16;
  EXPECT_EQ(sparsify(m).nonZeros(), 1);
  m(0, 1) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(sparsify(m), NumericalError);
}

TEST(LocalKernels, MatchEmbed) {
  std::mt19937_64 gen(29);
  std::vector<int> dims{2, 3, 2, 3, 2};
  VectorXc v = random_matrix(static_cast<int>(register_dimension(dims)), 1, gen);
  for (int first = 0; first < 5; ++first)
    for (int count = 1; first + count <= 5 && count <= 3; ++count) {
      int d = 1;
      std::vector<int> targets;
      for (int k = 0; k < count; ++k) {
        d *= dims[first + k];
        targets.push_back(first + k);
      }
      MatrixXc local = random_matrix(d, d, gen);
      VectorXc a = v;
      apply_local(a, dims, LocalGate(first, count, local));
      VectorXc b = embed(local, dims, targets) * v;
      EXPECT_LT((a - b).norm(), 1e-12);
    }
}

TEST(LocalKernels, PartiallyTrivialGate) {
  MatrixXc local = ops::identity(8);
  local.block(2, 2, 2, 2) = ops::sigma_x();
  LocalGate g(0, 3, local);
  EXPECT_EQ(g.active.size(), 2u);
  VectorXc v = VectorXc::LinSpaced(16, 0.0, 15.0);
  VectorXc a = v;
  apply_local(a, {2, 2, 2, 2}, g);
  EXPECT_LT((a - embed(local, {2, 2, 2, 2}, {0, 1, 2}) * v).norm(), 1e-14);
}

TEST(DensityMatrix, Checks) {
  MatrixXc rho = MatrixXc::Identity(4, 4) / 4.0;
  EXPECT_NO_THROW(check_density_matrix(rho));
  rho(0, 1) = 0.1;
  EXPECT_THROW(check_density_matrix(rho), NumericalError);
}

}  // namespace
}  // namespace zenolgt
