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

#include "zenolgt/local_kernels.hpp"

#include <array>
#include <cmath>

namespace zenolgt {

namespace {

constexpr std::size_t kMax = 32;

struct BlockShape {
  std::size_t inner;  // stride of the block (product of dims right of it)
  std::size_t local;  // product of block dims
  std::size_t outer;
};

BlockShape block_shape(const std::vector<int>& dims, int first, int count) {
  if (first < 0 || count < 1 || first + count > static_cast<int>(dims.size()))
    throw DimensionError("local gate: sites out of range");
  BlockShape b{1, 1, 1};
  for (int k = 0; k < static_cast<int>(dims.size()); ++k) {
    const auto d = static_cast<std::size_t>(dims[k]);
    if (k < first)
      b.outer *= d;
    else if (k < first + count)
      b.local *= d;
    else
      b.inner *= d;
  }
  return b;
}

// A = kMax handles any active count up to kMax with runtime bounds.
template <std::size_t A>
void apply_block(VectorXc& amps, const BlockShape& b, const LocalGate& gate) {
  const std::size_t a = gate.active.size();
  std::array<std::size_t, A> offs{};
  for (std::size_t j = 0; j < a; ++j) offs[j] = static_cast<std::size_t>(gate.active[j]) * b.inner;
  std::array<double, A * A> mr{};
  std::array<double, A * A> mi{};
  for (std::size_t i = 0; i < a; ++i)
    for (std::size_t j = 0; j < a; ++j) {
      mr[i * A + j] = gate.active_block(i, j).real();
      mi[i * A + j] = gate.active_block(i, j).imag();
    }
  std::array<double, A> xr{};
  std::array<double, A> xi{};
  cplx* data = amps.data();
  for (std::size_t o = 0; o < b.outer; ++o) {
    cplx* blk = data + o * b.local * b.inner;
    for (std::size_t lo = 0; lo < b.inner; ++lo) {
      for (std::size_t j = 0; j < a; ++j) {
        xr[j] = blk[offs[j] + lo].real();
        xi[j] = blk[offs[j] + lo].imag();
      }
      for (std::size_t i = 0; i < a; ++i) {
        double re = 0.0;
        double im = 0.0;
        for (std::size_t j = 0; j < a; ++j) {
          re += mr[i * A + j] * xr[j] - mi[i * A + j] * xi[j];
          im += mr[i * A + j] * xi[j] + mi[i * A + j] * xr[j];
        }
        blk[offs[i] + lo] = cplx(re, im);
      }
    }
  }
}

}  // namespace

LocalGate::LocalGate(int first, int count, MatrixXc m) : first_site(first), n_sites(count), matrix(std::move(m)) {
  if (matrix.rows() != matrix.cols()) throw DimensionError("LocalGate: matrix must be square");
  const Eigen::Index d = matrix.rows();
  for (Eigen::Index k = 0; k < d; ++k) {
    bool trivial = true;
    for (Eigen::Index j = 0; j < d && trivial; ++j) {
      const cplx id = (j == k) ? cplx(1.0) : cplx(0.0);
      if (std::abs(matrix(k, j) - id) > 1e-15 || std::abs(matrix(j, k) - id) > 1e-15) trivial = false;
    }
    if (!trivial) active.push_back(static_cast<int>(k));
  }
  const auto a = static_cast<Eigen::Index>(active.size());
  active_block.resize(a, a);
  for (Eigen::Index i = 0; i < a; ++i)
    for (Eigen::Index j = 0; j < a; ++j) active_block(i, j) = matrix(active[i], active[j]);
}

void apply_local(VectorXc& amps, const std::vector<int>& register_dims, const LocalGate& gate) {
  const BlockShape b = block_shape(register_dims, gate.first_site, gate.n_sites);
  if (static_cast<std::size_t>(gate.matrix.rows()) != b.local)
    throw DimensionError("apply_local: gate dimension does not match sites");
  if (static_cast<std::size_t>(amps.size()) != b.outer * b.local * b.inner)
    throw DimensionError("apply_local: state dimension mismatch");
  const std::size_t a = gate.active.size();
  if (a == 0) return;
  if (a > kMax) {
    VectorXc x(static_cast<Eigen::Index>(a));
    for (std::size_t o = 0; o < b.outer; ++o) {
      const std::size_t base = o * b.local * b.inner;
      for (std::size_t lo = 0; lo < b.inner; ++lo) {
        for (std::size_t j = 0; j < a; ++j) x(j) = amps(base + gate.active[j] * b.inner + lo);
        VectorXc y = gate.active_block * x;
        for (std::size_t j = 0; j < a; ++j) amps(base + gate.active[j] * b.inner + lo) = y(j);
      }
    }
    return;
  }
  switch (a) {
    case 1:
      apply_block<1>(amps, b, gate);
      return;
    case 2:
      apply_block<2>(amps, b, gate);
      return;
    case 3:
      apply_block<3>(amps, b, gate);
      return;
    case 4:
      apply_block<4>(amps, b, gate);
      return;
    case 6:
      apply_block<6>(amps, b, gate);
      return;
    case 8:
      apply_block<8>(amps, b, gate);
      return;
    default:
      apply_block<kMax>(amps, b, gate);
  }
}

void apply_diagonal(VectorXc& amps, const VectorXc& diagonal) {
  if (diagonal.size() != amps.size()) throw DimensionError("apply_diagonal: dimension mismatch");
  amps.array() *= diagonal.array();
}

void apply_gate(VectorXc& amps, const std::vector<int>& register_dims, const Gate& gate) {
  if (const auto* g = std::get_if<LocalGate>(&gate))
    apply_local(amps, register_dims, *g);
  else
    apply_diagonal(amps, std::get<DiagonalGate>(gate).diagonal);
}

void apply_gates(VectorXc& amps, const std::vector<int>& register_dims, const std::vector<Gate>& gates) {
  for (const auto& g : gates) apply_gate(amps, register_dims, g);
}

VectorXc embed_diagonal(const Eigen::VectorXd& local_diag, const std::vector<int>& register_dims, int first_site,
                        int n_sites) {
  const BlockShape b = block_shape(register_dims, first_site, n_sites);
  if (static_cast<std::size_t>(local_diag.size()) != b.local)
    throw DimensionError("embed_diagonal: dimension mismatch");
  VectorXc out(static_cast<Eigen::Index>(b.outer * b.local * b.inner));
  std::size_t idx = 0;
  for (std::size_t o = 0; o < b.outer; ++o)
    for (std::size_t l = 0; l < b.local; ++l)
      for (std::size_t lo = 0; lo < b.inner; ++lo) out(idx++) = local_diag(l);
  return out;
}

}  // namespace zenolgt
