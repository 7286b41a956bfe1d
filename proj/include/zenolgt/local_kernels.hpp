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

#include <variant>
#include <vector>

#include "zenolgt/linalg.hpp"

namespace zenolgt {

/// Dense operator on a contiguous block of sites, applied in place with strided access.
/// Only the rows and columns where the matrix differs from the identity are touched.
struct LocalGate {
  int first_site = 0;
  int n_sites = 1;
  MatrixXc matrix;
  std::vector<int> active;
  MatrixXc active_block;

  LocalGate() = default;
  LocalGate(int first, int count, MatrixXc m);
};

struct DiagonalGate {
  VectorXc diagonal;
};

using Gate = std::variant<LocalGate, DiagonalGate>;

void apply_local(VectorXc& amps, const std::vector<int>& register_dims, const LocalGate& gate);
void apply_diagonal(VectorXc& amps, const VectorXc& diagonal);
void apply_gate(VectorXc& amps, const std::vector<int>& register_dims, const Gate& gate);
void apply_gates(VectorXc& amps, const std::vector<int>& register_dims, const std::vector<Gate>& gates);

/// Diagonal of an operator that acts as `local_diag` on contiguous sites, identity elsewhere.
VectorXc embed_diagonal(const Eigen::VectorXd& local_diag, const std::vector<int>& register_dims, int first_site,
                        int n_sites);

}  // namespace zenolgt
