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
#include <vector>

namespace zenolgt {

/// Hartigan's dip: sup distance between the empirical CDF and the closest unimodal CDF.
/// Lies in [1/(2n), 1/4].
double dip_statistic(std::vector<double> samples);

/// Upper `1 - alpha` quantile of the dip of n uniform samples, by Monte Carlo.
double dip_critical_value(int n, double alpha = 0.05, int n_draws = 2000, std::uint64_t seed = 20240613);

bool is_bimodal(const std::vector<double>& samples, double alpha = 0.05);

}  // namespace zenolgt
