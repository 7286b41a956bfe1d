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

#include "zenolgt/dps.hpp"

namespace zenolgt::detail {

struct LayerOutcome {
  bool violation = false;
  bool discarded = false;
  bool verify_failed = false;
};

/// Applies the decoder (when enabled) to the state after a measurement layer.
LayerOutcome resolve_layer(const DpsSimulator& sim, VectorXc& amps, const std::vector<int>& syndrome,
                           bool already_discarded);
void record_layer(TrajectoryResult& r, const LayerOutcome& o, int step);

}  // namespace zenolgt::detail
