// Copyright 2026 The maskdiff Authors.
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

#include "maskdiff/core/time_grid.h"

#include <string>

#include "maskdiff/core/errors.h"

namespace maskdiff {

TimeGrid TimeGrid::Uniform(int steps) {
  if (steps < 1) {
    throw ArgumentError("time grid needs at least one step, got " +
                        std::to_string(steps));
  }
  std::vector<double> nodes(steps + 1);
  for (int i = 0; i <= steps; ++i) {
    nodes[i] = static_cast<double>(i) / steps;
  }
  return TimeGrid(std::move(nodes));
}

TimeGrid TimeGrid::FromNodes(std::vector<double> nodes) {
  if (nodes.size() < 2) {
    throw ArgumentError("time grid needs at least two nodes");
  }
  if (nodes.front() != 0.0 || nodes.back() != 1.0) {
    throw ArgumentError("time grid endpoints must be exactly 0 and 1");
  }
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    if (!(nodes[i] > nodes[i - 1])) {
      throw ArgumentError("time grid nodes must be strictly increasing");
    }
  }
  return TimeGrid(std::move(nodes));
}

}  // namespace maskdiff
