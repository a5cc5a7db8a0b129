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

#ifndef MASKDIFF_CORE_TIME_GRID_H_
#define MASKDIFF_CORE_TIME_GRID_H_

#include <span>
#include <vector>

namespace maskdiff {

// Discretization 0 = t_0 < t_1 < ... < t_T = 1.
class TimeGrid {
 public:
  static TimeGrid Uniform(int steps);
  static TimeGrid FromNodes(std::vector<double> nodes);

  int steps() const { return static_cast<int>(nodes_.size()) - 1; }
  double node(int i) const { return nodes_.at(i); }
  std::span<const double> nodes() const { return nodes_; }

 private:
  explicit TimeGrid(std::vector<double> nodes) : nodes_(std::move(nodes)) {}
  std::vector<double> nodes_;
};

}  // namespace maskdiff

#endif  // MASKDIFF_CORE_TIME_GRID_H_
