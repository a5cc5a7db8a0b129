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

#ifndef MASKDIFF_SRC_DENOISER_SHIFT_H_
#define MASKDIFF_SRC_DENOISER_SHIFT_H_

#include <Eigen/Dense>

namespace maskdiff::internal {

// Column l of the result is column l - 1 of x (zero at l = 0).
inline Eigen::MatrixXd shift_right(const Eigen::MatrixXd& x) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(x.rows(), x.cols());
  if (x.cols() > 1) out.rightCols(x.cols() - 1) = x.leftCols(x.cols() - 1);
  return out;
}

// Column l of the result is column l + 1 of x (zero at the last column).
// Adjoint of shift_right.
inline Eigen::MatrixXd shift_left(const Eigen::MatrixXd& x) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(x.rows(), x.cols());
  if (x.cols() > 1) out.leftCols(x.cols() - 1) = x.rightCols(x.cols() - 1);
  return out;
}

}  // namespace maskdiff::internal

#endif  // MASKDIFF_SRC_DENOISER_SHIFT_H_
