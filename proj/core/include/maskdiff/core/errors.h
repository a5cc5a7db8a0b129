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

#ifndef MASKDIFF_CORE_ERRORS_H_
#define MASKDIFF_CORE_ERRORS_H_

#include <stdexcept>
#include <string>

namespace maskdiff {

// Argument outside the domain of a schedule or distribution.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A latent state that has zero probability under the forward process.
class InconsistentStateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A denoiser output that puts mass on a terminal corruption state.
class ConstraintViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A concrete-score ratio whose denominator or value is 0 or infinite.
class DegenerateRatioError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Malformed config, corpus, checkpoint or metrics content.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class TrainingDiverged : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace maskdiff

#endif  // MASKDIFF_CORE_ERRORS_H_
