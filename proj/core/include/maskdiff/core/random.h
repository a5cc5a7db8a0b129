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

#ifndef MASKDIFF_CORE_RANDOM_H_
#define MASKDIFF_CORE_RANDOM_H_

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>

namespace maskdiff {

std::uint64_t splitmix64(std::uint64_t x);

// Seed of the index-th independent chain derived from a base seed.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  return seed ^ index;
}

// Seeded generator with platform-independent conversions. The engine is
// mt19937_64; doubles and bounded integers are derived from raw 64-bit
// outputs here rather than through <random> distributions, whose algorithms
// differ between standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

  std::uint64_t next() { return engine_(); }
  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // Uniform integer in [0, n).
  std::size_t index(std::size_t n);
  // Inverse-CDF draw from nonnegative weights summing to ~1.
  int categorical(std::span<const double> probs);
  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace maskdiff

#endif  // MASKDIFF_CORE_RANDOM_H_
