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

#ifndef MASKDIFF_CORE_SCHEDULE_H_
#define MASKDIFF_CORE_SCHEDULE_H_

namespace maskdiff {

enum class ScheduleKind { kLinear };

// Strictly decreasing retention probability alpha(t) on [t_min, t_max].
// Evaluation outside that interval is a DomainError; the clamp keeps the
// 1 / (1 - alpha) loss weight and 1 / alpha rate finite.
class NoiseSchedule {
 public:
  static constexpr double kDefaultTMin = 1e-3;
  static constexpr double kDefaultTMax = 1.0 - 1e-3;

  static NoiseSchedule Linear(double t_min = kDefaultTMin,
                              double t_max = kDefaultTMax);

  ScheduleKind kind() const { return kind_; }
  double t_min() const { return t_min_; }
  double t_max() const { return t_max_; }
  double width() const { return t_max_ - t_min_; }

  double alpha(double t) const;
  double alpha_dot(double t) const;
  // alpha(t) / alpha(s) for s < t.
  double alpha_cond(double s, double t) const;
  // Instantaneous corruption rate -alpha_dot / alpha.
  double rate(double t) const;

  // Affine map of a unit-interval grid node onto [t_min, t_max]; the
  // endpoints map exactly.
  double from_unit(double u) const {
    if (u >= 1.0) return t_max_;
    return t_min_ + u * (t_max_ - t_min_);
  }

  bool contains(double t) const { return t >= t_min_ && t <= t_max_; }

 private:
  NoiseSchedule(ScheduleKind kind, double t_min, double t_max)
      : kind_(kind), t_min_(t_min), t_max_(t_max) {}

  void check_domain(double t) const;

  ScheduleKind kind_;
  double t_min_;
  double t_max_;
};

}  // namespace maskdiff

#endif  // MASKDIFF_CORE_SCHEDULE_H_
