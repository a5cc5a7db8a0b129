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

#include "maskdiff/core/schedule.h"

#include <sstream>

#include "maskdiff/core/errors.h"

namespace maskdiff {

NoiseSchedule NoiseSchedule::Linear(double t_min, double t_max) {
  if (!(t_min > 0.0 && t_max < 1.0 && t_min < t_max)) {
    std::ostringstream msg;
    msg << "schedule interval must satisfy 0 < t_min < t_max < 1, got ["
        << t_min << ", " << t_max << "]";
    throw ArgumentError(msg.str());
  }
  return NoiseSchedule(ScheduleKind::kLinear, t_min, t_max);
}

void NoiseSchedule::check_domain(double t) const {
  if (!contains(t)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "t = " << t << " outside schedule domain [" << t_min_ << ", "
        << t_max_ << "]";
    throw DomainError(msg.str());
  }
}

double NoiseSchedule::alpha(double t) const {
  check_domain(t);
  switch (kind_) {
    case ScheduleKind::kLinear:
      return 1.0 - t;
  }
  return 0.0;
}

double NoiseSchedule::alpha_dot(double t) const {
  check_domain(t);
  switch (kind_) {
    case ScheduleKind::kLinear:
      return -1.0;
  }
  return 0.0;
}

double NoiseSchedule::alpha_cond(double s, double t) const {
  if (!(s < t)) {
    std::ostringstream msg;
    msg << "alpha_cond requires s < t, got s = " << s << ", t = " << t;
    throw ArgumentError(msg.str());
  }
  return alpha(t) / alpha(s);
}

double NoiseSchedule::rate(double t) const { return -alpha_dot(t) / alpha(t); }

}  // namespace maskdiff
