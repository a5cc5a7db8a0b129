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

#ifndef MASKDIFF_PIPELINE_METRICS_IO_H_
#define MASKDIFF_PIPELINE_METRICS_IO_H_

#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace maskdiff {

// One line of the metrics stream:
//   step=<n> mode=<m> loss=<x> asr=<x|NA> fpr=<x|NA> val_nelbo=<x|NA>
// Reals are printed with 17 significant digits so files round-trip.
struct MetricRecord {
  int step = 0;
  std::string mode;
  double loss = 0.0;
  std::optional<double> asr;
  std::optional<double> fpr;
  std::optional<double> val_nelbo;
};

std::string format_metric(const MetricRecord& record);
// Throws FormatError on a malformed line.
MetricRecord parse_metric(const std::string& line);

void append_metrics(const std::string& path,
                    const std::vector<MetricRecord>& records);
std::vector<MetricRecord> read_metrics(const std::string& path);

// Shortest round-tripping text for a double ("%.17g").
std::string format_real(double value);

}  // namespace maskdiff

#endif  // MASKDIFF_PIPELINE_METRICS_IO_H_
