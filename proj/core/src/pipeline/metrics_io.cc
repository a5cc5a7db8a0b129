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

#include "maskdiff/pipeline/metrics_io.h"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "maskdiff/core/errors.h"

namespace maskdiff {
namespace {

constexpr const char* kKeys[] = {"step", "mode", "loss", "asr", "fpr",
                                 "val_nelbo"};

std::string format_optional(const std::optional<double>& v) {
  return v ? format_real(*v) : std::string("NA");
}

double parse_real(const std::string& text, const std::string& line) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) {
    throw FormatError("bad number '" + text + "' in metrics line: " + line);
  }
  return value;
}

}  // namespace

std::string format_real(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

std::string format_metric(const MetricRecord& r) {
  std::ostringstream out;
  out << "step=" << r.step << " mode=" << r.mode
      << " loss=" << format_real(r.loss) << " asr=" << format_optional(r.asr)
      << " fpr=" << format_optional(r.fpr)
      << " val_nelbo=" << format_optional(r.val_nelbo);
  return out.str();
}

MetricRecord parse_metric(const std::string& line) {
  std::istringstream in(line);
  std::string field;
  std::string values[6];
  int k = 0;
  while (in >> field) {
    if (k >= 6) throw FormatError("extra field in metrics line: " + line);
    const std::string prefix = std::string(kKeys[k]) + "=";
    if (field.rfind(prefix, 0) != 0) {
      throw FormatError("expected key '" + std::string(kKeys[k]) +
                        "' in metrics line: " + line);
    }
    values[k++] = field.substr(prefix.size());
  }
  if (k != 6) throw FormatError("truncated metrics line: " + line);
  MetricRecord r;
  const double step = parse_real(values[0], line);
  r.step = static_cast<int>(step);
  if (static_cast<double>(r.step) != step) {
    throw FormatError("non-integer step in metrics line: " + line);
  }
  r.mode = values[1];
  r.loss = parse_real(values[2], line);
  auto optional = [&](const std::string& v) -> std::optional<double> {
    if (v == "NA") return std::nullopt;
    return parse_real(v, line);
  };
  r.asr = optional(values[3]);
  r.fpr = optional(values[4]);
  r.val_nelbo = optional(values[5]);
  return r;
}

void append_metrics(const std::string& path,
                    const std::vector<MetricRecord>& records) {
  std::ofstream out(path, std::ios::app);
  if (!out) throw IoError("cannot open " + path + " for appending");
  for (const MetricRecord& r : records) out << format_metric(r) << '\n';
  if (!out) throw IoError("write failed: " + path);
}

std::vector<MetricRecord> read_metrics(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::vector<MetricRecord> records;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) records.push_back(parse_metric(line));
  }
  return records;
}

}  // namespace maskdiff
