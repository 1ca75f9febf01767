// Copyright 2026 The nvo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "nvo/preprocess.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_split.h"
#include "absl/strings/string_view.h"
#include "absl/strings/strip.h"
#include "absl/strings/ascii.h"

namespace nvo {

double Distribution::Sum() const {
  return std::accumulate(masses.begin(), masses.end(), 0.0);
}

double NormalizationParams::Normalize(double value) const {
  return (value - lower()) / (upper() - lower());
}

double NormalizationParams::Denormalize(double unit_value) const {
  return lower() + unit_value * (upper() - lower());
}

double PercentileMargin(double epsilon, double percentile, double sensitivity) {
  return (sensitivity / epsilon) * -std::log(2.0 - 2.0 * percentile);
}

namespace {

absl::Status CheckValues(const RawDataset& data) {
  if (data.values.empty()) {
    return absl::InvalidArgumentError("dataset is empty");
  }
  for (size_t i = 0; i < data.values.size(); ++i) {
    if (!std::isfinite(data.values[i])) {
      return absl::InvalidArgumentError(
          absl::StrFormat("value at index %d is not finite", i));
    }
  }
  if (data.values.size() < 2) {
    return absl::InvalidArgumentError(
        "dataset needs at least two instances for per-instance accounting");
  }
  return absl::OkStatus();
}

}  // namespace

absl::StatusOr<NormalizationParams> ComputeNormalization(const RawDataset& data,
                                                         double epsilon,
                                                         double percentile,
                                                         double sensitivity) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    return absl::InvalidArgumentError("epsilon must be positive and finite");
  }
  if (!(percentile > 0.5 && percentile < 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("percentile %g outside (0.5, 1)", percentile));
  }
  if (!(sensitivity > 0.0) || !std::isfinite(sensitivity)) {
    return absl::InvalidArgumentError("sensitivity must be positive and finite");
  }
  if (absl::Status s = CheckValues(data); !s.ok()) return s;

  const auto [lo, hi] = std::minmax_element(data.values.begin(), data.values.end());
  NormalizationParams params;
  params.epsilon_target = epsilon;
  params.percentile = percentile;
  params.sensitivity = sensitivity;
  params.margin = PercentileMargin(epsilon, percentile, sensitivity);
  params.d_min = *lo;
  params.d_max = *hi;
  return params;
}

int BinIndex(double unit_value, int k) {
  if (!(unit_value > 0.0)) return 0;
  const double scaled = std::floor(unit_value * k);
  if (scaled >= k) return k - 1;
  return static_cast<int>(scaled);
}

std::vector<double> BinRepresentatives(int k) {
  std::vector<double> reps(k);
  for (int i = 0; i < k; ++i) reps[i] = (2.0 * i + 1.0) / (2.0 * k);
  return reps;
}

absl::Status RebuildHistogram(BinnedDataset& binned) {
  if (binned.k < 2) {
    return absl::InvalidArgumentError(
        absl::StrFormat("bin count %d must be at least 2", binned.k));
  }
  binned.representatives = BinRepresentatives(binned.k);
  binned.counts.assign(binned.k, 0);
  for (size_t i = 0; i < binned.bin_of.size(); ++i) {
    const int bin = binned.bin_of[i];
    if (bin < 0 || bin >= binned.k) {
      return absl::InvalidArgumentError(
          absl::StrFormat("instance %d has bin %d outside [0, %d)", i, bin,
                          binned.k));
    }
    ++binned.counts[bin];
  }
  return absl::OkStatus();
}

absl::StatusOr<BinnedDataset> NormalizeAndBin(const RawDataset& data,
                                              const NormalizationParams& params,
                                              int k) {
  if (k < 2) {
    return absl::InvalidArgumentError(
        absl::StrFormat("bin count %d must be at least 2", k));
  }
  if (absl::Status s = CheckValues(data); !s.ok()) return s;
  const auto [lo, hi] = std::minmax_element(data.values.begin(), data.values.end());
  if (*lo != params.d_min || *hi != params.d_max) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "normalization range [%g, %g] does not match data extremes [%g, %g]",
        params.d_min, params.d_max, *lo, *hi));
  }
  if (!(params.margin > 0.0)) {
    return absl::InvalidArgumentError("normalization margin must be positive");
  }

  BinnedDataset binned;
  binned.k = k;
  binned.normalization = params;
  binned.bin_of.reserve(data.values.size());
  for (double v : data.values) {
    binned.bin_of.push_back(BinIndex(params.Normalize(v), k));
  }
  if (absl::Status s = RebuildHistogram(binned); !s.ok()) return s;
  return binned;
}

Distribution EmpiricalDistribution(const BinnedDataset& binned) {
  Distribution dist;
  dist.masses.resize(binned.k);
  const double n = static_cast<double>(binned.size());
  for (int i = 0; i < binned.k; ++i) dist.masses[i] = binned.counts[i] / n;
  return dist;
}

namespace {

absl::string_view Unquote(absl::string_view field) {
  field = absl::StripAsciiWhitespace(field);
  if (field.size() >= 2 && field.front() == '"' && field.back() == '"') {
    field = field.substr(1, field.size() - 2);
  }
  return absl::StripAsciiWhitespace(field);
}

}  // namespace

absl::StatusOr<RawDataset> ParseCsvColumn(std::istream& in,
                                          const std::string& column) {
  std::string line;
  if (!std::getline(in, line)) {
    return absl::InvalidArgumentError("CSV input has no header row");
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::vector<absl::string_view> header = absl::StrSplit(line, ',');
  int index = -1;
  for (size_t i = 0; i < header.size(); ++i) {
    if (Unquote(header[i]) == column) {
      index = static_cast<int>(i);
      break;
    }
  }
  if (index < 0) {
    return absl::NotFoundError(
        absl::StrFormat("column '%s' not found in CSV header", column));
  }

  RawDataset data;
  data.label = column;
  int line_number = 1;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (absl::StripAsciiWhitespace(line).empty()) continue;
    std::vector<absl::string_view> fields = absl::StrSplit(line, ',');
    if (static_cast<int>(fields.size()) <= index) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "line %d: missing field for column '%s'", line_number, column));
    }
    absl::string_view text = Unquote(fields[index]);
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || ec != std::errc() || ptr != text.data() + text.size() ||
        !std::isfinite(value)) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "line %d: '%s' is not a finite number", line_number, text));
    }
    data.values.push_back(value);
  }
  return data;
}

absl::StatusOr<RawDataset> ReadCsvColumn(const std::string& path,
                                         const std::string& column) {
  std::ifstream in(path);
  if (!in) {
    return absl::NotFoundError(absl::StrFormat("cannot open '%s'", path));
  }
  absl::StatusOr<RawDataset> data = ParseCsvColumn(in, column);
  if (!data.ok()) {
    return absl::Status(data.status().code(),
                        absl::StrFormat("%s: %s", path, data.status().message()));
  }
  return data;
}

}  // namespace nvo
