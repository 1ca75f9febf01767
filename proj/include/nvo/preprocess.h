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

#ifndef NVO_PREPROCESS_H_
#define NVO_PREPROCESS_H_

#include <cstdint>
#include <istream>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "nvo/distribution.h"

namespace nvo {

inline constexpr double kDefaultPercentile = 0.9;
inline constexpr double kDefaultSensitivity = 1.0;
inline constexpr int kDefaultBins = 101;

// A single numeric column in source units.
struct RawDataset {
  std::vector<double> values;
  std::string label;
};

// Parameters of the affine map from source units onto [0, 1]. The data range
// is widened by `margin` on both sides so that the central `percentile` of a
// Laplace(sensitivity / epsilon_target) draw around either extreme stays
// inside the unit interval.
struct NormalizationParams {
  double epsilon_target = 0.0;
  double percentile = kDefaultPercentile;
  double sensitivity = kDefaultSensitivity;
  double margin = 0.0;
  double d_min = 0.0;
  double d_max = 0.0;

  double lower() const { return d_min - margin; }
  double upper() const { return d_max + margin; }
  double Normalize(double value) const;
  double Denormalize(double unit_value) const;
};

// The dataset as a K-bin histogram over [0, 1]. Bin k covers [k/K, (k+1)/K),
// with the final bin closed at 1; its representative is the midpoint.
struct BinnedDataset {
  int k = 0;
  std::vector<int> bin_of;
  std::vector<double> representatives;
  std::vector<int64_t> counts;
  NormalizationParams normalization;

  int64_t size() const { return static_cast<int64_t>(bin_of.size()); }
};

// (sensitivity / epsilon) * ln(1 / (2 - 2 * percentile)).
double PercentileMargin(double epsilon, double percentile, double sensitivity);

absl::StatusOr<NormalizationParams> ComputeNormalization(
    const RawDataset& data, double epsilon, double percentile = kDefaultPercentile,
    double sensitivity = kDefaultSensitivity);

absl::StatusOr<BinnedDataset> NormalizeAndBin(const RawDataset& data,
                                              const NormalizationParams& params,
                                              int k = kDefaultBins);

// Index of the bin containing `unit_value`; values outside [0, 1] are clamped
// to the end bins.
int BinIndex(double unit_value, int k);

// Midpoints (2k + 1) / (2K) of the K bins.
std::vector<double> BinRepresentatives(int k);

// Rebuilds `counts` and `representatives` from `k` and `bin_of`, checking that
// every bin index is in range.
absl::Status RebuildHistogram(BinnedDataset& binned);

// k-th mass = counts[k] / |D|.
Distribution EmpiricalDistribution(const BinnedDataset& binned);

// Reads the named numeric column from CSV text with a header row. Any row
// whose field does not parse as a finite number fails the whole read, naming
// the line.
absl::StatusOr<RawDataset> ParseCsvColumn(std::istream& in,
                                          const std::string& column);
absl::StatusOr<RawDataset> ReadCsvColumn(const std::string& path,
                                         const std::string& column);

}  // namespace nvo

#endif  // NVO_PREPROCESS_H_
