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

#ifndef NVO_MECHANISM_H_
#define NVO_MECHANISM_H_

#include <cstdint>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "nvo/distribution.h"
#include "nvo/preprocess.h"

namespace nvo {

// Multiples of sensitivity / epsilon offered to every instance by default.
inline const std::vector<double> kDefaultMultipliers = {3.0, 2.0, 1.0, 0.33,
                                                        0.2};

// The discrete strategy set: Laplace scales b = multiplier * sensitivity /
// epsilon. Entries are scales of the noise density, not variances.
struct ActionSet {
  std::vector<double> multipliers;
  std::vector<double> scales;
  double epsilon = 0.0;
  double sensitivity = kDefaultSensitivity;

  static absl::StatusOr<ActionSet> FromMultipliers(
      std::vector<double> multipliers, double epsilon,
      double sensitivity = kDefaultSensitivity);

  int size() const { return static_cast<int>(scales.size()); }
  double b_min() const;
  // Index of the largest scale; the first one wins ties.
  int LargestScaleIndex() const;
};

// An action set together with one scale choice per instance.
struct VariancePlan {
  ActionSet actions;
  std::vector<int> assignment;

  double ScaleOf(int64_t instance) const {
    return actions.scales[assignment[instance]];
  }
  double b_min() const { return actions.b_min(); }
};

// Checks that every assignment entry indexes the action set and that the plan
// covers `num_instances` instances.
absl::Status ValidatePlan(const VariancePlan& plan, int64_t num_instances);

// Per-instance output masses m_{i,x} over the K bins, row-major. Rows of a
// truncated Laplace mechanism sum to one; entries are strictly positive
// unless the scale is so small that far bins underflow.
class MassMatrix {
 public:
  MassMatrix() = default;
  MassMatrix(int64_t num_instances, int k)
      : num_instances_(num_instances), k_(k), data_(num_instances * k) {}

  // Validates shape, non-negativity and row sums (within 1e-9).
  static absl::StatusOr<MassMatrix> FromRows(
      const std::vector<std::vector<double>>& rows);

  int64_t num_instances() const { return num_instances_; }
  int k() const { return k_; }
  std::span<const double> row(int64_t i) const {
    return {data_.data() + i * k_, static_cast<size_t>(k_)};
  }
  std::span<double> mutable_row(int64_t i) {
    return {data_.data() + i * k_, static_cast<size_t>(k_)};
  }
  double at(int64_t i, int x) const { return data_[i * k_ + x]; }

 private:
  int64_t num_instances_ = 0;
  int k_ = 0;
  std::vector<double> data_;
};

// Probability that Laplace(mu, b) noise truncated to [0, 1] lands in
// [bin_lo, bin_hi]. Evaluated branch-wise with expm1 so narrow bins and small
// scales do not cancel.
absl::StatusOr<double> TruncatedBinMass(double mu, double b, double bin_lo,
                                        double bin_hi);

// Truncated masses of the K uniform bins for a mechanism centred at mu.
absl::StatusOr<std::vector<double>> MassRow(double mu, double b, int k);

absl::StatusOr<MassMatrix> BuildMassMatrix(const BinnedDataset& binned,
                                           const VariancePlan& plan);

// Output distribution of the randomized sampling query: the row average.
Distribution MixtureDistribution(const MassMatrix& masses);

// Identical noise Lap(sensitivity / epsilon) for every instance.
absl::StatusOr<VariancePlan> BaselinePlan(const BinnedDataset& binned,
                                          double epsilon,
                                          double sensitivity = kDefaultSensitivity);

// Inverse-CDF draw from Laplace(mu, b) truncated to [0, 1], given u in [0, 1).
double SampleTruncatedLaplace(double mu, double b, double u);

// Draws n privatized outputs on the unit interval: pick an instance uniformly,
// then draw from its truncated Laplace density. Each draw consumes one
// UniformIndex followed by one UniformDouble from a stream seeded by `seed`.
absl::StatusOr<std::vector<double>> SampleOutput(const BinnedDataset& binned,
                                                 const VariancePlan& plan,
                                                 int64_t n, uint64_t seed);

}  // namespace nvo

#endif  // NVO_MECHANISM_H_
