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

#include "nvo/mechanism.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"
#include "nvo/random.h"

namespace nvo {

absl::StatusOr<ActionSet> ActionSet::FromMultipliers(std::vector<double> multipliers,
                                                     double epsilon,
                                                     double sensitivity) {
  if (multipliers.empty()) {
    return absl::InvalidArgumentError("action set is empty");
  }
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    return absl::InvalidArgumentError("epsilon must be positive and finite");
  }
  if (!(sensitivity > 0.0) || !std::isfinite(sensitivity)) {
    return absl::InvalidArgumentError("sensitivity must be positive and finite");
  }
  ActionSet set;
  set.epsilon = epsilon;
  set.sensitivity = sensitivity;
  for (double m : multipliers) {
    const double scale = m * sensitivity / epsilon;
    if (!(m > 0.0) || !std::isfinite(scale)) {
      return absl::InvalidArgumentError(
          absl::StrFormat("multiplier %g does not give a positive finite scale", m));
    }
    set.scales.push_back(scale);
  }
  set.multipliers = std::move(multipliers);
  return set;
}

double ActionSet::b_min() const {
  return *std::min_element(scales.begin(), scales.end());
}

int ActionSet::LargestScaleIndex() const {
  return static_cast<int>(std::max_element(scales.begin(), scales.end()) -
                          scales.begin());
}

absl::Status ValidatePlan(const VariancePlan& plan, int64_t num_instances) {
  if (plan.actions.scales.empty()) {
    return absl::InvalidArgumentError("action set is empty");
  }
  for (double s : plan.actions.scales) {
    if (!(s > 0.0) || !std::isfinite(s)) {
      return absl::InvalidArgumentError("scales must be positive and finite");
    }
  }
  if (static_cast<int64_t>(plan.assignment.size()) != num_instances) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "plan assigns %d instances, dataset has %d", plan.assignment.size(),
        num_instances));
  }
  for (size_t i = 0; i < plan.assignment.size(); ++i) {
    if (plan.assignment[i] < 0 || plan.assignment[i] >= plan.actions.size()) {
      return absl::OutOfRangeError(absl::StrFormat(
          "instance %d assigned scale index %d outside [0, %d)", i,
          plan.assignment[i], plan.actions.size()));
    }
  }
  return absl::OkStatus();
}

absl::StatusOr<MassMatrix> MassMatrix::FromRows(
    const std::vector<std::vector<double>>& rows) {
  if (rows.empty() || rows.front().empty()) {
    return absl::InvalidArgumentError("mass matrix needs at least one row and bin");
  }
  const int k = static_cast<int>(rows.front().size());
  MassMatrix out(static_cast<int64_t>(rows.size()), k);
  for (size_t i = 0; i < rows.size(); ++i) {
    if (static_cast<int>(rows[i].size()) != k) {
      return absl::InvalidArgumentError(
          absl::StrFormat("row %d has %d bins, expected %d", i, rows[i].size(), k));
    }
    double sum = 0.0;
    for (double m : rows[i]) {
      if (!(m >= 0.0) || !std::isfinite(m)) {
        return absl::InvalidArgumentError(
            absl::StrFormat("row %d has a negative or non-finite mass", i));
      }
      sum += m;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
      return absl::InvalidArgumentError(
          absl::StrFormat("row %d sums to %.12g, not 1", i, sum));
    }
    std::copy(rows[i].begin(), rows[i].end(), out.mutable_row(i).begin());
  }
  return out;
}

namespace {

// Untruncated Laplace(mu, b) mass of [lo, hi], lo <= hi.
double LaplaceIntervalMass(double mu, double b, double lo, double hi) {
  const double width = -std::expm1(-(hi - lo) / b);
  if (hi <= mu) return 0.5 * std::exp(-(mu - hi) / b) * width;
  if (lo >= mu) return 0.5 * std::exp(-(lo - mu) / b) * width;
  return -0.5 * std::expm1(-(mu - lo) / b) - 0.5 * std::expm1(-(hi - mu) / b);
}

absl::Status CheckLocationAndScale(double mu, double b) {
  if (!(b > 0.0) || !std::isfinite(b)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("Laplace scale %g must be positive and finite", b));
  }
  if (!(mu >= 0.0 && mu <= 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("location %g outside [0, 1]", mu));
  }
  return absl::OkStatus();
}

}  // namespace

absl::StatusOr<double> TruncatedBinMass(double mu, double b, double bin_lo,
                                        double bin_hi) {
  if (absl::Status s = CheckLocationAndScale(mu, b); !s.ok()) return s;
  if (!(bin_lo >= 0.0 && bin_lo < bin_hi && bin_hi <= 1.0)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "bin [%g, %g] is empty, inverted or outside [0, 1]", bin_lo, bin_hi));
  }
  return LaplaceIntervalMass(mu, b, bin_lo, bin_hi) /
         LaplaceIntervalMass(mu, b, 0.0, 1.0);
}

absl::StatusOr<std::vector<double>> MassRow(double mu, double b, int k) {
  if (absl::Status s = CheckLocationAndScale(mu, b); !s.ok()) return s;
  if (k < 1) {
    return absl::InvalidArgumentError("bin count must be positive");
  }
  const double normalizer = LaplaceIntervalMass(mu, b, 0.0, 1.0);
  std::vector<double> row(k);
  for (int x = 0; x < k; ++x) {
    const double lo = static_cast<double>(x) / k;
    const double hi = static_cast<double>(x + 1) / k;
    row[x] = LaplaceIntervalMass(mu, b, lo, hi) / normalizer;
  }
  return row;
}

absl::StatusOr<MassMatrix> BuildMassMatrix(const BinnedDataset& binned,
                                           const VariancePlan& plan) {
  if (absl::Status s = ValidatePlan(plan, binned.size()); !s.ok()) return s;
  const int num_scales = plan.actions.size();
  // Rows depend only on (bin, scale index).
  std::vector<std::optional<std::vector<double>>> cache(
      static_cast<size_t>(binned.k) * num_scales);
  MassMatrix masses(binned.size(), binned.k);
  for (int64_t i = 0; i < binned.size(); ++i) {
    const int bin = binned.bin_of[i];
    if (bin < 0 || bin >= binned.k) {
      return absl::OutOfRangeError(
          absl::StrFormat("instance %d has bin %d outside [0, %d)", i, bin, binned.k));
    }
    const int scale_index = plan.assignment[i];
    auto& slot = cache[static_cast<size_t>(bin) * num_scales + scale_index];
    if (!slot.has_value()) {
      absl::StatusOr<std::vector<double>> row =
          MassRow(binned.representatives[bin], plan.actions.scales[scale_index],
                  binned.k);
      if (!row.ok()) return row.status();
      slot = *std::move(row);
    }
    std::copy(slot->begin(), slot->end(), masses.mutable_row(i).begin());
  }
  return masses;
}

Distribution MixtureDistribution(const MassMatrix& masses) {
  Distribution dist;
  dist.masses.assign(masses.k(), 0.0);
  for (int64_t i = 0; i < masses.num_instances(); ++i) {
    std::span<const double> row = masses.row(i);
    for (int x = 0; x < masses.k(); ++x) dist.masses[x] += row[x];
  }
  const double n = static_cast<double>(masses.num_instances());
  for (double& m : dist.masses) m /= n;
  return dist;
}

absl::StatusOr<VariancePlan> BaselinePlan(const BinnedDataset& binned,
                                          double epsilon, double sensitivity) {
  absl::StatusOr<ActionSet> actions =
      ActionSet::FromMultipliers({1.0}, epsilon, sensitivity);
  if (!actions.ok()) return actions.status();
  VariancePlan plan;
  plan.actions = *std::move(actions);
  plan.assignment.assign(binned.size(), 0);
  return plan;
}

double SampleTruncatedLaplace(double mu, double b, double u) {
  // Mass of [0, mu] and [mu, 1] under the untruncated density.
  const double left = -0.5 * std::expm1(-mu / b);
  const double right = -0.5 * std::expm1(-(1.0 - mu) / b);
  const double target = u * (left + right);
  double x;
  if (target < left) {
    x = mu + b * std::log1p(-2.0 * (left - target));
  } else {
    x = mu - b * std::log1p(-2.0 * (target - left));
  }
  return std::clamp(x, 0.0, 1.0);
}

absl::StatusOr<std::vector<double>> SampleOutput(const BinnedDataset& binned,
                                                 const VariancePlan& plan,
                                                 int64_t n, uint64_t seed) {
  if (n < 1) {
    return absl::InvalidArgumentError("sample count must be at least 1");
  }
  if (absl::Status s = ValidatePlan(plan, binned.size()); !s.ok()) return s;
  Rng rng(seed);
  std::vector<double> out;
  out.reserve(n);
  const uint64_t num_instances = static_cast<uint64_t>(binned.size());
  for (int64_t draw = 0; draw < n; ++draw) {
    const auto i = static_cast<int64_t>(UniformIndex(rng, num_instances));
    const double u = UniformDouble(rng);
    out.push_back(SampleTruncatedLaplace(
        binned.representatives[binned.bin_of[i]], plan.ScaleOf(i), u));
  }
  return out;
}

}  // namespace nvo
