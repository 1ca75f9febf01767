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

#ifndef NVO_PDP_H_
#define NVO_PDP_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "nvo/mechanism.h"
#include "nvo/preprocess.h"

namespace nvo {

// How per-instance privacy loss is measured.
//   kExact: max over bins of |ln(with / without)|, where "with" is the mixture
//     over all |D| instances and "without" the mixture over the other |D|-1.
//   kConservative: max over bins of ln((m_{i,x} + M_{-i,x}) / M_{-i,x}), the
//     unnormalized one-sided upper bound.
enum class AccountingMode { kExact, kConservative };

std::string_view AccountingModeName(AccountingMode mode);
absl::StatusOr<AccountingMode> ParseAccountingMode(std::string_view name);

// Which sufficient condition on the smallest scale to evaluate.
//   kDensity: 1 / ln(1 + (n-1)(e^eps - 1)).
//   kBinned:  1 / ln(1 + (n-1)(e^eps - 1) / K), for bin-level masses.
enum class ScaleBound { kDensity, kBinned };

// Per-instance privacy loss. A bin with M_{-i,x} = 0 and m_{i,x} > 0 yields
// +infinity; bins where both vanish carry no probability and are skipped.
absl::StatusOr<double> EpsilonExact(const MassMatrix& masses, int64_t i);
absl::StatusOr<double> EpsilonConservative(const MassMatrix& masses, int64_t i);
absl::StatusOr<double> InstanceEpsilon(const MassMatrix& masses, int64_t i,
                                       AccountingMode mode);

struct PrivacyPayoffResult {
  int64_t p_e = 0;
  std::vector<bool> satisfied;
};

// Flags instance i when its privacy loss is at most `epsilon`; P_E counts them.
absl::StatusOr<PrivacyPayoffResult> PrivacyPayoff(const MassMatrix& masses,
                                                  double epsilon,
                                                  AccountingMode mode);

absl::StatusOr<double> MinScaleBound(double epsilon, int64_t n, ScaleBound variant,
                                     int k);

// 1 / (exp(1 / b_min) - 1).
absl::StatusOr<double> VMinDensity(double b_min);

struct InstancePrivacy {
  int64_t index = 0;
  int bin = 0;
  double scale = 0.0;
  double epsilon_exact = 0.0;
  double epsilon_conservative = 0.0;
  bool satisfied = false;
};

struct UtilityMetrics {
  double kl = 0.0;
  double l1_sd = 0.0;
  double jaccard = 0.0;
  double cosine = 0.0;
};

struct PrivacyReport {
  double epsilon_target = 0.0;
  AccountingMode mode = AccountingMode::kExact;
  std::vector<InstancePrivacy> per_instance;
  int64_t p_e = 0;
  double bound_density = 0.0;
  double bound_binned = 0.0;
  double b_min = 0.0;
  double v_min_value = 0.0;
  std::optional<UtilityMetrics> metrics;
  std::optional<double> p_u;
};

absl::StatusOr<PrivacyReport> BuildPrivacyReport(const BinnedDataset& binned,
                                                 const VariancePlan& plan,
                                                 double epsilon,
                                                 AccountingMode mode);

}  // namespace nvo

#endif  // NVO_PDP_H_
