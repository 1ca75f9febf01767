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

#include "nvo/pdp.h"

#include <cmath>
#include <limits>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"

namespace nvo {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Sums of every column, accumulated in extended precision.
std::vector<long double> ColumnTotals(const MassMatrix& masses) {
  std::vector<long double> totals(masses.k(), 0.0L);
  for (int64_t j = 0; j < masses.num_instances(); ++j) {
    std::span<const double> row = masses.row(j);
    for (int x = 0; x < masses.k(); ++x) totals[x] += row[x];
  }
  return totals;
}

// M_{-i,x}. Subtracting from the column total is exact enough unless row i
// dominates the column, in which case the others are summed directly.
double MassWithout(const MassMatrix& masses, const std::vector<long double>& totals,
                   int64_t i, int x) {
  const long double total = totals[x];
  const long double rest = total - masses.at(i, x);
  if (rest > total * 1e-12L) return static_cast<double>(rest);
  long double direct = 0.0L;
  for (int64_t j = 0; j < masses.num_instances(); ++j) {
    if (j != i) direct += masses.at(j, x);
  }
  return static_cast<double>(direct);
}

absl::Status CheckInstance(const MassMatrix& masses, int64_t i) {
  if (masses.num_instances() < 2) {
    return absl::InvalidArgumentError(
        "per-instance privacy needs at least two instances");
  }
  if (i < 0 || i >= masses.num_instances()) {
    return absl::OutOfRangeError(absl::StrFormat(
        "instance %d outside [0, %d)", i, masses.num_instances()));
  }
  return absl::OkStatus();
}

double ExactWithTotals(const MassMatrix& masses,
                       const std::vector<long double>& totals, int64_t i) {
  const double n = static_cast<double>(masses.num_instances());
  const double log_scale = std::log((n - 1.0) / n);
  double worst = 0.0;
  for (int x = 0; x < masses.k(); ++x) {
    const double m = masses.at(i, x);
    const double rest = MassWithout(masses, totals, i, x);
    if (rest <= 0.0) {
      if (m > 0.0) return kInf;
      continue;
    }
    worst = std::max(worst, std::abs(log_scale + std::log1p(m / rest)));
  }
  return worst;
}

double ConservativeWithTotals(const MassMatrix& masses,
                              const std::vector<long double>& totals, int64_t i) {
  double worst = 0.0;
  for (int x = 0; x < masses.k(); ++x) {
    const double m = masses.at(i, x);
    const double rest = MassWithout(masses, totals, i, x);
    if (rest <= 0.0) {
      if (m > 0.0) return kInf;
      continue;
    }
    worst = std::max(worst, std::log1p(m / rest));
  }
  return worst;
}

}  // namespace

std::string_view AccountingModeName(AccountingMode mode) {
  return mode == AccountingMode::kExact ? "exact" : "conservative";
}

absl::StatusOr<AccountingMode> ParseAccountingMode(std::string_view name) {
  if (name == "exact") return AccountingMode::kExact;
  if (name == "conservative") return AccountingMode::kConservative;
  return absl::InvalidArgumentError(
      absl::StrFormat("unknown accounting mode '%s'", std::string(name)));
}

absl::StatusOr<double> EpsilonExact(const MassMatrix& masses, int64_t i) {
  if (absl::Status s = CheckInstance(masses, i); !s.ok()) return s;
  return ExactWithTotals(masses, ColumnTotals(masses), i);
}

absl::StatusOr<double> EpsilonConservative(const MassMatrix& masses, int64_t i) {
  if (absl::Status s = CheckInstance(masses, i); !s.ok()) return s;
  return ConservativeWithTotals(masses, ColumnTotals(masses), i);
}

absl::StatusOr<double> InstanceEpsilon(const MassMatrix& masses, int64_t i,
                                       AccountingMode mode) {
  return mode == AccountingMode::kExact ? EpsilonExact(masses, i)
                                        : EpsilonConservative(masses, i);
}

absl::StatusOr<PrivacyPayoffResult> PrivacyPayoff(const MassMatrix& masses,
                                                  double epsilon,
                                                  AccountingMode mode) {
  if (!(epsilon > 0.0)) {
    return absl::InvalidArgumentError("epsilon must be positive");
  }
  if (absl::Status s = CheckInstance(masses, 0); !s.ok()) return s;
  const std::vector<long double> totals = ColumnTotals(masses);
  PrivacyPayoffResult result;
  result.satisfied.resize(masses.num_instances());
  for (int64_t i = 0; i < masses.num_instances(); ++i) {
    const double loss = mode == AccountingMode::kExact
                            ? ExactWithTotals(masses, totals, i)
                            : ConservativeWithTotals(masses, totals, i);
    result.satisfied[i] = loss <= epsilon;
    if (result.satisfied[i]) ++result.p_e;
  }
  return result;
}

absl::StatusOr<double> MinScaleBound(double epsilon, int64_t n, ScaleBound variant,
                                     int k) {
  if (!(epsilon > 0.0)) {
    return absl::InvalidArgumentError("epsilon must be positive");
  }
  if (n < 2) {
    return absl::InvalidArgumentError("the bound needs at least two instances");
  }
  if (k < 1) {
    return absl::InvalidArgumentError("bin count must be positive");
  }
  double growth = static_cast<double>(n - 1) * std::expm1(epsilon);
  if (variant == ScaleBound::kBinned) growth /= k;
  return 1.0 / std::log1p(growth);
}

absl::StatusOr<double> VMinDensity(double b_min) {
  if (!(b_min > 0.0)) {
    return absl::InvalidArgumentError("b_min must be positive");
  }
  return 1.0 / std::expm1(1.0 / b_min);
}

absl::StatusOr<PrivacyReport> BuildPrivacyReport(const BinnedDataset& binned,
                                                 const VariancePlan& plan,
                                                 double epsilon,
                                                 AccountingMode mode) {
  if (!(epsilon > 0.0)) {
    return absl::InvalidArgumentError("epsilon must be positive");
  }
  absl::StatusOr<MassMatrix> masses = BuildMassMatrix(binned, plan);
  if (!masses.ok()) return masses.status();
  if (absl::Status s = CheckInstance(*masses, 0); !s.ok()) return s;

  PrivacyReport report;
  report.epsilon_target = epsilon;
  report.mode = mode;
  const std::vector<long double> totals = ColumnTotals(*masses);
  report.per_instance.reserve(binned.size());
  for (int64_t i = 0; i < binned.size(); ++i) {
    InstancePrivacy record;
    record.index = i;
    record.bin = binned.bin_of[i];
    record.scale = plan.ScaleOf(i);
    record.epsilon_exact = ExactWithTotals(*masses, totals, i);
    record.epsilon_conservative = ConservativeWithTotals(*masses, totals, i);
    const double loss = mode == AccountingMode::kExact ? record.epsilon_exact
                                                       : record.epsilon_conservative;
    record.satisfied = loss <= epsilon;
    if (record.satisfied) ++report.p_e;
    report.per_instance.push_back(record);
  }

  absl::StatusOr<double> bound_density =
      MinScaleBound(epsilon, binned.size(), ScaleBound::kDensity, binned.k);
  absl::StatusOr<double> bound_binned =
      MinScaleBound(epsilon, binned.size(), ScaleBound::kBinned, binned.k);
  absl::StatusOr<double> v_min = VMinDensity(plan.b_min());
  if (!bound_density.ok()) return bound_density.status();
  if (!bound_binned.ok()) return bound_binned.status();
  if (!v_min.ok()) return v_min.status();
  report.bound_density = *bound_density;
  report.bound_binned = *bound_binned;
  report.b_min = plan.b_min();
  report.v_min_value = *v_min;
  return report;
}

}  // namespace nvo
