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

#include "nvo/game.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"
#include "nvo/metrics.h"
#include "nvo/random.h"

namespace nvo {
namespace {

double ClampedUtility(double kl, int k) {
  if (!std::isfinite(kl)) return 0.0;
  return std::clamp(1.0 - kl / std::log(static_cast<double>(k)), 0.0, 1.0);
}

}  // namespace

absl::StatusOr<double> UtilityPayoff(const Distribution& original,
                                     const Distribution& randomized, int k) {
  if (k < 2) {
    return absl::InvalidArgumentError("utility payoff needs at least two bins");
  }
  if (original.size() != k || randomized.size() != k) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "distributions have %d and %d bins, expected %d", original.size(),
        randomized.size(), k));
  }
  absl::StatusOr<double> kl = KlDivergence(original, randomized);
  if (!kl.ok()) return kl.status();
  return ClampedUtility(*kl, k);
}

std::string_view StopReasonName(StopReason reason) {
  switch (reason) {
    case StopReason::kConverged:
      return "converged";
    case StopReason::kMaxPasses:
      return "max_passes";
    case StopReason::kStalled:
      return "stalled";
    case StopReason::kGenerationLimit:
      return "generation_limit";
  }
  return "unknown";
}

absl::StatusOr<PayoffEvaluator> PayoffEvaluator::Create(const BinnedDataset& binned,
                                                        const ActionSet& actions,
                                                        double epsilon,
                                                        Options options) {
  if (!(epsilon > 0.0)) {
    return absl::InvalidArgumentError("epsilon must be positive");
  }
  if (actions.scales.empty()) {
    return absl::InvalidArgumentError("action set is empty");
  }
  if (binned.size() < 2) {
    return absl::InvalidArgumentError("the game needs at least two instances");
  }
  if (binned.k < 2) {
    return absl::InvalidArgumentError("the game needs at least two bins");
  }

  PayoffEvaluator evaluator;
  evaluator.k_ = binned.k;
  evaluator.num_actions_ = actions.size();
  evaluator.epsilon_ = epsilon;
  evaluator.options_ = options;
  evaluator.bin_of_ = binned.bin_of;
  evaluator.original_ = EmpiricalDistribution(binned);
  for (int bin : binned.bin_of) {
    if (bin < 0 || bin >= binned.k) {
      return absl::OutOfRangeError(absl::StrFormat("bin %d outside [0, %d)", bin, binned.k));
    }
  }

  evaluator.rows_.resize(static_cast<size_t>(binned.k) * actions.size() * binned.k);
  for (int bin = 0; bin < binned.k; ++bin) {
    for (int a = 0; a < actions.size(); ++a) {
      absl::StatusOr<std::vector<double>> row =
          MassRow(binned.representatives[bin], actions.scales[a], binned.k);
      if (!row.ok()) return row.status();
      std::copy(row->begin(), row->end(),
                evaluator.rows_.begin() +
                    (static_cast<size_t>(bin) * actions.size() + a) * binned.k);
    }
  }

  const double n = static_cast<double>(binned.size());
  if (options.mode == AccountingMode::kExact) {
    evaluator.upper_ratio_ = n * std::exp(epsilon) / (n - 1.0) - 1.0;
    evaluator.lower_ratio_ = n * std::exp(-epsilon) / (n - 1.0) - 1.0;
  } else {
    evaluator.upper_ratio_ = std::expm1(epsilon);
    evaluator.lower_ratio_ = -1.0;
  }
  return evaluator;
}

std::vector<int64_t> PayoffEvaluator::CountProfile(
    std::span<const int> assignment) const {
  std::vector<int64_t> counts(static_cast<size_t>(k_) * num_actions_, 0);
  for (size_t i = 0; i < assignment.size(); ++i) {
    ++counts[group_of(static_cast<int64_t>(i), assignment[i])];
  }
  return counts;
}

bool PayoffEvaluator::Satisfied(std::span<const double> row,
                                std::span<const double> totals) const {
  for (int x = 0; x < k_; ++x) {
    const double m = row[x];
    const double rest = totals[x] - m;
    if (rest <= 0.0) {
      if (m > 0.0) return false;
      continue;
    }
    if (m > upper_ratio_ * rest || m < lower_ratio_ * rest) return false;
  }
  return true;
}

Payoff PayoffEvaluator::EvaluateProfile(std::span<const int64_t> counts,
                                        std::span<const int> assignment) const {
  const int num_groups = k_ * num_actions_;
  std::vector<double> totals(k_, 0.0);
  for (int g = 0; g < num_groups; ++g) {
    if (counts[g] == 0) continue;
    const double c = static_cast<double>(counts[g]);
    std::span<const double> row = GroupRow(g);
    for (int x = 0; x < k_; ++x) totals[x] += c * row[x];
  }

  Payoff payoff;
  if (options_.group_identical) {
    for (int g = 0; g < num_groups; ++g) {
      if (counts[g] > 0 && Satisfied(GroupRow(g), totals)) payoff.p_e += counts[g];
    }
  } else {
    for (size_t i = 0; i < assignment.size(); ++i) {
      if (Satisfied(GroupRow(group_of(static_cast<int64_t>(i), assignment[i])), totals)) {
        ++payoff.p_e;
      }
    }
  }

  Distribution mixture;
  mixture.masses = std::move(totals);
  const double n = static_cast<double>(num_instances());
  for (double& m : mixture.masses) m /= n;
  // Sizes match by construction.
  payoff.p_u = ClampedUtility(*KlDivergence(original_, mixture), k_);
  payoff.total = static_cast<double>(payoff.p_e) + payoff.p_u;
  return payoff;
}

absl::StatusOr<Payoff> PayoffEvaluator::Evaluate(std::span<const int> assignment) const {
  if (static_cast<int64_t>(assignment.size()) != num_instances()) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "assignment covers %d instances, dataset has %d", assignment.size(),
        num_instances()));
  }
  for (int a : assignment) {
    if (a < 0 || a >= num_actions_) {
      return absl::OutOfRangeError(
          absl::StrFormat("action index %d outside [0, %d)", a, num_actions_));
    }
  }
  return EvaluateProfile(CountProfile(assignment), assignment);
}

absl::StatusOr<Payoff> TotalPayoff(const BinnedDataset& binned,
                                   const VariancePlan& plan, double epsilon,
                                   AccountingMode mode) {
  absl::StatusOr<PayoffEvaluator> evaluator =
      PayoffEvaluator::Create(binned, plan.actions, epsilon, {.mode = mode});
  if (!evaluator.ok()) return evaluator.status();
  return evaluator->Evaluate(plan.assignment);
}

absl::StatusOr<SolveResult> BrdSolve(const BinnedDataset& binned,
                                     const ActionSet& actions, double epsilon,
                                     const BrdConfig& config) {
  if (config.max_passes < 1) {
    return absl::InvalidArgumentError("max_passes must be at least 1");
  }
  if (!(config.payoff_tolerance >= 0.0)) {
    return absl::InvalidArgumentError("payoff_tolerance must be non-negative");
  }
  absl::StatusOr<PayoffEvaluator> evaluator = PayoffEvaluator::Create(
      binned, actions, epsilon,
      {.mode = config.mode, .group_identical = config.group_identical});
  if (!evaluator.ok()) return evaluator.status();

  const int64_t n = binned.size();
  const int num_actions = actions.size();
  std::vector<int> assignment(n, actions.LargestScaleIndex());
  if (config.init == InitRule::kRandom) {
    Rng rng(config.seed);
    for (int& a : assignment) a = static_cast<int>(UniformIndex(rng, num_actions));
  }

  std::vector<int64_t> counts = evaluator->CountProfile(assignment);
  Payoff current = evaluator->EvaluateProfile(counts, assignment);
  SolveResult result;
  result.trace.initial = current;
  result.trace.stop = StopReason::kMaxPasses;

  std::vector<Payoff> candidates(num_actions);
  int64_t step = 0;
  for (int pass = 1; pass <= config.max_passes; ++pass) {
    int64_t changes = 0;
    for (int64_t i = 0; i < n; ++i) {
      const int held = assignment[i];
      const int held_group = evaluator->group_of(i, held);
      double best = -std::numeric_limits<double>::infinity();
      for (int a = 0; a < num_actions; ++a) {
        if (a == held) continue;
        const int group = evaluator->group_of(i, a);
        --counts[held_group];
        ++counts[group];
        assignment[i] = a;
        candidates[a] = evaluator->EvaluateProfile(counts, assignment);
        --counts[group];
        ++counts[held_group];
        assignment[i] = held;
        best = std::max(best, candidates[a].total);
      }

      int chosen = held;
      if (best > current.total + config.payoff_tolerance) {
        for (int a = 0; a < num_actions; ++a) {
          if (a == held || candidates[a].total != best) continue;
          if (chosen == held || actions.scales[a] > actions.scales[chosen]) chosen = a;
        }
        --counts[held_group];
        ++counts[evaluator->group_of(i, chosen)];
        assignment[i] = chosen;
        current = candidates[chosen];
        ++changes;
      }
      result.trace.records.push_back({.step = ++step,
                                      .instance = i,
                                      .scale_index = chosen,
                                      .payoff = current.total,
                                      .p_e = current.p_e,
                                      .p_u = current.p_u});
    }
    result.trace.iterations = pass;
    if (changes == 0) {
      result.trace.stop = StopReason::kConverged;
      break;
    }
  }

  result.plan.actions = actions;
  result.plan.assignment = std::move(assignment);
  result.payoff = current;
  return result;
}

}  // namespace nvo
