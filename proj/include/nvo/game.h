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

#ifndef NVO_GAME_H_
#define NVO_GAME_H_

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "nvo/distribution.h"
#include "nvo/mechanism.h"
#include "nvo/pdp.h"
#include "nvo/preprocess.h"

namespace nvo {

// The common payoff shared by every player: total = p_e + p_u.
struct Payoff {
  double total = 0.0;
  int64_t p_e = 0;
  double p_u = 0.0;
};

// 1 - KL(original || randomized) / ln(K), clamped to [0, 1]. An infinite
// divergence gives 0.
absl::StatusOr<double> UtilityPayoff(const Distribution& original,
                                     const Distribution& randomized, int k);

// Evaluates the common payoff of strategy profiles over a fixed dataset and
// action set.
//
// Instances that share a bin and a scale produce identical mass rows, so a
// profile is summarized by a (bin, scale) count table. Column totals are
// re-accumulated from that table in a fixed order for every evaluation, which
// makes the payoff a pure function of the profile: two evaluations of the same
// profile agree bit for bit regardless of the path that led there.
class PayoffEvaluator {
 public:
  struct Options {
    AccountingMode mode = AccountingMode::kExact;
    // Score P_E once per (bin, scale) group instead of once per instance. Both
    // paths give identical results.
    bool group_identical = true;
  };

  static absl::StatusOr<PayoffEvaluator> Create(const BinnedDataset& binned,
                                                const ActionSet& actions,
                                                double epsilon, Options options);

  // Payoff of a full assignment (one action index per instance).
  absl::StatusOr<Payoff> Evaluate(std::span<const int> assignment) const;

  // Group count table for an assignment; index bin * num_actions() + action.
  std::vector<int64_t> CountProfile(std::span<const int> assignment) const;

  // Payoff of a profile given both its count table and the assignment it was
  // built from. The assignment is only read on the ungrouped path.
  Payoff EvaluateProfile(std::span<const int64_t> counts,
                         std::span<const int> assignment) const;

  int64_t num_instances() const { return static_cast<int64_t>(bin_of_.size()); }
  int num_actions() const { return num_actions_; }
  int k() const { return k_; }
  int group_of(int64_t instance, int action) const {
    return bin_of_[instance] * num_actions_ + action;
  }

 private:
  PayoffEvaluator() = default;

  std::span<const double> GroupRow(int group) const {
    return {rows_.data() + static_cast<size_t>(group) * k_,
            static_cast<size_t>(k_)};
  }
  bool Satisfied(std::span<const double> row,
                 std::span<const double> totals) const;

  int k_ = 0;
  int num_actions_ = 0;
  double epsilon_ = 0.0;
  Options options_;
  std::vector<int> bin_of_;
  Distribution original_;
  // Mass row of every (bin, action) group, row-major.
  std::vector<double> rows_;
  // Instance i is satisfied at bin x iff lower * M <= m <= upper * M.
  double upper_ratio_ = 0.0;
  double lower_ratio_ = 0.0;
};

// P = P_E + P_U for a plan.
absl::StatusOr<Payoff> TotalPayoff(const BinnedDataset& binned,
                                   const VariancePlan& plan, double epsilon,
                                   AccountingMode mode);

enum class InitRule { kMaxScale, kRandom };

struct BrdConfig {
  int max_passes = 100;
  double payoff_tolerance = 0.0;
  InitRule init = InitRule::kMaxScale;
  uint64_t seed = 0;
  AccountingMode mode = AccountingMode::kExact;
  bool group_identical = true;
};

enum class StopReason { kConverged, kMaxPasses, kStalled, kGenerationLimit };

std::string_view StopReasonName(StopReason reason);

// One solver step. BRD records one per instance visit; the genetic solver one
// per generation with instance and scale_index set to -1.
struct TraceRecord {
  int64_t step = 0;
  int64_t instance = -1;
  int scale_index = -1;
  double payoff = 0.0;
  int64_t p_e = 0;
  double p_u = 0.0;
};

struct SolverTrace {
  Payoff initial;
  std::vector<TraceRecord> records;
  StopReason stop = StopReason::kConverged;
  // Full passes for BRD, generations for the genetic solver.
  int64_t iterations = 0;
};

struct SolveResult {
  VariancePlan plan;
  Payoff payoff;
  SolverTrace trace;
};

// Best-response dynamics over the instances in index order. Each visit
// evaluates every action with the rest of the profile fixed and adopts the
// best one, keeping the current action unless some other action beats it by
// more than payoff_tolerance; ties among the best are broken toward the
// largest scale. Stops after a full pass with no change (the result is then a
// Nash equilibrium) or after max_passes.
absl::StatusOr<SolveResult> BrdSolve(const BinnedDataset& binned,
                                     const ActionSet& actions, double epsilon,
                                     const BrdConfig& config);

}  // namespace nvo

#endif  // NVO_GAME_H_
