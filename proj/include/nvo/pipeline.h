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

#ifndef NVO_PIPELINE_H_
#define NVO_PIPELINE_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "nvo/evolution.h"
#include "nvo/game.h"
#include "nvo/mechanism.h"
#include "nvo/pdp.h"
#include "nvo/preprocess.h"

namespace nvo {

enum class Method { kBrd, kGa, kBaseline };

std::string_view MethodName(Method method);
absl::StatusOr<Method> ParseMethod(std::string_view name);

// Exit status when a run completes but some instance misses its target.
inline constexpr int kExitPrivacyUnsatisfied = 2;

struct RunConfig {
  std::string input_path;
  std::string column;
  double epsilon = 0.0;
  double percentile = kDefaultPercentile;
  double sensitivity = kDefaultSensitivity;
  int bins = kDefaultBins;
  std::vector<double> multipliers = kDefaultMultipliers;
  Method method = Method::kBrd;
  AccountingMode mode = AccountingMode::kExact;
  uint64_t seed = 0;
  BrdConfig brd;
  GaConfig ga;
  std::string out_dir;
  // Number of privatized samples to write; 0 skips samples.csv.
  int64_t samples = 0;
};

struct RunOutcome {
  int exit_code = 0;
  BinnedDataset binned;
  SolveResult solution;
  PrivacyReport report;
  std::vector<std::string> written;
};

// Runs `method` on a histogram. The baseline ignores the action set and
// returns an empty trace.
absl::StatusOr<SolveResult> SolvePlan(const BinnedDataset& binned, Method method,
                                      const ActionSet& actions, double epsilon,
                                      const BrdConfig& brd, const GaConfig& ga);

// Privacy report plus utility metrics and P_U of the plan's mixture against
// the empirical distribution.
absl::StatusOr<PrivacyReport> EvaluatePlan(const BinnedDataset& binned,
                                           const VariancePlan& plan,
                                           double epsilon, AccountingMode mode);

// One row per bin: bin_index, representative, original, then one mass column
// per named plan.
absl::StatusOr<std::string> ExportDistributions(
    const BinnedDataset& binned,
    const std::vector<std::pair<std::string, VariancePlan>>& plans);

// Full pipeline: ingest, bin, solve, evaluate, export. Writes histogram.json,
// plan.json, report.json, trace.csv, distributions.csv and, when requested,
// samples.csv into out_dir. exit_code is 0 when every instance meets epsilon
// and kExitPrivacyUnsatisfied otherwise.
absl::StatusOr<RunOutcome> Run(const RunConfig& config);

}  // namespace nvo

#endif  // NVO_PIPELINE_H_
