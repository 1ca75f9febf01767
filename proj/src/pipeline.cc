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

#include "nvo/pipeline.h"

#include <filesystem>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "nvo/io.h"
#include "nvo/metrics.h"

namespace nvo {

std::string_view MethodName(Method method) {
  switch (method) {
    case Method::kBrd:
      return "brd";
    case Method::kGa:
      return "ga";
    case Method::kBaseline:
      return "baseline";
  }
  return "unknown";
}

absl::StatusOr<Method> ParseMethod(std::string_view name) {
  if (name == "brd") return Method::kBrd;
  if (name == "ga") return Method::kGa;
  if (name == "baseline") return Method::kBaseline;
  return absl::InvalidArgumentError(absl::StrFormat("unknown method '%s'", std::string(name)));
}

absl::StatusOr<SolveResult> SolvePlan(const BinnedDataset& binned, Method method,
                                      const ActionSet& actions, double epsilon,
                                      const BrdConfig& brd, const GaConfig& ga) {
  switch (method) {
    case Method::kBrd:
      return BrdSolve(binned, actions, epsilon, brd);
    case Method::kGa:
      return GaSolve(binned, actions, epsilon, ga);
    case Method::kBaseline: {
      absl::StatusOr<VariancePlan> plan =
          BaselinePlan(binned, epsilon, actions.sensitivity);
      if (!plan.ok()) return plan.status();
      absl::StatusOr<Payoff> payoff = TotalPayoff(binned, *plan, epsilon, brd.mode);
      if (!payoff.ok()) return payoff.status();
      SolveResult result;
      result.plan = *std::move(plan);
      result.payoff = *payoff;
      result.trace.initial = *payoff;
      return result;
    }
  }
  return absl::InvalidArgumentError("unknown method");
}

absl::StatusOr<PrivacyReport> EvaluatePlan(const BinnedDataset& binned,
                                           const VariancePlan& plan,
                                           double epsilon, AccountingMode mode) {
  absl::StatusOr<PrivacyReport> report = BuildPrivacyReport(binned, plan, epsilon, mode);
  if (!report.ok()) return report.status();
  absl::StatusOr<MassMatrix> masses = BuildMassMatrix(binned, plan);
  if (!masses.ok()) return masses.status();
  const Distribution original = EmpiricalDistribution(binned);
  const Distribution mixture = MixtureDistribution(*masses);

  UtilityMetrics metrics;
  absl::StatusOr<double> kl = KlDivergence(original, mixture);
  absl::StatusOr<double> l1 = L1SdLoss(original, mixture, binned.representatives);
  absl::StatusOr<double> jaccard = JaccardIndex(original, mixture);
  absl::StatusOr<double> cosine = CosineSimilarity(original, mixture);
  absl::StatusOr<double> p_u = UtilityPayoff(original, mixture, binned.k);
  for (const auto* s : {&kl, &l1, &jaccard, &cosine, &p_u}) {
    if (!s->ok()) return s->status();
  }
  metrics.kl = *kl;
  metrics.l1_sd = *l1;
  metrics.jaccard = *jaccard;
  metrics.cosine = *cosine;
  report->metrics = metrics;
  report->p_u = *p_u;
  return report;
}

absl::StatusOr<std::string> ExportDistributions(
    const BinnedDataset& binned,
    const std::vector<std::pair<std::string, VariancePlan>>& plans) {
  const Distribution original = EmpiricalDistribution(binned);
  std::vector<Distribution> columns;
  std::string out = "bin_index,representative,original";
  for (const auto& [name, plan] : plans) {
    absl::StatusOr<MassMatrix> masses = BuildMassMatrix(binned, plan);
    if (!masses.ok()) {
      return absl::Status(masses.status().code(),
                          absl::StrCat("plan '", name, "': ", masses.status().message()));
    }
    if (masses->k() != binned.k) {
      return absl::InvalidArgumentError(
          absl::StrFormat("plan '%s' has %d bins, histogram has %d", name,
                          masses->k(), binned.k));
    }
    columns.push_back(MixtureDistribution(*masses));
    absl::StrAppend(&out, ",", name);
  }
  out += "\n";
  for (int x = 0; x < binned.k; ++x) {
    absl::StrAppendFormat(&out, "%d,%.17g,%.17g", x, binned.representatives[x],
                          original.masses[x]);
    for (const Distribution& d : columns) {
      absl::StrAppendFormat(&out, ",%.17g", d.masses[x]);
    }
    out += "\n";
  }
  return out;
}

absl::StatusOr<RunOutcome> Run(const RunConfig& config) {
  absl::StatusOr<RawDataset> data = ReadCsvColumn(config.input_path, config.column);
  if (!data.ok()) return data.status();
  absl::StatusOr<NormalizationParams> params = ComputeNormalization(
      *data, config.epsilon, config.percentile, config.sensitivity);
  if (!params.ok()) return params.status();
  absl::StatusOr<BinnedDataset> binned = NormalizeAndBin(*data, *params, config.bins);
  if (!binned.ok()) return binned.status();
  absl::StatusOr<ActionSet> actions =
      ActionSet::FromMultipliers(config.multipliers, config.epsilon, config.sensitivity);
  if (!actions.ok()) return actions.status();

  BrdConfig brd = config.brd;
  brd.mode = config.mode;
  brd.seed = config.seed;
  GaConfig ga = config.ga;
  ga.mode = config.mode;
  ga.seed = config.seed;

  RunOutcome outcome;
  absl::StatusOr<SolveResult> solution =
      SolvePlan(*binned, config.method, *actions, config.epsilon, brd, ga);
  if (!solution.ok()) return solution.status();
  absl::StatusOr<PrivacyReport> report =
      EvaluatePlan(*binned, solution->plan, config.epsilon, config.mode);
  if (!report.ok()) return report.status();

  std::vector<std::pair<std::string, VariancePlan>> exported;
  if (config.method != Method::kBaseline) {
    absl::StatusOr<VariancePlan> baseline =
        BaselinePlan(*binned, config.epsilon, config.sensitivity);
    if (!baseline.ok()) return baseline.status();
    exported.emplace_back("baseline", *std::move(baseline));
  }
  exported.emplace_back(std::string(MethodName(config.method)), solution->plan);
  absl::StatusOr<std::string> distributions = ExportDistributions(*binned, exported);
  if (!distributions.ok()) return distributions.status();

  std::error_code ec;
  std::filesystem::create_directories(config.out_dir, ec);
  if (ec) {
    return absl::PermissionDeniedError(absl::StrFormat(
        "cannot create output directory '%s': %s", config.out_dir, ec.message()));
  }
  auto emit = [&](std::string_view name, std::string_view content) -> absl::Status {
    const std::string path = (std::filesystem::path(config.out_dir) / name).string();
    if (absl::Status s = WriteFile(path, content); !s.ok()) return s;
    outcome.written.push_back(path);
    return absl::OkStatus();
  };
  std::vector<std::pair<std::string_view, std::string>> files = {
      {"histogram.json", DumpJson(HistogramToJson(*binned, data->label))},
      {"plan.json", DumpJson(PlanToJson(solution->plan, MethodName(config.method)))},
      {"report.json", DumpJson(ReportToJson(*report))},
      {"trace.csv", TraceToCsv(solution->trace)},
      {"distributions.csv", *distributions},
  };
  if (config.samples > 0) {
    absl::StatusOr<std::vector<double>> samples =
        SampleOutput(*binned, solution->plan, config.samples, config.seed);
    if (!samples.ok()) return samples.status();
    files.emplace_back("samples.csv", SamplesToCsv(*samples));
  }
  for (const auto& [name, content] : files) {
    if (absl::Status s = emit(name, content); !s.ok()) return s;
  }

  outcome.exit_code =
      report->p_e == binned->size() ? 0 : kExitPrivacyUnsatisfied;
  outcome.binned = *std::move(binned);
  outcome.solution = *std::move(solution);
  outcome.report = *std::move(report);
  return outcome;
}

}  // namespace nvo
