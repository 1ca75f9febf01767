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

// Command-line front end. Exit status: 0 on success, 1 on operational
// failure, 2 when the run completed but some instance misses its target.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"
#include "nvo/io.h"
#include "nvo/pipeline.h"

namespace nvo {
namespace {

constexpr int kExitFailure = 1;

int Fail(const absl::Status& status) {
  std::cerr << "nvo: " << status.message() << "\n";
  return kExitFailure;
}

int ExitFor(const PrivacyReport& report) {
  return report.p_e == static_cast<int64_t>(report.per_instance.size())
             ? 0
             : kExitPrivacyUnsatisfied;
}

absl::StatusOr<BinnedDataset> LoadHistogram(const std::string& path) {
  absl::StatusOr<nlohmann::json> doc = ReadJsonFile(path);
  if (!doc.ok()) return doc.status();
  absl::StatusOr<BinnedDataset> binned = HistogramFromJson(*doc);
  if (!binned.ok()) {
    return absl::Status(binned.status().code(),
                        absl::StrCat(path, ": ", binned.status().message()));
  }
  return binned;
}

absl::StatusOr<VariancePlan> LoadPlan(const std::string& path) {
  absl::StatusOr<nlohmann::json> doc = ReadJsonFile(path);
  if (!doc.ok()) return doc.status();
  absl::StatusOr<VariancePlan> plan = PlanFromJson(*doc);
  if (!plan.ok()) {
    return absl::Status(plan.status().code(),
                        absl::StrCat(path, ": ", plan.status().message()));
  }
  return plan;
}

// Flags shared by the subcommands that take a solver or accounting mode.
struct Options {
  RunConfig run;
  std::string method = "brd";
  std::string mode = "exact";
  std::string init = "max";
  std::optional<uint64_t> seed;
  std::string histogram;
  std::string plan;
  std::string out;
  std::string trace;
  std::vector<std::string> named_plans;
};

void AddModeFlag(CLI::App* app, Options& o) {
  app->add_option("--mode", o.mode, "Privacy accounting: exact or conservative")
      ->check(CLI::IsMember({"exact", "conservative"}));
}

void AddSolverFlags(CLI::App* app, Options& o) {
  app->add_option("--multipliers", o.run.multipliers,
                  "Scale multipliers applied to sensitivity/epsilon")
      ->delimiter(',');
  app->add_option("--seed", o.seed, "Seed for all randomness");
  app->add_option("--max-passes", o.run.brd.max_passes, "BRD pass limit");
  app->add_option("--payoff-tolerance", o.run.brd.payoff_tolerance,
                  "Minimum gain for a BRD move");
  app->add_option("--init", o.init, "BRD initial profile: max or random")
      ->check(CLI::IsMember({"max", "random"}));
  app->add_option("--population", o.run.ga.population, "GA population size");
  app->add_option("--mating-parents", o.run.ga.mating_parents, "GA parent pool");
  app->add_option("--crossover-points", o.run.ga.crossover_points,
                  "GA crossover points");
  app->add_option("--mutation-rate", o.run.ga.mutation_rate,
                  "GA per-gene mutation rate");
  app->add_option("--elites", o.run.ga.elites, "GA elites kept per generation");
  app->add_option("--generations", o.run.ga.generations, "GA generation limit");
  app->add_option("--stall-generations", o.run.ga.stall_generations,
                  "GA generations without improvement before stopping");
  AddModeFlag(app, o);
}

absl::Status ResolveMode(Options& o) {
  absl::StatusOr<AccountingMode> mode = ParseAccountingMode(o.mode);
  if (!mode.ok()) return mode.status();
  o.run.mode = *mode;
  o.run.brd.mode = *mode;
  o.run.ga.mode = *mode;
  return absl::OkStatus();
}

// Resolves solver flags into the typed config and checks cross-flag rules.
absl::Status Finalize(Options& o) {
  absl::StatusOr<Method> method = ParseMethod(o.method);
  if (!method.ok()) return method.status();
  o.run.method = *method;
  if (absl::Status s = ResolveMode(o); !s.ok()) return s;
  o.run.brd.init = o.init == "random" ? InitRule::kRandom : InitRule::kMaxScale;
  if (o.run.method != Method::kBaseline && !o.seed.has_value()) {
    return absl::InvalidArgumentError(
        absl::StrCat("--seed is required for method ", o.method));
  }
  o.run.seed = o.seed.value_or(0);
  o.run.brd.seed = o.run.seed;
  o.run.ga.seed = o.run.seed;
  if (o.run.method == Method::kGa && o.run.ga.generations <= 0) {
    return absl::InvalidArgumentError("--generations is required for method ga");
  }
  return absl::OkStatus();
}

int RunPreprocess(Options& o) {
  absl::StatusOr<RawDataset> data = ReadCsvColumn(o.run.input_path, o.run.column);
  if (!data.ok()) return Fail(data.status());
  absl::StatusOr<NormalizationParams> params = ComputeNormalization(
      *data, o.run.epsilon, o.run.percentile, o.run.sensitivity);
  if (!params.ok()) return Fail(params.status());
  absl::StatusOr<BinnedDataset> binned = NormalizeAndBin(*data, *params, o.run.bins);
  if (!binned.ok()) return Fail(binned.status());
  if (absl::Status s = WriteFile(o.out, DumpJson(HistogramToJson(*binned, data->label)));
      !s.ok()) {
    return Fail(s);
  }
  return 0;
}

int RunSolve(Options& o) {
  if (absl::Status s = Finalize(o); !s.ok()) return Fail(s);
  absl::StatusOr<BinnedDataset> binned = LoadHistogram(o.histogram);
  if (!binned.ok()) return Fail(binned.status());
  const double epsilon = binned->normalization.epsilon_target;
  const double sensitivity = binned->normalization.sensitivity;
  absl::StatusOr<ActionSet> actions =
      ActionSet::FromMultipliers(o.run.multipliers, epsilon, sensitivity);
  if (!actions.ok()) return Fail(actions.status());
  absl::StatusOr<SolveResult> result =
      SolvePlan(*binned, o.run.method, *actions, epsilon, o.run.brd, o.run.ga);
  if (!result.ok()) return Fail(result.status());
  if (absl::Status s =
          WriteFile(o.out, DumpJson(PlanToJson(result->plan, o.method)));
      !s.ok()) {
    return Fail(s);
  }
  if (!o.trace.empty()) {
    if (absl::Status s = WriteFile(o.trace, TraceToCsv(result->trace)); !s.ok()) {
      return Fail(s);
    }
  }
  return result->payoff.p_e == binned->size() ? 0 : kExitPrivacyUnsatisfied;
}

int RunEvaluate(Options& o) {
  if (absl::Status s = ResolveMode(o); !s.ok()) return Fail(s);
  absl::StatusOr<BinnedDataset> binned = LoadHistogram(o.histogram);
  if (!binned.ok()) return Fail(binned.status());
  absl::StatusOr<VariancePlan> plan = LoadPlan(o.plan);
  if (!plan.ok()) return Fail(plan.status());
  absl::StatusOr<PrivacyReport> report = EvaluatePlan(
      *binned, *plan, binned->normalization.epsilon_target, o.run.mode);
  if (!report.ok()) return Fail(report.status());
  if (absl::Status s = WriteFile(o.out, DumpJson(ReportToJson(*report))); !s.ok()) {
    return Fail(s);
  }
  return ExitFor(*report);
}

int RunSample(Options& o) {
  absl::StatusOr<BinnedDataset> binned = LoadHistogram(o.histogram);
  if (!binned.ok()) return Fail(binned.status());
  absl::StatusOr<VariancePlan> plan = LoadPlan(o.plan);
  if (!plan.ok()) return Fail(plan.status());
  absl::StatusOr<std::vector<double>> samples =
      SampleOutput(*binned, *plan, o.run.samples, *o.seed);
  if (!samples.ok()) return Fail(samples.status());
  if (absl::Status s = WriteFile(o.out, SamplesToCsv(*samples)); !s.ok()) {
    return Fail(s);
  }
  return 0;
}

int RunExport(Options& o) {
  absl::StatusOr<BinnedDataset> binned = LoadHistogram(o.histogram);
  if (!binned.ok()) return Fail(binned.status());
  std::vector<std::pair<std::string, VariancePlan>> plans;
  for (const std::string& entry : o.named_plans) {
    const size_t eq = entry.find('=');
    if (eq == std::string::npos || eq == 0) {
      return Fail(absl::InvalidArgumentError(
          absl::StrCat("--plan expects name=path, got '", entry, "'")));
    }
    absl::StatusOr<VariancePlan> plan = LoadPlan(entry.substr(eq + 1));
    if (!plan.ok()) return Fail(plan.status());
    plans.emplace_back(entry.substr(0, eq), *std::move(plan));
  }
  absl::StatusOr<std::string> csv = ExportDistributions(*binned, plans);
  if (!csv.ok()) return Fail(csv.status());
  if (absl::Status s = WriteFile(o.out, *csv); !s.ok()) return Fail(s);
  return 0;
}

int RunAll(Options& o) {
  if (absl::Status s = Finalize(o); !s.ok()) return Fail(s);
  absl::StatusOr<RunOutcome> outcome = Run(o.run);
  if (!outcome.ok()) return Fail(outcome.status());
  return outcome->exit_code;
}

void AddIngestFlags(CLI::App* app, Options& o) {
  app->add_option("--input", o.run.input_path, "CSV file with a header row")
      ->required();
  app->add_option("--column", o.run.column, "Numeric column to read")->required();
  app->add_option("--epsilon", o.run.epsilon, "Target privacy level")->required();
  app->add_option("--percentile", o.run.percentile, "Coverage of the range margin");
  app->add_option("--sensitivity", o.run.sensitivity, "Query sensitivity");
  app->add_option("--bins", o.run.bins, "Number of histogram bins");
}

int Main(int argc, char** argv) {
  CLI::App app{"Per-instance noise-scale optimization for sampling queries"};
  app.require_subcommand(1);
  Options o;

  CLI::App* preprocess = app.add_subcommand("preprocess", "Normalize and bin a column");
  AddIngestFlags(preprocess, o);
  preprocess->add_option("--out", o.out, "Histogram JSON path")->required();

  CLI::App* solve = app.add_subcommand("solve", "Optimize a scale plan");
  solve->add_option("--histogram", o.histogram, "Histogram JSON")->required();
  solve->add_option("--method", o.method, "brd or ga")
      ->check(CLI::IsMember({"brd", "ga"}));
  AddSolverFlags(solve, o);
  solve->add_option("--out", o.out, "Plan JSON path")->required();
  solve->add_option("--trace", o.trace, "Trace CSV path");

  CLI::App* baseline = app.add_subcommand("baseline", "Uniform-scale reference plan");
  baseline->add_option("--histogram", o.histogram, "Histogram JSON")->required();
  baseline->add_option("--out", o.out, "Plan JSON path")->required();

  CLI::App* evaluate = app.add_subcommand("evaluate", "Privacy and utility report");
  evaluate->add_option("--histogram", o.histogram, "Histogram JSON")->required();
  evaluate->add_option("--plan", o.plan, "Plan JSON")->required();
  AddModeFlag(evaluate, o);
  evaluate->add_option("--out", o.out, "Report JSON path")->required();

  CLI::App* sample = app.add_subcommand("sample", "Draw privatized samples");
  sample->add_option("--histogram", o.histogram, "Histogram JSON")->required();
  sample->add_option("--plan", o.plan, "Plan JSON")->required();
  sample->add_option("--count", o.run.samples, "Number of samples")->required();
  sample->add_option("--seed", o.seed, "Seed for all randomness")->required();
  sample->add_option("--out", o.out, "Samples CSV path")->required();

  CLI::App* export_dist =
      app.add_subcommand("export-dist", "Original and mechanism distributions");
  export_dist->add_option("--histogram", o.histogram, "Histogram JSON")->required();
  export_dist->add_option("--plan", o.named_plans, "name=path, repeatable");
  export_dist->add_option("--out", o.out, "CSV path")->required();

  CLI::App* run = app.add_subcommand("run", "Full pipeline into a directory");
  AddIngestFlags(run, o);
  run->add_option("--method", o.method, "brd, ga or baseline")
      ->check(CLI::IsMember({"brd", "ga", "baseline"}));
  AddSolverFlags(run, o);
  run->add_option("--samples", o.run.samples, "Samples to draw, 0 for none");
  run->add_option("--out-dir", o.run.out_dir, "Artifact directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitFailure;
  }

  if (preprocess->parsed()) return RunPreprocess(o);
  if (solve->parsed()) return RunSolve(o);
  if (baseline->parsed()) {
    absl::StatusOr<BinnedDataset> binned = LoadHistogram(o.histogram);
    if (!binned.ok()) return Fail(binned.status());
    absl::StatusOr<VariancePlan> plan =
        BaselinePlan(*binned, binned->normalization.epsilon_target,
                     binned->normalization.sensitivity);
    if (!plan.ok()) return Fail(plan.status());
    if (absl::Status s = WriteFile(o.out, DumpJson(PlanToJson(*plan, "baseline")));
        !s.ok()) {
      return Fail(s);
    }
    return 0;
  }
  if (evaluate->parsed()) return RunEvaluate(o);
  if (sample->parsed()) return RunSample(o);
  if (export_dist->parsed()) return RunExport(o);
  if (run->parsed()) return RunAll(o);
  return kExitFailure;
}

}  // namespace
}  // namespace nvo

int main(int argc, char** argv) { return nvo::Main(argc, argv); }
