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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "absl/strings/str_format.h"
#include "boost/math/distributions/chi_squared.hpp"
#include "nvo/evolution.h"
#include "nvo/game.h"
#include "nvo/io.h"
#include "nvo/mechanism.h"
#include "nvo/metrics.h"
#include "nvo/pdp.h"
#include "nvo/preprocess.h"
#include "nvo/random.h"
#include "cli_util.h"
#include "oracle.h"

namespace nvo {
namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

const std::vector<int> kFixtureBins = {10, 10, 50, 90};

ActionSet Actions(const std::vector<double>& multipliers, double eps) {
  return *ActionSet::FromMultipliers(multipliers, eps);
}

double StandardNormal(Rng& rng) {
  const double u1 = 1.0 - UniformDouble(rng);
  const double u2 = UniformDouble(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

// Two height-like clusters at 190 and 210 with spread 6.
RawDataset Bimodal(int n, uint64_t seed) {
  Rng rng(seed);
  RawDataset data{{}, "height"};
  for (int i = 0; i < n; ++i) {
    data.values.push_back((i % 2 ? 190.0 : 210.0) + 6.0 * StandardNormal(rng));
  }
  return data;
}

std::vector<double> RandomSimplex(Rng& rng, int k, double floor) {
  std::vector<double> v(k);
  double s = 0.0;
  for (double& x : v) s += x = -std::log(1.0 - UniformDouble(rng)) + floor;
  for (double& x : v) x /= s;
  return v;
}

Outcome NearDegenerateTriple() {
  BinnedDataset binned = oracle::MakeBinned({40, 40, 40}, 101);
  auto mm = BuildMassMatrix(binned, {Actions({1e-5}, 1.0), {0, 0, 0}});
  if (!mm.ok()) return {false, std::string(mm.status().message())};
  double worst = 0.0;
  for (int i = 0; i < 3; ++i) {
    worst = std::max(worst, std::abs(*EpsilonConservative(*mm, i) - std::log(1.5)));
  }
  return {worst <= 1e-6, absl::StrFormat("max |eps - ln(3/2)| = %.3g", worst)};
}

Outcome DensityBoundConstant() {
  const double b = *MinScaleBound(1.0, 1307, ScaleBound::kDensity, 101);
  return {std::abs(b - 0.1296) <= 0.001, absl::StrFormat("b_min = %.6f", b)};
}

Outcome BinnedBoundGuarantee() {
  Rng rng(2026);
  const double eps_choices[] = {0.5, 1.0, 2.0};
  const int k_choices[] = {11, 101};
  double worst_ratio = 0.0;
  int failures = 0;
  std::vector<std::string> archived;
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + static_cast<int>(UniformIndex(rng, 49));
    const int k = k_choices[UniformIndex(rng, 2)];
    const double eps = eps_choices[UniformIndex(rng, 3)];
    const double bound = *MinScaleBound(eps, n, ScaleBound::kBinned, k);
    std::vector<int> bins(n);
    for (int& b : bins) b = static_cast<int>(UniformIndex(rng, k));
    std::vector<double> multipliers;
    for (int a = 0; a < 3; ++a) {
      multipliers.push_back(bound * eps * (1.0 + 2.0 * UniformDouble(rng)));
    }
    multipliers[2] = bound * eps;  // One action sits exactly on the bound.
    const ActionSet actions = Actions(multipliers, eps);
    BinnedDataset binned = oracle::MakeBinned(bins, k, eps);

    std::vector<std::vector<int>> plans(1, std::vector<int>(n));
    for (int& a : plans[0]) a = static_cast<int>(UniformIndex(rng, 3));
    BrdConfig config;
    auto brd = BrdSolve(binned, actions, eps, config);
    if (!brd.ok()) return {false, std::string(brd.status().message())};
    plans.push_back(brd->plan.assignment);

    for (const auto& assignment : plans) {
      auto mm = BuildMassMatrix(binned, {actions, assignment});
      for (int i = 0; i < n; ++i) {
        const double e = *EpsilonExact(*mm, i);
        worst_ratio = std::max(worst_ratio, e / eps);
        if (!(e <= eps)) {
          ++failures;
          nlohmann::ordered_json doc;
          doc["histogram"] = HistogramToJson(binned);
          doc["plan"] = PlanToJson({actions, assignment});
          doc["instance"] = i;
          doc["epsilon_exact"] = e;
          archived.push_back(DumpJson(doc));
        }
      }
    }
  }
  if (!archived.empty()) {
    const std::string path = "bound_counterexamples.json";
    std::string all = "[\n";
    for (size_t i = 0; i < archived.size(); ++i) {
      all += archived[i] + (i + 1 < archived.size() ? ",\n" : "\n");
    }
    (void)WriteFile(path, all + "]\n");
  }
  return {failures == 0,
          absl::StrFormat("%d violations, worst eps_i / eps = %.4f", failures, worst_ratio)};
}

Outcome MediantFuzz() {
  Rng rng(404);
  int failures = 0;
  double worst_gap = -INFINITY;
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 2 + static_cast<int>(UniformIndex(rng, 9));
    const int k = 2 + static_cast<int>(UniformIndex(rng, 30));
    std::vector<std::vector<double>> rows;
    const bool laplace = trial % 2 == 0;
    for (int i = 0; i < n; ++i) {
      if (laplace) {
        const double b = std::exp(std::log(0.05) + UniformDouble(rng) * std::log(100.0));
        rows.push_back(*MassRow(UniformDouble(rng), b, k));
      } else {
        rows.push_back(RandomSimplex(rng, k, 1e-3));
      }
    }
    auto mm = MassMatrix::FromRows(rows);
    const int i = static_cast<int>(UniformIndex(rng, n));
    const double eps = *EpsilonExact(*mm, i);
    const std::vector<double> with = oracle::Mixture(rows);
    const std::vector<double> without = oracle::Mixture(rows, i);
    double p = 0.0, q = 0.0;
    bool any = false;
    for (int x = 0; x < k; ++x) {
      if (UniformDouble(rng) < 0.5) {
        p += with[x];
        q += without[x];
        any = true;
      }
    }
    if (!any) {
      p = with[0];
      q = without[0];
    }
    const double loss = std::abs(std::log(p / q));
    worst_gap = std::max(worst_gap, loss - eps);
    if (loss > eps + 1e-9) ++failures;
  }
  return {failures == 0, absl::StrFormat("%d violations, max(subset - eps_exact) = %.3g",
                                         failures, worst_gap)};
}

Outcome BrdDeskScale() {
  std::string detail;
  bool pass = true;
  for (const std::vector<double>& multipliers :
       {std::vector<double>{2.0, 1.0, 0.33}, std::vector<double>{60.0, 30.0, 21.0}}) {
    const ActionSet actions = Actions(multipliers, 1.0);
    BinnedDataset binned = oracle::MakeBinned(kFixtureBins, 101);
    auto ev = PayoffEvaluator::Create(binned, actions, 1.0, {});
    const auto profiles = oracle::AllProfiles(4, 3);
    std::vector<double> table;
    for (const auto& p : profiles) table.push_back(ev->Evaluate(p)->total);
    auto result = BrdSolve(binned, actions, 1.0, BrdConfig{});
    if (!result.ok()) return {false, std::string(result.status().message())};
    const std::vector<int>& a = result->plan.assignment;
    auto index = [](const std::vector<int>& p) {
      int idx = 0;
      for (int v : p) idx = idx * 3 + v;
      return idx;
    };
    bool ne = true;
    for (int i = 0; i < 4; ++i) {
      for (int s = 0; s < 3; ++s) {
        std::vector<int> dev = a;
        dev[i] = s;
        if (table[index(dev)] > table[index(a)]) ne = false;
      }
    }
    bool monotone = true;
    double prev = result->trace.initial.total;
    for (const TraceRecord& r : result->trace.records) {
      monotone &= r.payoff >= prev;
      prev = r.payoff;
    }
    const double bound = *MinScaleBound(1.0, 4, ScaleBound::kBinned, 101);
    const bool clears = actions.b_min() >= bound;
    const double oracle_total =
        oracle::Payoff(kFixtureBins, 101, actions.scales, a, 1.0).total;
    const bool converged = result->trace.stop == StopReason::kConverged;
    const bool ok = converged && ne && monotone &&
                    std::abs(oracle_total - result->payoff.total) < 1e-10 &&
                    (!clears || result->payoff.p_e == 4);
    pass &= ok;
    detail += absl::StrFormat("[b_min %.2f%s: converged=%d ne=%d monotone=%d P_E=%d P=%.6f] ",
                              actions.b_min(), clears ? " clears bound" : "", converged,
                              ne, monotone, result->payoff.p_e, result->payoff.total);
  }
  return {pass, detail};
}

Outcome UtilityVersusBaseline() {
  const RawDataset data = Bimodal(1000, 6);
  auto params = ComputeNormalization(data, 1.0);
  auto binned = NormalizeAndBin(data, *params, 101);
  const ActionSet actions = Actions(kDefaultMultipliers, 1.0);
  auto brd = BrdSolve(*binned, actions, 1.0, BrdConfig{});
  auto baseline = BaselinePlan(*binned, 1.0);
  const Distribution original = EmpiricalDistribution(*binned);
  auto kl_of = [&](const VariancePlan& plan) {
    return *KlDivergence(original, MixtureDistribution(*BuildMassMatrix(*binned, plan)));
  };
  auto pe_of = [&](const VariancePlan& plan) {
    return PrivacyPayoff(*BuildMassMatrix(*binned, plan), 1.0, AccountingMode::kExact)->p_e;
  };
  const double kl_brd = kl_of(brd->plan);
  const double kl_base = kl_of(*baseline);
  const int64_t pe_brd = pe_of(brd->plan);
  const int64_t pe_base = pe_of(*baseline);
  const bool pass = kl_brd <= 0.2 * kl_base && pe_brd == 1000 && pe_base == 1000;
  return {pass, absl::StrFormat("KL brd %.5f, baseline %.5f, ratio %.3f (need <= 0.2); "
                                "P_E brd %d, baseline %d",
                                kl_brd, kl_base, kl_brd / kl_base, pe_brd, pe_base)};
}

Outcome GaProperties() {
  BinnedDataset binned = oracle::MakeBinned(kFixtureBins, 101);
  const ActionSet actions = Actions({2.0, 1.0, 0.33}, 1.0);
  auto ev = PayoffEvaluator::Create(binned, actions, 1.0, {});
  double optimum = -INFINITY;
  for (const auto& p : oracle::AllProfiles(4, 3)) {
    optimum = std::max(optimum, ev->Evaluate(p)->total);
  }
  int reached = 0;
  bool monotone = true;
  for (uint64_t seed = 1; seed <= 10; ++seed) {
    GaConfig config;
    config.population = 100;
    config.generations = 200;
    config.seed = seed;
    auto result = GaSolve(binned, actions, 1.0, config);
    if (!result.ok()) return {false, std::string(result.status().message())};
    double prev = -INFINITY;
    for (const TraceRecord& r : result->trace.records) {
      monotone &= r.payoff >= prev;
      prev = r.payoff;
    }
    reached += result->payoff.total == optimum;
  }
  return {monotone && reached >= 9,
          absl::StrFormat("best-ever monotone=%d, optimum reached %d/10", monotone, reached)};
}

Outcome MechanismNumerics() {
  Rng rng(8080);
  double worst_sum = 0.0;
  int nonpositive = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    const double mu = UniformDouble(rng);
    const double b = std::exp(std::log(0.005) + UniformDouble(rng) * std::log(1e4));
    const int k = 2 + static_cast<int>(UniformIndex(rng, 200));
    auto row = MassRow(mu, b, k);
    if (!row.ok()) return {false, std::string(row.status().message())};
    double sum = 0.0;
    for (double m : *row) {
      sum += m;
      nonpositive += !(m > 0.0);
    }
    worst_sum = std::max(worst_sum, std::abs(sum - 1.0));
  }

  BinnedDataset binned = oracle::MakeBinned({5, 20, 20, 33, 47, 48, 60, 60, 60, 99}, 101);
  const ActionSet actions = Actions({0.01, 0.05, 0.3}, 1.0);
  const VariancePlan plan{actions, {0, 1, 2, 0, 1, 2, 0, 1, 2, 0}};
  const Distribution expected = MixtureDistribution(*BuildMassMatrix(binned, plan));
  const int n = 100000;
  auto samples = SampleOutput(binned, plan, n, 31337);
  std::vector<double> observed(101, 0.0);
  for (double s : *samples) observed[BinIndex(s, 101)] += 1.0;
  double stat = 0.0, obs = 0.0, exp = 0.0;
  int cells = 0;
  for (int x = 0; x < 101; ++x) {
    obs += observed[x];
    exp += expected.masses[x] * n;
    if (exp >= 5.0 || x == 100) {
      stat += (obs - exp) * (obs - exp) / exp;
      obs = exp = 0.0;
      ++cells;
    }
  }
  const double p_value = boost::math::cdf(
      boost::math::complement(boost::math::chi_squared(cells - 1), stat));
  return {worst_sum <= 1e-9 && nonpositive == 0 && p_value > 0.001,
          absl::StrFormat("max |row sum - 1| = %.2g, non-positive entries %d, "
                          "chi-square p = %.4f over %d cells",
                          worst_sum, nonpositive, p_value, cells)};
}

Outcome MetricIdentities() {
  Rng rng(99);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int k = 2 + static_cast<int>(UniformIndex(rng, 150));
    std::vector<double> reps(k);
    for (int x = 0; x < k; ++x) reps[x] = (x + 0.5) / k;
    const Distribution p{RandomSimplex(rng, k, trial % 3 == 0 ? 0.0 : 1e-3)};
    worst = std::max(worst, std::abs(*KlDivergence(p, p)));
    worst = std::max(worst, std::abs(*CosineSimilarity(p, p) - 1.0));
    worst = std::max(worst, std::abs(*JaccardIndex(p, p) - 1.0));
    worst = std::max(worst, std::abs(*L1SdLoss(p, p, reps)));
  }
  double worst_kl = 0.0;
  for (int k : {2, 4, 11, 101, 1000}) {
    Distribution point{std::vector<double>(k, 0.0)};
    point.masses[k / 2] = 1.0;
    const Distribution uniform{std::vector<double>(k, 1.0 / k)};
    worst_kl = std::max(worst_kl, std::abs(*KlDivergence(point, uniform) - std::log(k)));
  }
  return {worst <= 1e-12 && worst_kl <= 1e-12,
          absl::StrFormat("identity error %.2g, point-vs-uniform error %.2g", worst,
                          worst_kl)};
}

Outcome CliDeterminism() {
  const std::string dir =
      (std::filesystem::temp_directory_path() / "nvo_acceptance_cli").string();
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  std::string csv = "value\n";
  for (double v : Bimodal(300, 12).values) csv += absl::StrFormat("%.17g\n", v);
  testing_util::WriteText(dir + "/data.csv", csv);
  bool pass = true;
  std::string detail;
  for (const std::string method : {"brd", "ga"}) {
    const std::string flags = "run --input " + dir + "/data.csv --column value --epsilon 1 "
                              "--seed 42 --generations 60 --population 80 --samples 500 "
                              "--method " + method;
    const int a = testing_util::RunCli(flags + " --out-dir " + dir + "/" + method + "_a");
    const int b = testing_util::RunCli(flags + " --out-dir " + dir + "/" + method + "_b");
    bool same = a == b && (a == 0 || a == 2);
    for (const char* name : {"histogram.json", "plan.json", "report.json", "trace.csv",
                             "distributions.csv", "samples.csv"}) {
      const std::string x = testing_util::Slurp(dir + "/" + method + "_a/" + name);
      const std::string y = testing_util::Slurp(dir + "/" + method + "_b/" + name);
      same &= !x.empty() && x == y;
    }
    pass &= same;
    detail += absl::StrFormat("%s: exit %d/%d identical=%d; ", method, a, b, same);
  }
  return {pass, detail};
}

struct Criterion {
  int id;
  const char* name;
  double limit_seconds;
  std::function<Outcome()> check;
};

}  // namespace
}  // namespace nvo

int main() {
  using nvo::Criterion;
  const Criterion criteria[] = {
      {1, "near-degenerate triple ln(3/2)", 1, nvo::NearDegenerateTriple},
      {2, "density bound constant", 1, nvo::DensityBoundConstant},
      {3, "binned bound guarantee", 120, nvo::BinnedBoundGuarantee},
      {4, "mediant/singleton fuzz", 30, nvo::MediantFuzz},
      {5, "BRD desk scale", 5, nvo::BrdDeskScale},
      {6, "utility vs baseline", 300, nvo::UtilityVersusBaseline},
      {7, "GA properties", 120, nvo::GaProperties},
      {8, "mechanism numerics", 60, nvo::MechanismNumerics},
      {9, "metric identities", 5, nvo::MetricIdentities},
      {10, "CLI determinism", 60, nvo::CliDeterminism},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    const nvo::Outcome outcome = c.check();
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool pass = outcome.pass && seconds <= c.limit_seconds;
    failed += !pass;
    std::printf("CRITERION %d %s: %s (%.2fs, limit %.0fs) %s\n", c.id,
                pass ? "PASS" : "FAIL", c.name, seconds, c.limit_seconds,
                outcome.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
