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

#include "nvo/io.h"

#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"

namespace nvo {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

ordered_json Number(double value) {
  if (!std::isfinite(value)) return nullptr;
  return value;
}

absl::Status CheckVersion(const json& doc, std::string_view what) {
  if (!doc.is_object()) {
    return absl::InvalidArgumentError(absl::StrCat(std::string(what), " document is not an object"));
  }
  auto it = doc.find("format_version");
  if (it == doc.end() || !it->is_number_integer() || it->get<int>() != kFormatVersion) {
    return absl::InvalidArgumentError(
        absl::StrFormat("%s document has unsupported format_version", std::string(what)));
  }
  return absl::OkStatus();
}

}  // namespace

ordered_json HistogramToJson(const BinnedDataset& binned, std::string_view label) {
  ordered_json doc;
  doc["format_version"] = kFormatVersion;
  if (!label.empty()) doc["label"] = std::string(label);
  doc["k"] = binned.k;
  doc["bin_of"] = binned.bin_of;
  doc["representatives"] = binned.representatives;
  doc["counts"] = binned.counts;
  const NormalizationParams& p = binned.normalization;
  doc["normalization"] = {{"epsilon_target", p.epsilon_target},
                          {"percentile", p.percentile},
                          {"sensitivity", p.sensitivity},
                          {"margin", p.margin},
                          {"d_min", p.d_min},
                          {"d_max", p.d_max}};
  return doc;
}

absl::StatusOr<BinnedDataset> HistogramFromJson(const json& doc) {
  if (absl::Status s = CheckVersion(doc, "histogram"); !s.ok()) return s;
  BinnedDataset binned;
  std::optional<std::vector<int64_t>> counts;
  try {
    binned.k = doc.at("k").get<int>();
    if (doc.contains("counts")) counts = doc.at("counts").get<std::vector<int64_t>>();
    binned.bin_of = doc.at("bin_of").get<std::vector<int>>();
    const json& p = doc.at("normalization");
    binned.normalization.epsilon_target = p.at("epsilon_target").get<double>();
    binned.normalization.percentile = p.at("percentile").get<double>();
    binned.normalization.sensitivity = p.at("sensitivity").get<double>();
    binned.normalization.margin = p.at("margin").get<double>();
    binned.normalization.d_min = p.at("d_min").get<double>();
    binned.normalization.d_max = p.at("d_max").get<double>();
  } catch (const json::exception& e) {
    return absl::InvalidArgumentError(absl::StrCat("malformed histogram: ", e.what()));
  }
  if (absl::Status s = RebuildHistogram(binned); !s.ok()) return s;
  if (counts.has_value() && *counts != binned.counts) {
    return absl::InvalidArgumentError("histogram counts disagree with bin_of");
  }
  return binned;
}

ordered_json PlanToJson(const VariancePlan& plan, std::string_view method) {
  ordered_json doc;
  doc["format_version"] = kFormatVersion;
  if (!method.empty()) doc["method"] = std::string(method);
  doc["epsilon"] = plan.actions.epsilon;
  doc["sensitivity"] = plan.actions.sensitivity;
  doc["multipliers"] = plan.actions.multipliers;
  doc["scales"] = plan.actions.scales;
  doc["assignment"] = plan.assignment;
  return doc;
}

absl::StatusOr<VariancePlan> PlanFromJson(const json& doc) {
  if (absl::Status s = CheckVersion(doc, "plan"); !s.ok()) return s;
  VariancePlan plan;
  std::vector<double> scales;
  try {
    absl::StatusOr<ActionSet> actions = ActionSet::FromMultipliers(
        doc.at("multipliers").get<std::vector<double>>(),
        doc.at("epsilon").get<double>(), doc.at("sensitivity").get<double>());
    if (!actions.ok()) return actions.status();
    plan.actions = *std::move(actions);
    scales = doc.at("scales").get<std::vector<double>>();
    plan.assignment = doc.at("assignment").get<std::vector<int>>();
  } catch (const json::exception& e) {
    return absl::InvalidArgumentError(absl::StrCat("malformed plan: ", e.what()));
  }
  if (scales.size() != plan.actions.scales.size()) {
    return absl::InvalidArgumentError("plan scales disagree with multipliers");
  }
  for (size_t i = 0; i < scales.size(); ++i) {
    if (std::abs(scales[i] - plan.actions.scales[i]) >
        1e-12 * std::max(1.0, std::abs(scales[i]))) {
      return absl::InvalidArgumentError("plan scales disagree with multipliers");
    }
  }
  plan.actions.scales = std::move(scales);
  if (absl::Status s = ValidatePlan(plan, static_cast<int64_t>(plan.assignment.size()));
      !s.ok()) {
    return s;
  }
  return plan;
}

ordered_json ReportToJson(const PrivacyReport& report) {
  ordered_json doc;
  doc["format_version"] = kFormatVersion;
  doc["epsilon_target"] = report.epsilon_target;
  doc["mode"] = std::string(AccountingModeName(report.mode));
  doc["num_instances"] = report.per_instance.size();
  doc["p_e"] = report.p_e;
  doc["all_satisfied"] =
      report.p_e == static_cast<int64_t>(report.per_instance.size());
  if (report.p_u.has_value()) {
    doc["p_u"] = *report.p_u;
    doc["payoff"] = static_cast<double>(report.p_e) + *report.p_u;
  }
  doc["b_min"] = report.b_min;
  doc["bound_density"] = report.bound_density;
  doc["bound_binned"] = report.bound_binned;
  doc["v_min_value"] = Number(report.v_min_value);
  if (report.metrics.has_value()) {
    doc["metrics"] = {{"kl", Number(report.metrics->kl)},
                      {"l1_sd", Number(report.metrics->l1_sd)},
                      {"jaccard@0.001", Number(report.metrics->jaccard)},
                      {"cosine", Number(report.metrics->cosine)}};
  }
  ordered_json rows = ordered_json::array();
  for (const InstancePrivacy& r : report.per_instance) {
    rows.push_back({{"index", r.index},
                    {"bin", r.bin},
                    {"scale", r.scale},
                    {"epsilon_exact", Number(r.epsilon_exact)},
                    {"epsilon_conservative", Number(r.epsilon_conservative)},
                    {"satisfied", r.satisfied}});
  }
  doc["per_instance"] = std::move(rows);
  return doc;
}

std::string TraceToCsv(const SolverTrace& trace) {
  std::string out = "step,instance,scale_index,payoff,p_e,p_u\n";
  for (const TraceRecord& r : trace.records) {
    absl::StrAppendFormat(&out, "%d,%d,%d,%.17g,%d,%.17g\n", r.step, r.instance,
                          r.scale_index, r.payoff, r.p_e, r.p_u);
  }
  return out;
}

std::string SamplesToCsv(const std::vector<double>& samples) {
  std::string out = "value\n";
  for (double v : samples) absl::StrAppendFormat(&out, "%.17g\n", v);
  return out;
}

std::string DumpJson(const ordered_json& doc) { return doc.dump(2) + "\n"; }

absl::Status WriteFile(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    return absl::PermissionDeniedError(absl::StrFormat("cannot write '%s'", path));
  }
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) {
    return absl::DataLossError(absl::StrFormat("failed writing '%s'", path));
  }
  return absl::OkStatus();
}

absl::StatusOr<std::string> ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    return absl::NotFoundError(absl::StrFormat("cannot open '%s'", path));
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

absl::StatusOr<json> ReadJsonFile(const std::string& path) {
  absl::StatusOr<std::string> text = ReadFile(path);
  if (!text.ok()) return text.status();
  json doc = json::parse(*text, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded()) {
    return absl::InvalidArgumentError(absl::StrFormat("'%s' is not valid JSON", path));
  }
  return doc;
}

}  // namespace nvo
