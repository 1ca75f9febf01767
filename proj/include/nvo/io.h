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

#ifndef NVO_IO_H_
#define NVO_IO_H_

#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "json.hpp"
#include "nvo/game.h"
#include "nvo/mechanism.h"
#include "nvo/pdp.h"
#include "nvo/preprocess.h"

namespace nvo {

// Version stamped into every JSON document this library writes.
inline constexpr int kFormatVersion = 1;

nlohmann::ordered_json HistogramToJson(const BinnedDataset& binned,
                                       std::string_view label = "");
absl::StatusOr<BinnedDataset> HistogramFromJson(const nlohmann::json& doc);

// `method` is informational ("brd", "ga", "baseline", ...); empty omits it.
nlohmann::ordered_json PlanToJson(const VariancePlan& plan,
                                  std::string_view method = "");
absl::StatusOr<VariancePlan> PlanFromJson(const nlohmann::json& doc);

// Non-finite losses are written as null.
nlohmann::ordered_json ReportToJson(const PrivacyReport& report);

// step,instance,scale_index,payoff,p_e,p_u
std::string TraceToCsv(const SolverTrace& trace);

// Single "value" column.
std::string SamplesToCsv(const std::vector<double>& samples);

// Pretty-printed with a trailing newline.
std::string DumpJson(const nlohmann::ordered_json& doc);

absl::Status WriteFile(const std::string& path, std::string_view content);
absl::StatusOr<std::string> ReadFile(const std::string& path);
absl::StatusOr<nlohmann::json> ReadJsonFile(const std::string& path);

}  // namespace nvo

#endif  // NVO_IO_H_
