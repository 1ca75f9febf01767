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

#ifndef NVO_METRICS_H_
#define NVO_METRICS_H_

#include <span>

#include "absl/status/statusor.h"
#include "nvo/distribution.h"

namespace nvo {

inline constexpr double kDefaultJaccardThreshold = 0.001;

// Natural-log KL divergence with 0 * ln(0 / q) = 0. Returns +infinity when q
// vanishes somewhere p does not.
absl::StatusOr<double> KlDivergence(const Distribution& p, const Distribution& q);

// |sd(p) - sd(q)| where both standard deviations are taken over the bin
// representatives.
absl::StatusOr<double> L1SdLoss(const Distribution& p, const Distribution& q,
                                std::span<const double> representatives);

// Intersection over union of the bins whose mass exceeds `threshold`; 1 when
// both sets are empty.
absl::StatusOr<double> JaccardIndex(const Distribution& p, const Distribution& q,
                                    double threshold = kDefaultJaccardThreshold);

absl::StatusOr<double> CosineSimilarity(const Distribution& p,
                                        const Distribution& q);

}  // namespace nvo

#endif  // NVO_METRICS_H_
