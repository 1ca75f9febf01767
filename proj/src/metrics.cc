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

#include "nvo/metrics.h"

#include <cmath>
#include <limits>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"

namespace nvo {
namespace {

absl::Status SameSize(const Distribution& p, const Distribution& q) {
  if (p.masses.size() != q.masses.size()) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "distributions have %d and %d bins", p.masses.size(), q.masses.size()));
  }
  return absl::OkStatus();
}

double StandardDeviation(const Distribution& d,
                         std::span<const double> representatives) {
  double mean = 0.0;
  for (size_t k = 0; k < d.masses.size(); ++k) mean += d.masses[k] * representatives[k];
  double variance = 0.0;
  for (size_t k = 0; k < d.masses.size(); ++k) {
    const double dev = representatives[k] - mean;
    variance += d.masses[k] * dev * dev;
  }
  return std::sqrt(variance);
}

}  // namespace

absl::StatusOr<double> KlDivergence(const Distribution& p, const Distribution& q) {
  if (absl::Status s = SameSize(p, q); !s.ok()) return s;
  double kl = 0.0;
  for (size_t k = 0; k < p.masses.size(); ++k) {
    if (p.masses[k] <= 0.0) continue;
    if (q.masses[k] <= 0.0) return std::numeric_limits<double>::infinity();
    kl += p.masses[k] * std::log(p.masses[k] / q.masses[k]);
  }
  return kl;
}

absl::StatusOr<double> L1SdLoss(const Distribution& p, const Distribution& q,
                                std::span<const double> representatives) {
  if (absl::Status s = SameSize(p, q); !s.ok()) return s;
  if (representatives.size() != p.masses.size()) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "%d representatives for %d bins", representatives.size(), p.masses.size()));
  }
  return std::abs(StandardDeviation(p, representatives) -
                  StandardDeviation(q, representatives));
}

absl::StatusOr<double> JaccardIndex(const Distribution& p, const Distribution& q,
                                    double threshold) {
  if (absl::Status s = SameSize(p, q); !s.ok()) return s;
  if (!(threshold >= 0.0)) {
    return absl::InvalidArgumentError("threshold must be non-negative");
  }
  int intersection = 0;
  int uni = 0;
  for (size_t k = 0; k < p.masses.size(); ++k) {
    const bool in_p = p.masses[k] > threshold;
    const bool in_q = q.masses[k] > threshold;
    intersection += in_p && in_q;
    uni += in_p || in_q;
  }
  if (uni == 0) return 1.0;
  return static_cast<double>(intersection) / uni;
}

absl::StatusOr<double> CosineSimilarity(const Distribution& p,
                                        const Distribution& q) {
  if (absl::Status s = SameSize(p, q); !s.ok()) return s;
  double dot = 0.0, pp = 0.0, qq = 0.0;
  for (size_t k = 0; k < p.masses.size(); ++k) {
    dot += p.masses[k] * q.masses[k];
    pp += p.masses[k] * p.masses[k];
    qq += q.masses[k] * q.masses[k];
  }
  if (pp <= 0.0 || qq <= 0.0) {
    return absl::InvalidArgumentError("cosine similarity of a zero vector");
  }
  return dot / (std::sqrt(pp) * std::sqrt(qq));
}

}  // namespace nvo
