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
#include <vector>

#include "absl/status/status.h"
#include "gtest/gtest.h"
#include "nvo/random.h"

namespace nvo {
namespace {

Distribution D(std::vector<double> masses) { return Distribution{std::move(masses)}; }

TEST(KlDivergenceTest, IdenticalIsZero) {
  EXPECT_EQ(*KlDivergence(D({0.2, 0.3, 0.5}), D({0.2, 0.3, 0.5})), 0.0);
}

TEST(KlDivergenceTest, PointMassAgainstUniform) {
  EXPECT_NEAR(*KlDivergence(D({1, 0, 0, 0}), D({0.25, 0.25, 0.25, 0.25})),
              std::log(4.0), 1e-15);
  EXPECT_NEAR(*KlDivergence(D({1, 0, 0, 0}), D({0.25, 0.25, 0.25, 0.25})), 1.3863,
              1e-4);
}

TEST(KlDivergenceTest, TermByTerm) {
  const double expected = 0.75 * std::log(0.75 / 0.5) + 0.25 * std::log(0.25 / 0.5);
  EXPECT_NEAR(*KlDivergence(D({0.75, 0.25}), D({0.5, 0.5})), expected, 1e-15);
  EXPECT_NEAR(expected, 0.13081, 1e-5);
}

TEST(KlDivergenceTest, MissingSupportIsInfinite) {
  EXPECT_TRUE(std::isinf(*KlDivergence(D({0.5, 0.5}), D({1.0, 0.0}))));
}

TEST(KlDivergenceTest, DimensionMismatch) {
  EXPECT_EQ(KlDivergence(D({1.0}), D({0.5, 0.5})).status().code(),
            absl::StatusCode::kInvalidArgument);
}

TEST(L1SdLossTest, Examples) {
  const std::vector<double> reps = {0.25, 0.5, 0.75};
  EXPECT_EQ(*L1SdLoss(D({0.2, 0.5, 0.3}), D({0.2, 0.5, 0.3}), reps), 0.0);
  EXPECT_NEAR(*L1SdLoss(D({0, 1, 0}), D({0.5, 0, 0.5}), reps), 0.25, 1e-15);
}

TEST(L1SdLossTest, MatchesMomentComputation) {
  Rng rng(41);
  const std::vector<double> reps = {0.1, 0.3, 0.5, 0.7, 0.9};
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> p(5), q(5);
    double sp = 0, sq = 0;
    for (int x = 0; x < 5; ++x) {
      sp += p[x] = UniformDouble(rng);
      sq += q[x] = UniformDouble(rng);
    }
    auto sd = [&](const std::vector<double>& m, double s) {
      double e1 = 0, e2 = 0;
      for (int x = 0; x < 5; ++x) {
        e1 += m[x] / s * reps[x];
        e2 += m[x] / s * reps[x] * reps[x];
      }
      return std::sqrt(e2 - e1 * e1);
    };
    const double expected = std::abs(sd(p, sp) - sd(q, sq));
    for (int x = 0; x < 5; ++x) {
      p[x] /= sp;
      q[x] /= sq;
    }
    EXPECT_NEAR(*L1SdLoss(D(p), D(q), reps), expected, 1e-12);
  }
}

TEST(JaccardIndexTest, Examples) {
  EXPECT_EQ(*JaccardIndex(D({0.5, 0.5, 0}), D({0.3, 0.7, 0})), 1.0);
  EXPECT_EQ(*JaccardIndex(D({1, 0}), D({0, 1})), 0.0);
  EXPECT_NEAR(*JaccardIndex(D({0.5, 0.5, 0}), D({0, 0.5, 0.5})), 1.0 / 3, 1e-15);
}

TEST(JaccardIndexTest, ThresholdExcludesNegligibleMass) {
  EXPECT_EQ(*JaccardIndex(D({0.9995, 0.0005}), D({1.0, 0.0})), 1.0);
  EXPECT_EQ(*JaccardIndex(D({0.9995, 0.0005}), D({1.0, 0.0}), 0.0), 0.5);
}

TEST(CosineSimilarityTest, Examples) {
  EXPECT_NEAR(*CosineSimilarity(D({0.2, 0.8}), D({0.2, 0.8})), 1.0, 1e-15);
  EXPECT_EQ(*CosineSimilarity(D({1, 0}), D({0, 1})), 0.0);
  const double dot = 0.75 * 0.5 + 0.25 * 0.5;
  const double norms = std::sqrt(0.75 * 0.75 + 0.25 * 0.25) * std::sqrt(0.5);
  EXPECT_NEAR(*CosineSimilarity(D({0.75, 0.25}), D({0.5, 0.5})), dot / norms, 1e-15);
  EXPECT_NEAR(dot / norms, 0.8944, 1e-4);
}

TEST(CosineSimilarityTest, ZeroVectorIsAnError) {
  EXPECT_FALSE(CosineSimilarity(D({0, 0}), D({0.5, 0.5})).ok());
}

}  // namespace
}  // namespace nvo
