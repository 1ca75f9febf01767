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

#ifndef NVO_EVOLUTION_H_
#define NVO_EVOLUTION_H_

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "nvo/game.h"
#include "nvo/random.h"

namespace nvo {

struct GaConfig {
  int population = 500;
  int mating_parents = 10;
  int crossover_points = 2;
  double mutation_rate = 0.05;
  int elites = 5;
  // Required: there is no sensible default run length.
  int generations = 0;
  uint64_t seed = 0;
  int stall_generations = 50;
  AccountingMode mode = AccountingMode::kExact;
};

absl::Status ValidateGaConfig(const GaConfig& config);

struct Chromosome {
  std::vector<int> genes;
  Payoff fitness;
};

using Population = std::vector<Chromosome>;
using FitnessFunction = std::function<Payoff(std::span<const int>)>;

// Indices of `population` ordered by decreasing fitness; equal fitness keeps
// the original order.
std::vector<int> RankByFitness(const Population& population);

// One steady-state generation.
//
// The top `elites` chromosomes are carried over unchanged, followed by
// population - elites offspring bred from the top `mating_parents`. Random
// draws are consumed in a fixed order:
//   1. selection: two UniformIndex(mating_parents) draws per offspring;
//   2. crossover: for each offspring, min(crossover_points, L - 1) distinct
//      cut positions in [1, L - 1] by partial Fisher-Yates over that range;
//   3. mutation: for each offspring and gene, one UniformDouble; below
//      mutation_rate, one UniformIndex(num_actions - 1) picks another action.
// Offspring take genes from the first parent up to the first cut, then
// alternate parents at each cut.
Population NextGeneration(const Population& current, const GaConfig& config,
                          int num_actions, Rng& rng,
                          const FitnessFunction& fitness);

// Genetic search over assignments with the common payoff as fitness. The
// initial population is uniform random, except that `seeded` chromosomes
// replace its first members. Returns the best chromosome ever seen; stops
// after `generations` or when the best fitness has not improved for
// stall_generations consecutive generations.
absl::StatusOr<SolveResult> GaSolve(const BinnedDataset& binned,
                                    const ActionSet& actions, double epsilon,
                                    const GaConfig& config,
                                    std::span<const std::vector<int>> seeded = {});

}  // namespace nvo

#endif  // NVO_EVOLUTION_H_
