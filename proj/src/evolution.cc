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

#include "nvo/evolution.h"

#include <algorithm>
#include <numeric>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"

namespace nvo {

absl::Status ValidateGaConfig(const GaConfig& config) {
  if (config.population < 2) {
    return absl::InvalidArgumentError("population must be at least 2");
  }
  if (config.mating_parents < 1 || config.mating_parents > config.population) {
    return absl::InvalidArgumentError("mating_parents must be in [1, population]");
  }
  if (config.elites < 0 || config.elites > config.population) {
    return absl::InvalidArgumentError("elites must be in [0, population]");
  }
  if (config.crossover_points < 1) {
    return absl::InvalidArgumentError("crossover_points must be positive");
  }
  if (!(config.mutation_rate >= 0.0 && config.mutation_rate <= 1.0)) {
    return absl::InvalidArgumentError("mutation_rate must be in [0, 1]");
  }
  if (config.generations < 0) {
    return absl::InvalidArgumentError("generations must be non-negative");
  }
  if (config.stall_generations < 1) {
    return absl::InvalidArgumentError("stall_generations must be positive");
  }
  return absl::OkStatus();
}

std::vector<int> RankByFitness(const Population& population) {
  std::vector<int> order(population.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return population[a].fitness.total > population[b].fitness.total;
  });
  return order;
}

Population NextGeneration(const Population& current, const GaConfig& config,
                          int num_actions, Rng& rng,
                          const FitnessFunction& fitness) {
  const std::vector<int> ranked = RankByFitness(current);
  const int size = static_cast<int>(current.size());
  const int elites = std::min(config.elites, size);
  const int parents = std::min(config.mating_parents, size);
  const int num_offspring = size - elites;

  Population next;
  next.reserve(size);
  for (int e = 0; e < elites; ++e) next.push_back(current[ranked[e]]);
  if (num_offspring == 0) return next;

  std::vector<std::pair<int, int>> pairs(num_offspring);
  for (auto& [first, second] : pairs) {
    first = ranked[UniformIndex(rng, parents)];
    second = ranked[UniformIndex(rng, parents)];
  }

  const int length = static_cast<int>(current.front().genes.size());
  const int num_cuts = std::min(config.crossover_points, std::max(length - 1, 0));
  std::vector<int> positions(std::max(length - 1, 0));
  std::vector<std::vector<int>> children(num_offspring);
  for (int c = 0; c < num_offspring; ++c) {
    std::iota(positions.begin(), positions.end(), 1);
    for (int t = 0; t < num_cuts; ++t) {
      const auto j = t + static_cast<int>(UniformIndex(rng, positions.size() - t));
      std::swap(positions[t], positions[j]);
    }
    std::vector<int> cuts(positions.begin(), positions.begin() + num_cuts);
    std::sort(cuts.begin(), cuts.end());

    const std::vector<int>& a = current[pairs[c].first].genes;
    const std::vector<int>& b = current[pairs[c].second].genes;
    std::vector<int>& child = children[c];
    child.resize(length);
    bool from_first = true;
    size_t next_cut = 0;
    for (int g = 0; g < length; ++g) {
      while (next_cut < cuts.size() && cuts[next_cut] == g) {
        from_first = !from_first;
        ++next_cut;
      }
      child[g] = from_first ? a[g] : b[g];
    }
  }

  for (auto& child : children) {
    for (int& gene : child) {
      const double u = UniformDouble(rng);
      if (u < config.mutation_rate && num_actions > 1) {
        const int other = static_cast<int>(UniformIndex(rng, num_actions - 1));
        gene = other < gene ? other : other + 1;
      }
    }
  }

  for (auto& child : children) {
    Payoff f = fitness(child);
    next.push_back({std::move(child), f});
  }
  return next;
}

absl::StatusOr<SolveResult> GaSolve(const BinnedDataset& binned,
                                    const ActionSet& actions, double epsilon,
                                    const GaConfig& config,
                                    std::span<const std::vector<int>> seeded) {
  if (absl::Status s = ValidateGaConfig(config); !s.ok()) return s;
  absl::StatusOr<PayoffEvaluator> evaluator =
      PayoffEvaluator::Create(binned, actions, epsilon, {.mode = config.mode});
  if (!evaluator.ok()) return evaluator.status();
  if (static_cast<int>(seeded.size()) > config.population) {
    return absl::InvalidArgumentError("more seeded chromosomes than population");
  }

  const int64_t n = binned.size();
  const int num_actions = actions.size();
  FitnessFunction fitness = [&](std::span<const int> genes) {
    return evaluator->EvaluateProfile(evaluator->CountProfile(genes), genes);
  };

  Rng rng(config.seed);
  Population population(config.population);
  for (int p = 0; p < config.population; ++p) {
    std::vector<int>& genes = population[p].genes;
    genes.resize(n);
    for (int& g : genes) g = static_cast<int>(UniformIndex(rng, num_actions));
  }
  for (size_t s = 0; s < seeded.size(); ++s) {
    if (static_cast<int64_t>(seeded[s].size()) != n) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "seeded chromosome %d has %d genes, expected %d", s, seeded[s].size(), n));
    }
    for (int g : seeded[s]) {
      if (g < 0 || g >= num_actions) {
        return absl::OutOfRangeError(
            absl::StrFormat("seeded chromosome %d has gene %d outside [0, %d)", s,
                            g, num_actions));
      }
    }
    population[s].genes = seeded[s];
  }
  for (Chromosome& c : population) c.fitness = fitness(c.genes);

  SolveResult result;
  Chromosome best = population[RankByFitness(population).front()];
  result.trace.initial = best.fitness;
  auto record = [&](int64_t generation) {
    result.trace.records.push_back({.step = generation,
                                    .payoff = best.fitness.total,
                                    .p_e = best.fitness.p_e,
                                    .p_u = best.fitness.p_u});
  };
  record(0);

  result.trace.stop = StopReason::kGenerationLimit;
  int stalled = 0;
  for (int generation = 1; generation <= config.generations; ++generation) {
    population = NextGeneration(population, config, num_actions, rng, fitness);
    const Chromosome& leader = population[RankByFitness(population).front()];
    if (leader.fitness.total > best.fitness.total) {
      best = leader;
      stalled = 0;
    } else {
      ++stalled;
    }
    result.trace.iterations = generation;
    record(generation);
    if (stalled >= config.stall_generations) {
      result.trace.stop = StopReason::kStalled;
      break;
    }
  }

  result.plan.actions = actions;
  result.plan.assignment = std::move(best.genes);
  result.payoff = best.fitness;
  return result;
}

}  // namespace nvo
