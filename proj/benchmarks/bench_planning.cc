/* Copyright 2026 The terra-active Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include <benchmark/benchmark.h>

#include <vector>

#include "terra/learner.h"
#include "terra/mapping.h"
#include "terra/mission.h"
#include "terra/planning.h"
#include "terra/world.h"

namespace {

using namespace terra;

struct Scene {
  SemanticGridWorld world;
  SurrogateModel model;
  MultiLayerMap map;
  PlannerConfig planner;
};

// A default-sized world with a seed-set model and a partially explored map.
const Scene& scene() {
  static const Scene s = [] {
    WorldParams params;
    SemanticGridWorld world = generate_world(7, params);
    const auto seed = sample_seed_set(world, 100, 11);
    SurrogateModel model = train(seed, params.num_classes);
    MultiLayerMap map(world.geometry(), params.num_classes);
    PlannerConfig planner;
    for (int i = 0; i < 12; ++i) {
      const Pose p{10.0 + 9.0 * i, 10.0 + 7.0 * (i % 5)};
      const RawImage img = capture(world, p, planner.footprint_cells);
      integrate_observation(map, img, model.predict(img.feature_patch));
    }
    return Scene{std::move(world), std::move(model), std::move(map), planner};
  }();
  return s;
}

void BM_InfoValue(benchmark::State& state) {
  const Scene& s = scene();
  const auto grid = candidate_grid(s.map.geometry(), s.planner.footprint_cells,
                                   s.planner.grid_step());
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(info_value(s.map, grid[i++ % grid.size()], s.planner));
  }
}
BENCHMARK(BM_InfoValue);

void BM_PredictFootprint(benchmark::State& state) {
  const Scene& s = scene();
  const int f = static_cast<int>(state.range(0));
  const RawImage img = capture(s.world, {64.0, 64.0}, f);
  for (auto _ : state) {
    benchmark::DoNotOptimize(s.model.predict(img.feature_patch));
  }
  state.SetItemsProcessed(state.iterations() * f * f);
}
BENCHMARK(BM_PredictFootprint)->Arg(20)->Arg(64);

void BM_UpdateSemantic(benchmark::State& state) {
  const Scene& s = scene();
  const RawImage img = capture(s.world, {64.0, 64.0}, s.planner.footprint_cells);
  const Prediction pred = s.model.predict(img.feature_patch);
  const auto cells = footprint_cells(img.footprint());
  MultiLayerMap map(s.world.geometry(), s.world.num_classes());
  for (auto _ : state) {
    map.update_semantic(cells, pred.probs);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(cells.size()));
}
BENCHMARK(BM_UpdateSemantic);

void BM_Train(benchmark::State& state) {
  const Scene& s = scene();
  const auto pixels = sample_seed_set(s.world, static_cast<int>(state.range(0)), 3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(train(pixels, s.world.num_classes()));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Train)->Arg(1000)->Arg(10000);

void BM_PlanFrontier(benchmark::State& state) {
  const Scene& s = scene();
  const BudgetState budget{1800.0, 0.0, {64.0, 64.0}};
  for (auto _ : state) {
    benchmark::DoNotOptimize(plan_frontier(s.map, budget, s.planner));
  }
}
BENCHMARK(BM_PlanFrontier)->Unit(benchmark::kMicrosecond);

void BM_PlanOptimization(benchmark::State& state) {
  const Scene& s = scene();
  const BudgetState budget{1800.0, 0.0, {64.0, 64.0}};
  for (auto _ : state) {
    benchmark::DoNotOptimize(plan_optimization(s.map, budget, s.planner));
  }
}
BENCHMARK(BM_PlanOptimization)->Unit(benchmark::kMillisecond);

void BM_PlanSampling(benchmark::State& state) {
  const Scene& s = scene();
  PlannerConfig config = s.planner;
  config.mcts_iterations = static_cast<int>(state.range(0));
  const BudgetState budget{1800.0, 0.0, {64.0, 64.0}};
  for (auto _ : state) {
    benchmark::DoNotOptimize(plan_sampling(s.map, budget, config));
  }
}
BENCHMARK(BM_PlanSampling)->Arg(100)->Arg(300)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
