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

#ifndef TERRA_PLANNING_H_
#define TERRA_PLANNING_H_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "terra/grid.h"
#include "terra/mapping.h"

namespace terra {

struct PlannerConfig {
  int footprint_cells = 20;
  double exploration_bonus = 1.0;  // u(v) for unexplored cells
  double speed = 1.0;              // m/s
  double measure_time = 2.0;       // s per image
  int candidate_grid_step = 0;     // cells; 0 = half the footprint
  int horizon = 3;                 // poses optimised by the ES planner
  int es_offspring = 16;
  int es_generations = 50;
  int mcts_iterations = 300;
  double mcts_uct_constant = 0.5;
  int rollout_depth = 2;
  double local_step = 10.0;              // m
  bool frontier_cost_normalized = true;  // rank frontiers by I / cost
  int frontier_max_cluster_cells = 0;    // split clusters; 0 = footprint side
  std::uint64_t rng_seed = 0;

  int grid_step() const {
    return candidate_grid_step > 0 ? candidate_grid_step
                                   : std::max(1, footprint_cells / 2);
  }

  friend bool operator==(const PlannerConfig&, const PlannerConfig&) = default;
};

// Throws std::invalid_argument naming the offending field.
void validate(const PlannerConfig& config);

struct BudgetState {
  double budget_total = 0.0;
  double spent = 0.0;
  Pose current_pose;

  double remaining() const { return budget_total - spent; }
  // spent + cost <= budget_total, the admissibility test used everywhere.
  bool affords(double cost) const { return spent + cost <= budget_total; }
};

using Path = std::vector<Pose>;

// Per-cell information weight u(v) / (1 + M_T(v) + extra(v)), where u is the
// mapped uncertainty on explored cells and the exploration bonus elsewhere.
double cell_score(const MultiLayerMap& map, Cell c, const PlannerConfig& config,
                  const CountRaster* extra_counts = nullptr);

// I(p): sum of cell_score over the footprint of `pose`.
// `hypothetical_counts` (optional, map-sized) adds to M_T, e.g. for images
// already taken in the current mission.
double info_value(const MultiLayerMap& map, Pose pose, const PlannerConfig& config,
                  const CountRaster* hypothetical_counts = nullptr);

// I(psi) = sum_i I(p_i) where every earlier pose of the path counts as one
// more hypothetical training occurrence for the cells it covers.
double path_value(const MultiLayerMap& map, std::span<const Pose> path,
                  const PlannerConfig& config,
                  const CountRaster* hypothetical_counts = nullptr);

// Euclidean flight time plus the per-image measurement time.
double travel_cost(Pose from, Pose to, const PlannerConfig& config);

// Pose at the geometric center of the footprint with the given origin.
Pose footprint_center(const GridGeometry& geometry, Cell origin, int side_cells);

// Footprint-center poses with origins every `step` cells, the last row/column
// flush with the world border. Row-major; the index is the candidate id.
std::vector<Pose> candidate_grid(const GridGeometry& geometry, int side_cells,
                                 int step);

enum class Corner { kSouthWest = 0, kSouthEast = 1, kNorthWest = 2, kNorthEast = 3 };

// Corner of the world nearest to `pose`.
Corner nearest_corner(const GridGeometry& geometry, Pose pose);

// Boustrophedon lawnmower: rows one footprint apart, serpentine order starting
// from `start`, last row/column flush with the border.
Path plan_coverage(const GridGeometry& geometry, int side_cells, Corner start);

// Heading state of the local planner: sector index in [0, 8), -1 if none.
struct LocalPlannerState {
  int heading = -1;
};

// Moves local_step meters toward the one of 8 sectors of the current footprint
// with the highest mean cell score. Ties keep the previous heading, else the
// lowest sector index. Sectors whose move would be cancelled by clamping are
// skipped. Returns nullopt when the move is unaffordable.
std::optional<Pose> plan_local(const MultiLayerMap& map, const BudgetState& budget,
                               const PlannerConfig& config, LocalPlannerState& state,
                               const CountRaster* pending_counts = nullptr);

struct FrontierCluster {
  std::vector<Cell> cells;
  Pose centroid;  // clamped to the valid pose region
};

// Frontier cells are explored cells 4-adjacent to an unexplored one; clusters
// are their 8-connected components, discovered in row-major order. With
// max_cluster_cells > 0 each component is split along its BFS order into
// pieces of at most that many cells.
std::vector<FrontierCluster> detect_frontiers(const MultiLayerMap& map,
                                              int side_cells,
                                              int max_cluster_cells = 0);

// Best affordable frontier centroid by I(p) / travel_cost (or raw I); falls
// back to the current pose on an empty map, else to the best affordable grid
// candidate by raw I; nullopt ends the mission.
std::optional<Pose> plan_frontier(const MultiLayerMap& map, const BudgetState& budget,
                                  const PlannerConfig& config,
                                  const CountRaster* pending_counts = nullptr);

// Greedy affordable sequence over the candidate grid, `length` poses at most.
Path greedy_sequence(const MultiLayerMap& map, const BudgetState& budget,
                     const PlannerConfig& config, int length,
                     const CountRaster* pending_counts = nullptr);

// Receding-horizon (1+lambda) evolution strategy over pose sequences of
// `horizon` poses, seeded with the greedy sequence. Returns the first pose of
// the best sequence found.
std::optional<Pose> plan_optimization(const MultiLayerMap& map,
                                      const BudgetState& budget,
                                      const PlannerConfig& config,
                                      const CountRaster* pending_counts = nullptr);

// Objective of the best sequence found by the ES (for tests and benches).
struct OptimizationResult {
  Path best;
  double best_value = 0.0;
  Path initial;
  double initial_value = 0.0;
};
OptimizationResult optimize_sequence(const MultiLayerMap& map,
                                     const BudgetState& budget,
                                     const PlannerConfig& config,
                                     const CountRaster* pending_counts = nullptr);

// UCT Monte Carlo tree search over the affordable candidate grid, looking
// 1 + rollout_depth poses ahead. Returns the most visited first-level pose.
std::optional<Pose> plan_sampling(const MultiLayerMap& map, const BudgetState& budget,
                                  const PlannerConfig& config,
                                  const CountRaster* pending_counts = nullptr);

}  // namespace terra

#endif  // TERRA_PLANNING_H_
