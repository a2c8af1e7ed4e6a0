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

#include "terra/planning.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

#include "terra/rng.h"

namespace terra {

void validate(const PlannerConfig& c) {
  auto fail = [](const std::string& field, const std::string& what) {
    throw std::invalid_argument("planner." + field + " " + what);
  };
  if (c.footprint_cells < 1) fail("footprint_cells", "must be >= 1");
  if (!(c.exploration_bonus > 0.0)) fail("exploration_bonus", "must be > 0");
  if (!(c.speed > 0.0)) fail("speed", "must be > 0");
  if (!(c.measure_time >= 0.0)) fail("measure_time", "must be >= 0");
  if (c.candidate_grid_step < 0) fail("candidate_grid_step", "must be >= 0");
  if (c.horizon < 1) fail("horizon", "must be >= 1");
  if (c.es_offspring < 1) fail("es_offspring", "must be >= 1");
  if (c.es_generations < 0) fail("es_generations", "must be >= 0");
  if (c.mcts_iterations < 1) fail("mcts_iterations", "must be >= 1");
  if (!(c.mcts_uct_constant >= 0.0)) fail("mcts_uct_constant", "must be >= 0");
  if (c.rollout_depth < 0) fail("rollout_depth", "must be >= 0");
  if (!(c.local_step > 0.0)) fail("local_step", "must be > 0");
  if (c.frontier_max_cluster_cells < 0) {
    fail("frontier_max_cluster_cells", "must be >= 0");
  }
}

double cell_score(const MultiLayerMap& map, Cell c, const PlannerConfig& config,
                  const CountRaster* extra_counts) {
  const double u = map.explored(c) ? map.uncertainty(c) : config.exploration_bonus;
  double n = map.train_count(c);
  if (extra_counts != nullptr) n += (*extra_counts)(c.row, c.col);
  return u / (1.0 + n);
}

double info_value(const MultiLayerMap& map, Pose pose, const PlannerConfig& config,
                  const CountRaster* hypothetical_counts) {
  const Footprint fp = footprint_at(map.geometry(), pose, config.footprint_cells);
  double total = 0.0;
  for (int i = 0; i < fp.side; ++i) {
    for (int j = 0; j < fp.side; ++j) {
      total += cell_score(map, fp.cell_at(i, j), config, hypothetical_counts);
    }
  }
  return total;
}

double path_value(const MultiLayerMap& map, std::span<const Pose> path,
                  const PlannerConfig& config,
                  const CountRaster* hypothetical_counts) {
  std::vector<Footprint> fps;
  fps.reserve(path.size());
  for (const Pose& p : path) {
    fps.push_back(footprint_at(map.geometry(), p, config.footprint_cells));
  }
  double total = 0.0;
  for (std::size_t i = 0; i < fps.size(); ++i) {
    const Footprint& fp = fps[i];
    for (int a = 0; a < fp.side; ++a) {
      for (int b = 0; b < fp.side; ++b) {
        const Cell c = fp.cell_at(a, b);
        const double u =
            map.explored(c) ? map.uncertainty(c) : config.exploration_bonus;
        double n = map.train_count(c);
        if (hypothetical_counts != nullptr) n += (*hypothetical_counts)(c.row, c.col);
        for (std::size_t j = 0; j < i; ++j) {
          if (fps[j].contains(c)) n += 1.0;
        }
        total += u / (1.0 + n);
      }
    }
  }
  return total;
}

double travel_cost(Pose from, Pose to, const PlannerConfig& config) {
  return std::hypot(to.x - from.x, to.y - from.y) / config.speed +
         config.measure_time;
}

Pose footprint_center(const GridGeometry& geometry, Cell origin, int side_cells) {
  return {(origin.col + side_cells / 2.0) * geometry.cell_size,
          (origin.row + side_cells / 2.0) * geometry.cell_size};
}

namespace {

// Origins 0, step, 2*step, ... with the last one flush at extent - side.
std::vector<int> origins_along(int extent, int side, int step) {
  std::vector<int> out;
  const int last = extent - side;
  for (int o = 0; o < last; o += step) out.push_back(o);
  out.push_back(last);
  return out;
}

}  // namespace

std::vector<Pose> candidate_grid(const GridGeometry& geometry, int side_cells,
                                 int step) {
  if (step < 1) throw std::invalid_argument("candidate grid step must be >= 1");
  if (side_cells > geometry.rows || side_cells > geometry.cols) {
    throw std::invalid_argument("footprint exceeds world");
  }
  std::vector<Pose> poses;
  for (int r : origins_along(geometry.rows, side_cells, step)) {
    for (int c : origins_along(geometry.cols, side_cells, step)) {
      poses.push_back(footprint_center(geometry, {r, c}, side_cells));
    }
  }
  return poses;
}

Corner nearest_corner(const GridGeometry& geometry, Pose pose) {
  const bool east = pose.x > geometry.width_m() / 2.0;
  const bool north = pose.y > geometry.height_m() / 2.0;
  return static_cast<Corner>((north ? 2 : 0) + (east ? 1 : 0));
}

Path plan_coverage(const GridGeometry& geometry, int side_cells, Corner start) {
  if (side_cells > geometry.rows || side_cells > geometry.cols || side_cells < 1) {
    throw std::invalid_argument("footprint does not fit into the world");
  }
  std::vector<int> rows = origins_along(geometry.rows, side_cells, side_cells);
  std::vector<int> cols = origins_along(geometry.cols, side_cells, side_cells);
  const int s = static_cast<int>(start);
  if (s & 2) std::reverse(rows.begin(), rows.end());
  if (s & 1) std::reverse(cols.begin(), cols.end());
  Path path;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < cols.size(); ++j) {
      const int c = (i % 2 == 0) ? cols[j] : cols[cols.size() - 1 - j];
      path.push_back(footprint_center(geometry, {rows[i], c}, side_cells));
    }
  }
  return path;
}

std::optional<Pose> plan_local(const MultiLayerMap& map, const BudgetState& budget,
                               const PlannerConfig& config, LocalPlannerState& state,
                               const CountRaster* pending_counts) {
  const GridGeometry& g = map.geometry();
  const int f = config.footprint_cells;
  const Pose current = clamp_pose(g, f, budget.current_pose);
  const Footprint fp = footprint_at(g, current, f);
  const Pose center = footprint_center(g, fp.origin, f);

  std::array<double, 8> sum{};
  std::array<int, 8> count{};
  constexpr double kSector = std::numbers::pi / 4.0;
  for (int i = 0; i < f; ++i) {
    for (int j = 0; j < f; ++j) {
      const Cell c = fp.cell_at(i, j);
      const Pose p = cell_center(g, c);
      const double dx = p.x - center.x;
      const double dy = p.y - center.y;
      if (std::abs(dx) < 1e-12 && std::abs(dy) < 1e-12) continue;
      const double angle = std::atan2(dy, dx);
      int sector = static_cast<int>(std::floor((angle + kSector / 2.0) / kSector));
      sector = ((sector % 8) + 8) % 8;
      sum[sector] += cell_score(map, c, config, pending_counts);
      ++count[sector];
    }
  }

  std::array<Pose, 8> target{};
  std::array<bool, 8> usable{};
  double best = -std::numeric_limits<double>::infinity();
  for (int s = 0; s < 8; ++s) {
    target[s] = clamp_pose(g, f,
                           {current.x + config.local_step * std::cos(s * kSector),
                            current.y + config.local_step * std::sin(s * kSector)});
    usable[s] = count[s] > 0 &&
                std::hypot(target[s].x - current.x, target[s].y - current.y) > 1e-9;
    if (usable[s]) best = std::max(best, sum[s] / count[s]);
  }
  int chosen = -1;
  constexpr double kTieTolerance = 1e-12;
  auto tied = [&](int s) {
    return usable[s] && sum[s] / count[s] >= best - kTieTolerance;
  };
  if (state.heading >= 0 && state.heading < 8 && tied(state.heading)) {
    chosen = state.heading;
  } else {
    for (int s = 0; s < 8 && chosen < 0; ++s) {
      if (tied(s)) chosen = s;
    }
  }
  if (chosen < 0) return std::nullopt;
  if (!budget.affords(travel_cost(budget.current_pose, target[chosen], config))) {
    return std::nullopt;
  }
  state.heading = chosen;
  return target[chosen];
}

std::vector<FrontierCluster> detect_frontiers(const MultiLayerMap& map,
                                              int side_cells,
                                              int max_cluster_cells) {
  const GridGeometry& g = map.geometry();
  MaskRaster frontier(g.rows, g.cols, 0);
  constexpr int kD4[4][2] = {{-1, 0}, {1, 0}, {0, -1}, {0, 1}};
  for (int r = 0; r < g.rows; ++r) {
    for (int c = 0; c < g.cols; ++c) {
      if (!map.explored({r, c})) continue;
      for (const auto& d : kD4) {
        const Cell n{r + d[0], c + d[1]};
        if (g.contains(n) && !map.explored(n)) {
          frontier(r, c) = 1;
          break;
        }
      }
    }
  }

  std::vector<FrontierCluster> clusters;
  MaskRaster visited(g.rows, g.cols, 0);
  auto emit = [&](std::vector<Cell> cells) {
    double sr = 0.0, sc = 0.0;
    for (const Cell& c : cells) {
      sr += c.row;
      sc += c.col;
    }
    const double n = static_cast<double>(cells.size());
    const Pose centroid{(sc / n + 0.5) * g.cell_size, (sr / n + 0.5) * g.cell_size};
    clusters.push_back({std::move(cells), clamp_pose(g, side_cells, centroid)});
  };
  for (int r = 0; r < g.rows; ++r) {
    for (int c = 0; c < g.cols; ++c) {
      if (!frontier(r, c) || visited(r, c)) continue;
      std::vector<Cell> order;
      std::deque<Cell> queue{{r, c}};
      visited(r, c) = 1;
      while (!queue.empty()) {
        const Cell cur = queue.front();
        queue.pop_front();
        order.push_back(cur);
        for (int dr = -1; dr <= 1; ++dr) {
          for (int dc = -1; dc <= 1; ++dc) {
            const Cell n{cur.row + dr, cur.col + dc};
            if ((dr == 0 && dc == 0) || !g.contains(n)) continue;
            if (frontier(n.row, n.col) && !visited(n.row, n.col)) {
              visited(n.row, n.col) = 1;
              queue.push_back(n);
            }
          }
        }
      }
      if (max_cluster_cells <= 0) {
        emit(std::move(order));
        continue;
      }
      for (std::size_t start = 0; start < order.size();
           start += static_cast<std::size_t>(max_cluster_cells)) {
        const std::size_t end =
            std::min(order.size(), start + static_cast<std::size_t>(max_cluster_cells));
        emit({order.begin() + static_cast<std::ptrdiff_t>(start),
              order.begin() + static_cast<std::ptrdiff_t>(end)});
      }
    }
  }
  return clusters;
}

namespace {

bool nothing_explored(const MultiLayerMap& map) {
  for (std::uint8_t e : map.explored_mask().values()) {
    if (e) return false;
  }
  return true;
}

// Index of the best affordable grid candidate by raw I, -1 if none.
int best_grid_candidate(const MultiLayerMap& map, const BudgetState& budget,
                        const PlannerConfig& config, std::span<const Pose> grid,
                        const CountRaster* counts) {
  int best = -1;
  double best_value = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!budget.affords(travel_cost(budget.current_pose, grid[i], config))) continue;
    const double v = info_value(map, grid[i], config, counts);
    if (v > best_value) {
      best_value = v;
      best = static_cast<int>(i);
    }
  }
  return best;
}

}  // namespace

std::optional<Pose> plan_frontier(const MultiLayerMap& map, const BudgetState& budget,
                                  const PlannerConfig& config,
                                  const CountRaster* pending_counts) {
  const int split = config.frontier_max_cluster_cells > 0
                        ? config.frontier_max_cluster_cells
                        : config.footprint_cells;
  const auto clusters = detect_frontiers(map, config.footprint_cells, split);
  int best = -1;
  double best_utility = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < clusters.size(); ++i) {
    const Pose& p = clusters[i].centroid;
    const double cost = travel_cost(budget.current_pose, p, config);
    if (!budget.affords(cost)) continue;
    const double value = info_value(map, p, config, pending_counts);
    const double utility =
        config.frontier_cost_normalized ? value / std::max(cost, 1e-12) : value;
    if (utility > best_utility) {
      best_utility = utility;
      best = static_cast<int>(i);
    }
  }
  if (best >= 0) return clusters[best].centroid;

  // Nothing mapped yet: the whole unknown world borders the robot.
  if (nothing_explored(map)) {
    const Pose here = clamp_pose(map.geometry(), config.footprint_cells, budget.current_pose);
    if (budget.affords(travel_cost(budget.current_pose, here, config))) return here;
  }

  const auto grid =
      candidate_grid(map.geometry(), config.footprint_cells, config.grid_step());
  const int fallback = best_grid_candidate(map, budget, config, grid, pending_counts);
  if (fallback < 0) return std::nullopt;
  return grid[fallback];
}

Path greedy_sequence(const MultiLayerMap& map, const BudgetState& budget,
                     const PlannerConfig& config, int length,
                     const CountRaster* pending_counts) {
  const auto grid =
      candidate_grid(map.geometry(), config.footprint_cells, config.grid_step());
  Path seq;
  BudgetState state = budget;
  for (int step = 0; step < length; ++step) {
    int best = -1;
    double best_value = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (!state.affords(travel_cost(state.current_pose, grid[i], config))) continue;
      seq.push_back(grid[i]);
      const double v = path_value(map, seq, config, pending_counts);
      seq.pop_back();
      if (v > best_value) {
        best_value = v;
        best = static_cast<int>(i);
      }
    }
    if (best < 0) break;
    state.spent += travel_cost(state.current_pose, grid[best], config);
    state.current_pose = grid[best];
    seq.push_back(grid[best]);
  }
  return seq;
}

namespace {

// Longest affordable prefix of `path`.
void truncate_to_budget(Path& path, const BudgetState& budget,
                        const PlannerConfig& config) {
  BudgetState state = budget;
  for (std::size_t i = 0; i < path.size(); ++i) {
    const double cost = travel_cost(state.current_pose, path[i], config);
    if (!state.affords(cost)) {
      path.resize(i);
      return;
    }
    state.spent += cost;
    state.current_pose = path[i];
  }
}

}  // namespace

OptimizationResult optimize_sequence(const MultiLayerMap& map,
                                     const BudgetState& budget,
                                     const PlannerConfig& config,
                                     const CountRaster* pending_counts) {
  OptimizationResult result;
  result.initial = greedy_sequence(map, budget, config, config.horizon, pending_counts);
  if (result.initial.empty()) return result;
  result.initial_value = path_value(map, result.initial, config, pending_counts);
  result.best = result.initial;
  result.best_value = result.initial_value;

  const GridGeometry& g = map.geometry();
  Rng rng(derive_seed(config.rng_seed, "planning.optimization"));
  std::normal_distribution<double> normal;
  double sigma = config.footprint_cells * g.cell_size;
  for (int gen = 0; gen < config.es_generations; ++gen) {
    Path best_child;
    double best_child_value = -std::numeric_limits<double>::infinity();
    for (int o = 0; o < config.es_offspring; ++o) {
      Path child = result.best;
      for (Pose& p : child) {
        const double dx = sigma * normal(rng);
        const double dy = sigma * normal(rng);
        p = clamp_pose(g, config.footprint_cells, {p.x + dx, p.y + dy});
      }
      truncate_to_budget(child, budget, config);
      if (child.empty()) continue;
      const double v = path_value(map, child, config, pending_counts);
      if (v > best_child_value) {
        best_child_value = v;
        best_child = std::move(child);
      }
    }
    if (best_child_value > result.best_value) {
      result.best = std::move(best_child);
      result.best_value = best_child_value;
    } else {
      sigma *= 0.5;
    }
  }
  return result;
}

std::optional<Pose> plan_optimization(const MultiLayerMap& map,
                                      const BudgetState& budget,
                                      const PlannerConfig& config,
                                      const CountRaster* pending_counts) {
  const OptimizationResult r = optimize_sequence(map, budget, config, pending_counts);
  if (r.best.empty()) return std::nullopt;
  return r.best.front();
}

namespace {

struct Node {
  int candidate = -1;  // -1 at the root
  int parent = -1;
  int depth = 0;
  BudgetState state;
  std::vector<int> untried;  // affordable candidate ids, ascending
  std::vector<int> children; // node ids, in expansion order
  int visits = 0;
  double mean = 0.0;
};

std::vector<int> affordable(const BudgetState& state, std::span<const Pose> grid,
                            const PlannerConfig& config) {
  std::vector<int> out;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (state.affords(travel_cost(state.current_pose, grid[i], config))) {
      out.push_back(static_cast<int>(i));
    }
  }
  return out;
}

}  // namespace

std::optional<Pose> plan_sampling(const MultiLayerMap& map, const BudgetState& budget,
                                  const PlannerConfig& config,
                                  const CountRaster* pending_counts) {
  const auto grid =
      candidate_grid(map.geometry(), config.footprint_cells, config.grid_step());
  const int horizon = 1 + config.rollout_depth;
  const double normalizer = config.exploration_bonus *
                            static_cast<double>(config.footprint_cells) *
                            config.footprint_cells * horizon;
  Rng rng(derive_seed(config.rng_seed, "planning.sampling"));

  std::vector<Node> nodes;
  nodes.reserve(static_cast<std::size_t>(config.mcts_iterations) + 1);
  nodes.push_back({});
  nodes[0].state = budget;
  nodes[0].untried = affordable(budget, grid, config);
  if (nodes[0].untried.empty()) return std::nullopt;
  // Pop from the back, so keep ascending ids reversed.
  std::reverse(nodes[0].untried.begin(), nodes[0].untried.end());

  auto expand = [&](int parent_id) {
    const int cand = nodes[parent_id].untried.back();
    nodes[parent_id].untried.pop_back();
    Node child;
    child.candidate = cand;
    child.parent = parent_id;
    child.depth = nodes[parent_id].depth + 1;
    child.state = nodes[parent_id].state;
    child.state.spent += travel_cost(child.state.current_pose, grid[cand], config);
    child.state.current_pose = grid[cand];
    if (child.depth < horizon) {
      child.untried = affordable(child.state, grid, config);
      std::reverse(child.untried.begin(), child.untried.end());
    }
    nodes.push_back(std::move(child));
    const int id = static_cast<int>(nodes.size()) - 1;
    nodes[parent_id].children.push_back(id);
    return id;
  };

  Path path;
  for (int it = 0; it < config.mcts_iterations; ++it) {
    int node = 0;
    path.clear();
    // Selection.
    while (nodes[node].untried.empty() && !nodes[node].children.empty()) {
      const Node& parent = nodes[node];
      const double log_n = std::log(static_cast<double>(std::max(1, parent.visits)));
      int best = -1;
      double best_score = -std::numeric_limits<double>::infinity();
      int best_cand = std::numeric_limits<int>::max();
      for (int child_id : parent.children) {
        const Node& ch = nodes[child_id];
        const double score =
            ch.mean + config.mcts_uct_constant *
                          std::sqrt(log_n / static_cast<double>(ch.visits));
        if (score > best_score || (score == best_score && ch.candidate < best_cand)) {
          best_score = score;
          best = child_id;
          best_cand = ch.candidate;
        }
      }
      node = best;
      path.push_back(grid[nodes[node].candidate]);
    }
    // Expansion.
    if (!nodes[node].untried.empty()) {
      node = expand(node);
      path.push_back(grid[nodes[node].candidate]);
    }
    // Rollout.
    BudgetState state = nodes[node].state;
    for (int d = nodes[node].depth; d < horizon; ++d) {
      const auto options = affordable(state, grid, config);
      if (options.empty()) break;
      std::uniform_int_distribution<std::size_t> pick(0, options.size() - 1);
      const Pose next = grid[options[pick(rng)]];
      state.spent += travel_cost(state.current_pose, next, config);
      state.current_pose = next;
      path.push_back(next);
    }
    const double reward = path_value(map, path, config, pending_counts) / normalizer;
    // Backup with incremental means.
    for (int n = node; n >= 0; n = nodes[n].parent) {
      Node& nd = nodes[n];
      ++nd.visits;
      nd.mean += (reward - nd.mean) / nd.visits;
    }
  }

  const Node& root = nodes[0];
  int best = -1;
  for (int child_id : root.children) {
    if (best < 0) {
      best = child_id;
      continue;
    }
    const Node& a = nodes[child_id];
    const Node& b = nodes[best];
    if (a.visits > b.visits ||
        (a.visits == b.visits &&
         (a.mean > b.mean || (a.mean == b.mean && a.candidate < b.candidate)))) {
      best = child_id;
    }
  }
  return grid[nodes[best].candidate];
}

}  // namespace terra
