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

#include "terra/mission.h"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <mutex>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>

#include "terra/raster_io.h"
#include "terra/rng.h"

namespace terra {

std::string_view to_string(SupervisionMode mode) {
  switch (mode) {
    case SupervisionMode::kFull: return "full";
    case SupervisionMode::kSemi: return "semi";
    case SupervisionMode::kSelf: return "self";
  }
  return "unknown";
}

std::string_view to_string(PlannerKind kind) {
  switch (kind) {
    case PlannerKind::kCoverage: return "coverage";
    case PlannerKind::kLocal: return "local";
    case PlannerKind::kFrontier: return "frontier";
    case PlannerKind::kOptimization: return "optimization";
    case PlannerKind::kSampling: return "sampling";
  }
  return "unknown";
}

SupervisionMode parse_supervision_mode(std::string_view name) {
  for (auto m : {SupervisionMode::kFull, SupervisionMode::kSemi,
                 SupervisionMode::kSelf}) {
    if (name == to_string(m)) return m;
  }
  throw std::invalid_argument("unknown supervision mode '" + std::string(name) +
                              "' (expected full, semi or self)");
}

PlannerKind parse_planner_kind(std::string_view name) {
  for (auto k : kAllPlanners) {
    if (name == to_string(k)) return k;
  }
  throw std::invalid_argument(
      "unknown planner '" + std::string(name) +
      "' (expected coverage, local, frontier, optimization or sampling)");
}

void validate(const ExperimentConfig& c) {
  auto fail = [](const std::string& field, const std::string& what) {
    throw std::invalid_argument(field + " " + what);
  };
  if (c.num_missions < 1) fail("num_missions", "must be >= 1");
  if (!(c.budget_seconds >= 0.0)) fail("budget_seconds", "must be >= 0");
  if (c.start_poses.empty()) fail("start_poses", "must hold at least one pose");
  if (c.seeds.empty()) fail("seeds", "must hold at least one seed");
  if (c.n_seed < 1) fail("n_seed", "must be >= 1");
  if (!(c.pseudo_weight > 0.0)) fail("pseudo_weight", "must be > 0");
  if (!(c.human_weight > 0.0)) fail("human_weight", "must be > 0");
  if (c.labelling.alpha < 1) fail("labelling.alpha", "must be >= 1");
  if (!(c.labelling.beta_percent > 0.0 && c.labelling.beta_percent <= 100.0)) {
    fail("labelling.beta_percent", "must be in (0, 100]");
  }
  if (c.labelling.impurity_radius < 1) fail("labelling.impurity_radius", "must be >= 1");
  validate(c.planner);
  // Every step must cost something or a mission might never end.
  if (!(c.planner.measure_time > 0.0)) fail("planner.measure_time", "must be > 0");
  if (!(c.train.variance_floor > 0.0)) fail("train.variance_floor", "must be > 0");
  if (!(c.train.prior_smoothing >= 0.0)) fail("train.prior_smoothing", "must be >= 0");
  if (c.label_raster.empty()) {
    if (c.world.width_cells < 16) fail("world.width_cells", "must be >= 16");
    if (c.world.height_cells < 16) fail("world.height_cells", "must be >= 16");
    if (c.planner.footprint_cells > std::min(c.world.width_cells, c.world.height_cells)) {
      fail("planner.footprint_cells", "exceeds the world dimensions");
    }
  }
  if (c.world.num_classes < 2) fail("world.num_classes", "must be >= 2");
  if (c.world.blob_scale < 1) fail("world.blob_scale", "must be >= 1");
  if (c.world.feature_dim < 1) fail("world.feature_dim", "must be >= 1");
  if (!(c.world.class_separation > 0.0)) fail("world.class_separation", "must be > 0");
  if (!(c.world.noise_sigma >= 0.0)) fail("world.noise_sigma", "must be >= 0");
  if (!(c.world.cell_size > 0.0)) fail("world.cell_size", "must be > 0");
  if (c.labelling.alpha > c.planner.footprint_cells * c.planner.footprint_cells) {
    fail("labelling.alpha", "exceeds the pixels of one image");
  }
}

std::vector<LabelledPixel> TrainingSet::all() const {
  std::vector<LabelledPixel> out;
  out.reserve(seed.size() + human.size() + pseudo.size());
  out.insert(out.end(), seed.begin(), seed.end());
  out.insert(out.end(), human.begin(), human.end());
  out.insert(out.end(), pseudo.begin(), pseudo.end());
  return out;
}

namespace {

void add_counts(CountRaster& counts, const Footprint& fp) {
  for (int i = 0; i < fp.side; ++i) {
    for (int j = 0; j < fp.side; ++j) {
      const Cell c = fp.cell_at(i, j);
      ++counts(c.row, c.col);
    }
  }
}

LabelledPixel make_pixel(const RawImage& image, int i, int j, int label,
                         double weight, LabelSource source) {
  auto f = image.feature_patch.at(i, j);
  return {image.footprint().cell_at(i, j), std::vector<double>(f.begin(), f.end()),
          label, weight, source};
}

}  // namespace

MissionOutput run_mission(const SemanticGridWorld& world, MultiLayerMap& map,
                          const SurrogateModel& model, PlannerKind kind,
                          const PlannerConfig& planner_config, BudgetState& budget,
                          std::vector<StoredObservation>& replay, int mission_index,
                          PlannerState& planner_state) {
  MissionOutput out;
  const GridGeometry& g = world.geometry();
  const int f = planner_config.footprint_cells;
  const double spent_at_start = budget.spent;
  // Footprints captured during this mission; they will be labelled after it,
  // so planners treat them as additional training occurrences.
  CountRaster pending(g.rows, g.cols, 0);

  if (kind == PlannerKind::kCoverage && planner_state.coverage_path.empty()) {
    planner_state.coverage_path =
        plan_coverage(g, f, nearest_corner(g, budget.current_pose));
  }

  for (int step = 0;; ++step) {
    PlannerConfig cfg = planner_config;
    cfg.rng_seed = derive_seed(planner_config.rng_seed, "mission.step",
                               static_cast<std::uint64_t>(mission_index) * 1000003ULL +
                                   static_cast<std::uint64_t>(step));
    std::optional<Pose> next;
    switch (kind) {
      case PlannerKind::kCoverage: {
        const Path& path = planner_state.coverage_path;
        const Pose p = path[planner_state.coverage_cursor % path.size()];
        if (budget.affords(travel_cost(budget.current_pose, p, cfg))) {
          next = p;
          ++planner_state.coverage_cursor;
        }
        break;
      }
      case PlannerKind::kLocal:
        next = plan_local(map, budget, cfg, planner_state.local, &pending);
        break;
      case PlannerKind::kFrontier:
        next = plan_frontier(map, budget, cfg, &pending);
        break;
      case PlannerKind::kOptimization:
        next = plan_optimization(map, budget, cfg, &pending);
        break;
      case PlannerKind::kSampling:
        next = plan_sampling(map, budget, cfg, &pending);
        break;
    }
    if (!next) break;
    const double cost = travel_cost(budget.current_pose, *next, cfg);
    if (!budget.affords(cost)) break;
    budget.spent += cost;
    budget.current_pose = *next;

    auto image = std::make_shared<const RawImage>(capture(world, *next, f));
    integrate_observation(map, *image, model.predict(image->feature_patch));
    add_counts(pending, image->footprint());
    replay.push_back({*next, image, mission_index});
    out.new_images.push_back(replay.size() - 1);
    out.ledger.push_back(
        {mission_index, step, *next, cost, budget.spent, budget.budget_total});
  }
  out.spent = budget.spent - spent_at_start;
  return out;
}

void post_mission_update(std::span<const std::size_t> new_images,
                         std::span<const StoredObservation> replay,
                         MultiLayerMap& map, const SurrogateModel& model,
                         TrainingSet& training, SupervisionMode mode,
                         const LabellingConfig& labelling, int mission_index,
                         double human_weight, double pseudo_weight) {
  for (std::size_t idx : new_images) {
    const RawImage& image = *replay[idx].image;
    const int f = image.side_cells;
    switch (mode) {
      case SupervisionMode::kFull:
        for (int i = 0; i < f; ++i) {
          for (int j = 0; j < f; ++j) {
            training.human.push_back(make_pixel(image, i, j, image.gt_patch(i, j),
                                                human_weight, LabelSource::kHuman));
          }
        }
        break;
      case SupervisionMode::kSemi: {
        const std::vector<int> flat = model.predict(image.feature_patch).labels();
        LabelRaster predicted(f, f);
        std::copy(flat.begin(), flat.end(), predicted.values().begin());
        LabellingConfig cfg = labelling;
        cfg.rng_seed = derive_seed(labelling.rng_seed, "labelling.human", idx);
        for (const Cell& px : select_human_pixels(predicted, cfg)) {
          training.human.push_back(make_pixel(image, px.row, px.col,
                                              image.gt_patch(px.row, px.col),
                                              human_weight, LabelSource::kHuman));
        }
        break;
      }
      case SupervisionMode::kSelf:
        continue;
    }
    map.increment_counts(footprint_cells(image.footprint()));
    ++training.human_images;
  }

  if (mode == SupervisionMode::kFull) return;
  training.pseudo.clear();
  for (std::size_t idx = 0; idx < replay.size(); ++idx) {
    const StoredObservation& obs = replay[idx];
    const PseudoPatch patch =
        render_pseudo_patch(map, obs.pose, obs.image->side_cells);
    LabellingConfig cfg = labelling;
    cfg.rng_seed = derive_seed(labelling.rng_seed, "labelling.pseudo",
                               static_cast<std::uint64_t>(mission_index) * 1000003ULL + idx);
    for (const Cell& px : select_pseudo_pixels(patch.uncertainty, patch.valid, cfg)) {
      training.pseudo.push_back(make_pixel(*obs.image, px.row, px.col,
                                           patch.labels(px.row, px.col), pseudo_weight,
                                           LabelSource::kPseudo));
    }
  }
}

RetrainResult retrain_and_recompute(const TrainingSet& training,
                                    std::span<const StoredObservation> replay,
                                    const MultiLayerMap& previous_map,
                                    const TrainOptions& options) {
  const std::vector<LabelledPixel> pixels = training.all();
  SurrogateModel model = train(pixels, previous_map.num_classes(), options);
  MultiLayerMap map = recompute(replay, model, previous_map.geometry(),
                                previous_map.num_classes(), previous_map.train_counts());
  return {std::move(model), std::move(map)};
}

std::vector<LabelledPixel> sample_seed_set(const SemanticGridWorld& world, int n,
                                           std::uint64_t seed, double weight) {
  const GridGeometry& g = world.geometry();
  const std::size_t total = g.num_cells();
  if (n < 1 || static_cast<std::size_t>(n) > total) {
    throw std::invalid_argument("seed set size must be in [1, cells]");
  }
  Rng rng(seed);
  std::vector<std::size_t> chosen;
  std::vector<std::uint8_t> taken(total, 0);
  std::uniform_int_distribution<std::size_t> pick(0, total - 1);
  while (chosen.size() < static_cast<std::size_t>(n)) {
    const std::size_t i = pick(rng);
    if (taken[i]) continue;
    taken[i] = 1;
    chosen.push_back(i);
  }
  std::vector<LabelledPixel> out;
  out.reserve(chosen.size());
  for (std::size_t i : chosen) {
    const Cell c{static_cast<int>(i / g.cols), static_cast<int>(i % g.cols)};
    auto f = world.features().at(c.row, c.col);
    out.push_back({c, std::vector<double>(f.begin(), f.end()),
                   world.labels()(c.row, c.col), weight, LabelSource::kSeed});
  }
  return out;
}

std::string arm_id(const ArmResult& arm) {
  char buf[96];
  std::snprintf(buf, sizeof(buf), "arm%02d_start%d_seed%llu", arm.arm_index,
                arm.start_index, static_cast<unsigned long long>(arm.seed));
  return buf;
}

SemanticGridWorld build_world(const ExperimentConfig& config, std::uint64_t seed) {
  const std::uint64_t world_seed = derive_seed(seed, "world");
  if (config.label_raster.empty()) return generate_world(world_seed, config.world);
  LabelRaster labels = load_label_raster(config.label_raster, config.world.num_classes);
  return world_from_labels(world_seed, std::move(labels), config.world.num_classes,
                           config.world);
}

ArmResult run_arm(const ExperimentConfig& config, int start_index, int seed_index) {
  validate(config);
  const std::uint64_t seed = config.seeds.at(static_cast<std::size_t>(seed_index));
  const int arm_index =
      start_index * static_cast<int>(config.seeds.size()) + seed_index;
  const SemanticGridWorld world = build_world(config, seed);
  if (config.planner.footprint_cells > world.width_cells() ||
      config.planner.footprint_cells > world.height_cells()) {
    throw std::invalid_argument("planner.footprint_cells exceeds the world dimensions");
  }
  const Pose start = clamp_pose(world.geometry(), config.planner.footprint_cells,
                                config.start_poses.at(static_cast<std::size_t>(start_index)));

  ArmResult arm;
  arm.arm_index = arm_index;
  arm.start_index = start_index;
  arm.seed = seed;
  arm.planner = config.planner_kind;
  arm.mode = config.mode;

  TrainingSet training;
  // Shared by every arm with this seed, so planners see the same checkpoint.
  training.seed = sample_seed_set(world, config.n_seed, derive_seed(seed, "seed_set"),
                                  config.human_weight);
  SurrogateModel model = train(training.all(), world.num_classes(), config.train);
  const SegmentationScores initial = evaluate(model, world);
  arm.initial_miou = initial.miou;
  arm.initial_accuracy = initial.accuracy;

  MultiLayerMap map(world.geometry(), world.num_classes());
  std::vector<StoredObservation> replay;
  PlannerState planner_state;
  PlannerConfig planner = config.planner;
  planner.rng_seed = derive_seed(seed, "planning", static_cast<std::uint64_t>(arm_index));
  LabellingConfig labelling = config.labelling;
  labelling.rng_seed =
      derive_seed(seed, "labelling", static_cast<std::uint64_t>(arm_index));

  for (int m = 1; m <= config.num_missions; ++m) {
    BudgetState budget{config.budget_seconds, 0.0, start};
    MissionOutput mission = run_mission(world, map, model, config.planner_kind, planner,
                                        budget, replay, m, planner_state);
    post_mission_update(mission.new_images, replay, map, model, training,
                        config.mode, labelling, m, config.human_weight,
                        config.pseudo_weight);
    RetrainResult retrained = retrain_and_recompute(training, replay, map, config.train);
    model = std::move(retrained.model);
    map = std::move(retrained.map);
    const SegmentationScores scores = evaluate(model, world);

    MissionRecord rec;
    rec.mission = m;
    rec.images = replay.size();
    rec.human_pixels = training.human_pixel_count();
    rec.pseudo_pixels = training.pseudo.size();
    rec.budget_spent = mission.spent;
    rec.miou = scores.miou;
    rec.accuracy = scores.accuracy;
    arm.records.push_back(rec);
    arm.ledger.insert(arm.ledger.end(), mission.ledger.begin(), mission.ledger.end());
  }
  arm.final_map = std::move(map);
  return arm;
}

std::vector<ArmResult> run_experiment(const ExperimentConfig& config, int jobs) {
  validate(config);
  const int num_starts = static_cast<int>(config.start_poses.size());
  const int num_seeds = static_cast<int>(config.seeds.size());
  const int total = num_starts * num_seeds;
  std::vector<ArmResult> results(static_cast<std::size_t>(total));
  if (jobs <= 1) {
    for (int a = 0; a < total; ++a) {
      results[a] = run_arm(config, a / num_seeds, a % num_seeds);
    }
    return results;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (int a = next++; a < total; a = next++) {
      try {
        results[a] = run_arm(config, a / num_seeds, a % num_seeds);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> threads;
  for (int t = 0; t < std::min(jobs, total); ++t) threads.emplace_back(worker);
  for (auto& t : threads) t.join();
  if (error) std::rethrow_exception(error);
  return results;
}

}  // namespace terra
