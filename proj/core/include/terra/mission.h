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

#ifndef TERRA_MISSION_H_
#define TERRA_MISSION_H_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "terra/grid.h"
#include "terra/labelling.h"
#include "terra/learner.h"
#include "terra/mapping.h"
#include "terra/planning.h"
#include "terra/world.h"

namespace terra {

enum class SupervisionMode { kFull, kSemi, kSelf };
enum class PlannerKind { kCoverage, kLocal, kFrontier, kOptimization, kSampling };

inline constexpr PlannerKind kAllPlanners[] = {
    PlannerKind::kCoverage, PlannerKind::kLocal, PlannerKind::kFrontier,
    PlannerKind::kOptimization, PlannerKind::kSampling};

std::string_view to_string(SupervisionMode mode);
std::string_view to_string(PlannerKind kind);
// Throw std::invalid_argument on unknown names.
SupervisionMode parse_supervision_mode(std::string_view name);
PlannerKind parse_planner_kind(std::string_view name);

struct ExperimentConfig {
  int num_missions = 10;
  double budget_seconds = 1800.0;
  SupervisionMode mode = SupervisionMode::kSemi;
  PlannerKind planner_kind = PlannerKind::kFrontier;
  std::vector<Pose> start_poses = {{64.0, 64.0}};
  std::vector<std::uint64_t> seeds = {1, 2, 3};
  WorldParams world;
  // Optional ground-truth raster (PGM or CSV); replaces the synthetic labels.
  std::string label_raster;
  LabellingConfig labelling;
  PlannerConfig planner;
  TrainOptions train;
  int n_seed = 100;           // random human-labelled cells in every retraining
  double pseudo_weight = 1.0;
  double human_weight = 1.0;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

// Throws std::invalid_argument naming the offending field.
void validate(const ExperimentConfig& config);

// Cumulative labelled pixels of one arm.
struct TrainingSet {
  std::vector<LabelledPixel> seed;
  std::vector<LabelledPixel> human;   // grows across missions
  std::vector<LabelledPixel> pseudo;  // re-derived after every mission
  std::size_t human_images = 0;

  std::vector<LabelledPixel> all() const;
  std::size_t human_pixel_count() const { return seed.size() + human.size(); }
};

// One executed step of a mission, for auditing the budget constraint.
struct BudgetEntry {
  int mission = 0;
  int step = 0;
  Pose pose;
  double cost = 0.0;
  double spent_after = 0.0;
  double budget_total = 0.0;
};

// Planner memory that persists across missions of one arm.
struct PlannerState {
  Path coverage_path;
  std::size_t coverage_cursor = 0;
  LocalPlannerState local;
};

struct MissionOutput {
  std::vector<std::size_t> new_images;  // indices into the replay buffer
  std::vector<BudgetEntry> ledger;
  double spent = 0.0;
};

// Executes one budget-limited mission: plan, fly, capture, predict, fuse.
// Appends every capture to `replay`. `budget.spent` is updated in place.
// `planner_config.rng_seed` is re-derived per step from its incoming value.
MissionOutput run_mission(const SemanticGridWorld& world, MultiLayerMap& map,
                          const SurrogateModel& model, PlannerKind kind,
                          const PlannerConfig& planner_config, BudgetState& budget,
                          std::vector<StoredObservation>& replay, int mission_index,
                          PlannerState& planner_state);

// Labels after a mission. `labelling.rng_seed` is the base for per-image
// seeds. Human labels come from the ground truth, pseudo labels from the map.
void post_mission_update(std::span<const std::size_t> new_images,
                         std::span<const StoredObservation> replay,
                         MultiLayerMap& map, const SurrogateModel& model,
                         TrainingSet& training, SupervisionMode mode,
                         const LabellingConfig& labelling, int mission_index,
                         double human_weight = 1.0, double pseudo_weight = 1.0);

struct RetrainResult {
  SurrogateModel model;
  MultiLayerMap map;
};
RetrainResult retrain_and_recompute(const TrainingSet& training,
                                    std::span<const StoredObservation> replay,
                                    const MultiLayerMap& previous_map,
                                    const TrainOptions& options);

// `n` distinct uniformly random cells labelled from the ground truth.
std::vector<LabelledPixel> sample_seed_set(const SemanticGridWorld& world, int n,
                                           std::uint64_t seed, double weight = 1.0);

struct MissionRecord {
  int mission = 0;
  std::size_t images = 0;        // cumulative captured images
  std::size_t human_pixels = 0;  // cumulative, seed set included
  std::size_t pseudo_pixels = 0; // current pseudo set
  double budget_spent = 0.0;     // this mission
  double miou = 0.0;
  double accuracy = 0.0;

  friend bool operator==(const MissionRecord&, const MissionRecord&) = default;
};

struct ArmResult {
  int arm_index = 0;
  int start_index = 0;
  std::uint64_t seed = 0;
  PlannerKind planner = PlannerKind::kFrontier;
  SupervisionMode mode = SupervisionMode::kSemi;
  double initial_miou = 0.0;
  double initial_accuracy = 0.0;
  std::vector<MissionRecord> records;
  std::vector<BudgetEntry> ledger;
  std::optional<MultiLayerMap> final_map;
};

// File-name id of an arm, e.g. "arm00_start0_seed1".
std::string arm_id(const ArmResult& arm);

// World for one seed; shared by every arm and planner using that seed.
SemanticGridWorld build_world(const ExperimentConfig& config, std::uint64_t seed);

ArmResult run_arm(const ExperimentConfig& config, int start_index, int seed_index);

// All (start, seed) arms; `jobs` > 1 runs arms concurrently. Results are in
// arm order regardless of `jobs`.
std::vector<ArmResult> run_experiment(const ExperimentConfig& config, int jobs = 1);

}  // namespace terra

#endif  // TERRA_MISSION_H_
