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

#ifndef TERRA_REPORT_H_
#define TERRA_REPORT_H_

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "terra/mission.h"

namespace terra {

inline constexpr const char* kMetricsHeader =
    "mission,images,human_pixels,pseudo_pixels,budget_spent,miou,accuracy";

std::string metrics_csv(const ArmResult& arm);
void write_metrics_csv(const std::filesystem::path& path, const ArmResult& arm);

// Budget ledger: one row per executed step.
inline constexpr const char* kLedgerHeader =
    "mission,step,x,y,cost,spent_after,budget_total";
std::string ledger_csv(const ArmResult& arm);
void write_ledger_csv(const std::filesystem::path& path, const ArmResult& arm);

// Mean and sample standard deviation across arms, per mission.
struct MissionAggregate {
  int mission = 0;
  double images_mean = 0, images_std = 0;
  double human_pixels_mean = 0, human_pixels_std = 0;
  double pseudo_pixels_mean = 0, pseudo_pixels_std = 0;
  double budget_spent_mean = 0, budget_spent_std = 0;
  double miou_mean = 0, miou_std = 0;
  double accuracy_mean = 0, accuracy_std = 0;
};
std::vector<MissionAggregate> aggregate(std::span<const ArmResult> arms);

// Plot data for a comparison: one row per (label, mission) with mean/std of
// images, human pixels, mIoU and accuracy.
inline constexpr const char* kCurvesHeader =
    "label,mission,images_mean,images_std,human_pixels_mean,human_pixels_std,"
    "miou_mean,miou_std,accuracy_mean,accuracy_std";
struct LabelledCurve {
  std::string label;
  std::vector<MissionAggregate> missions;
};
std::string curves_csv(std::span<const LabelledCurve> curves);
void write_curves_csv(const std::filesystem::path& path,
                      std::span<const LabelledCurve> curves);

// JSON document with the run label, per-arm final metrics and the per-mission
// aggregates.
std::string summary_json(const std::string& label, std::span<const ArmResult> arms);
void write_summary_json(const std::filesystem::path& path, const std::string& label,
                        std::span<const ArmResult> arms);

}  // namespace terra

#endif  // TERRA_REPORT_H_
