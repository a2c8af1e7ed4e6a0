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

#include "terra/report.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace terra {

std::string metrics_csv(const ArmResult& arm) {
  std::string out = std::string(kMetricsHeader) + "\n";
  char buf[256];
  for (const auto& r : arm.records) {
    std::snprintf(buf, sizeof(buf), "%d,%zu,%zu,%zu,%.6f,%.8f,%.8f\n", r.mission,
                  r.images, r.human_pixels, r.pseudo_pixels, r.budget_spent, r.miou,
                  r.accuracy);
    out += buf;
  }
  return out;
}

void write_metrics_csv(const std::filesystem::path& path, const ArmResult& arm) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << metrics_csv(arm);
}

std::string ledger_csv(const ArmResult& arm) {
  std::string out = std::string(kLedgerHeader) + "\n";
  char buf[256];
  for (const auto& e : arm.ledger) {
    std::snprintf(buf, sizeof(buf), "%d,%d,%.6f,%.6f,%.6f,%.6f,%.6f\n", e.mission,
                  e.step, e.pose.x, e.pose.y, e.cost, e.spent_after, e.budget_total);
    out += buf;
  }
  return out;
}

void write_ledger_csv(const std::filesystem::path& path, const ArmResult& arm) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << ledger_csv(arm);
}

namespace {

void mean_std(const std::vector<double>& xs, double& mean, double& sd) {
  mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  sd = xs.size() > 1 ? std::sqrt(ss / static_cast<double>(xs.size() - 1)) : 0.0;
}

}  // namespace

std::vector<MissionAggregate> aggregate(std::span<const ArmResult> arms) {
  std::vector<MissionAggregate> out;
  if (arms.empty()) return out;
  const std::size_t missions = arms.front().records.size();
  for (std::size_t m = 0; m < missions; ++m) {
    std::vector<double> images, human, pseudo, spent, miou, acc;
    for (const auto& arm : arms) {
      if (arm.records.size() != missions) {
        throw std::invalid_argument("arms have different mission counts");
      }
      const MissionRecord& r = arm.records[m];
      images.push_back(static_cast<double>(r.images));
      human.push_back(static_cast<double>(r.human_pixels));
      pseudo.push_back(static_cast<double>(r.pseudo_pixels));
      spent.push_back(r.budget_spent);
      miou.push_back(r.miou);
      acc.push_back(r.accuracy);
    }
    MissionAggregate a;
    a.mission = arms.front().records[m].mission;
    mean_std(images, a.images_mean, a.images_std);
    mean_std(human, a.human_pixels_mean, a.human_pixels_std);
    mean_std(pseudo, a.pseudo_pixels_mean, a.pseudo_pixels_std);
    mean_std(spent, a.budget_spent_mean, a.budget_spent_std);
    mean_std(miou, a.miou_mean, a.miou_std);
    mean_std(acc, a.accuracy_mean, a.accuracy_std);
    out.push_back(a);
  }
  return out;
}

std::string curves_csv(std::span<const LabelledCurve> curves) {
  std::string out = std::string(kCurvesHeader) + "\n";
  char buf[512];
  for (const auto& curve : curves) {
    for (const auto& m : curve.missions) {
      std::snprintf(buf, sizeof(buf), "%s,%d,%.4f,%.4f,%.4f,%.4f,%.8f,%.8f,%.8f,%.8f\n",
                    curve.label.c_str(), m.mission, m.images_mean, m.images_std,
                    m.human_pixels_mean, m.human_pixels_std, m.miou_mean, m.miou_std,
                    m.accuracy_mean, m.accuracy_std);
      out += buf;
    }
  }
  return out;
}

void write_curves_csv(const std::filesystem::path& path,
                      std::span<const LabelledCurve> curves) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << curves_csv(curves);
}

std::string summary_json(const std::string& label, std::span<const ArmResult> arms) {
  nlohmann::ordered_json doc;
  doc["label"] = label;
  doc["num_arms"] = arms.size();
  nlohmann::ordered_json arm_list = nlohmann::ordered_json::array();
  for (const auto& arm : arms) {
    nlohmann::ordered_json a;
    a["id"] = arm_id(arm);
    a["planner"] = std::string(to_string(arm.planner));
    a["mode"] = std::string(to_string(arm.mode));
    a["seed"] = arm.seed;
    a["start_index"] = arm.start_index;
    a["initial_miou"] = arm.initial_miou;
    if (!arm.records.empty()) {
      const auto& last = arm.records.back();
      a["final_miou"] = last.miou;
      a["final_accuracy"] = last.accuracy;
      a["final_images"] = last.images;
      a["final_human_pixels"] = last.human_pixels;
    }
    arm_list.push_back(a);
  }
  doc["arms"] = arm_list;
  nlohmann::ordered_json missions = nlohmann::ordered_json::array();
  for (const auto& m : aggregate(arms)) {
    nlohmann::ordered_json j;
    j["mission"] = m.mission;
    j["images"] = {{"mean", m.images_mean}, {"std", m.images_std}};
    j["human_pixels"] = {{"mean", m.human_pixels_mean}, {"std", m.human_pixels_std}};
    j["pseudo_pixels"] = {{"mean", m.pseudo_pixels_mean}, {"std", m.pseudo_pixels_std}};
    j["budget_spent"] = {{"mean", m.budget_spent_mean}, {"std", m.budget_spent_std}};
    j["miou"] = {{"mean", m.miou_mean}, {"std", m.miou_std}};
    j["accuracy"] = {{"mean", m.accuracy_mean}, {"std", m.accuracy_std}};
    missions.push_back(j);
  }
  doc["missions"] = missions;
  if (!missions.empty()) doc["final"] = missions.back();
  return doc.dump(2) + "\n";
}

void write_summary_json(const std::filesystem::path& path, const std::string& label,
                        std::span<const ArmResult> arms) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << summary_json(label, arms);
}

}  // namespace terra
