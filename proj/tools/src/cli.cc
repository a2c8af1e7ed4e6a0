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

#include "terra_cli/cli.h"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <stdexcept>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "terra/config.h"
#include "terra/raster_io.h"
#include "terra/report.h"

#ifndef TERRA_ACTIVE_VERSION
#define TERRA_ACTIVE_VERSION "unknown"
#endif

namespace terra::cli {

namespace fs = std::filesystem;

std::string version() { return TERRA_ACTIVE_VERSION; }

namespace {

struct Overrides {
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  int jobs = 1;
  std::string planner;
  std::string mode;
};

void configure_logging() {
  auto logger = spdlog::stderr_color_mt("terra");
  logger->set_pattern("[%H:%M:%S.%e] [%^%l%$] %v");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::info);
  if (const char* env = std::getenv("TERRA_ACTIVE_LOG")) {
    spdlog::set_level(spdlog::level::from_str(env));
  }
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

nlohmann::ordered_json manifest_json(const ExperimentConfig& config,
                                     const fs::path& out_dir, const std::string& label,
                                     const std::string& config_path) {
  nlohmann::ordered_json m;
  m["label"] = label;
  m["config_path"] = config_path;
  m["output_directory"] = out_dir.string();
  m["version"] = version();
  m["resolved_config"] = emit_config(config);
  m["status"] = "running";
  m["wall_clock_seconds"] = nullptr;
  return m;
}

// Creates `dir` and checks that files can be written into it.
void prepare_directory(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    throw std::runtime_error("cannot create output directory " + dir.string() + ": " +
                             ec.message());
  }
  const fs::path probe = dir / ".write_probe";
  {
    std::ofstream out(probe);
    if (!out) throw std::runtime_error("output directory is not writable: " + dir.string());
  }
  fs::remove(probe, ec);
}

ExperimentConfig load_config(const Overrides& o) {
  ExperimentConfig config;
  if (!o.config_path.empty()) {
    if (!fs::exists(o.config_path)) {
      throw std::runtime_error("config file not found: " + o.config_path);
    }
    config = parse_config(o.config_path);
  }
  if (o.seed) config.seeds = {*o.seed};
  if (!o.planner.empty()) config.planner_kind = parse_planner_kind(o.planner);
  if (!o.mode.empty()) config.mode = parse_supervision_mode(o.mode);
  validate(config);
  return config;
}

LabelledCurve curve_of(const std::string& label, const std::vector<ArmResult>& arms) {
  return {label, aggregate(arms)};
}

// Top-level manifest/config/curves for a comparison over several sub-runs.
class ComparisonWriter {
 public:
  ComparisonWriter(const ExperimentConfig& config, const fs::path& out,
                   const std::string& label, const std::string& config_path)
      : out_(out), start_(std::chrono::steady_clock::now()) {
    prepare_directory(out_);
    manifest_ = manifest_json(config, out_, label, config_path);
    write_text(out_ / "manifest.json", manifest_.dump(2) + "\n");
    write_text(out_ / "config.resolved.toml", emit_config(config));
  }

  void finish(const std::vector<LabelledCurve>& curves,
              const nlohmann::ordered_json& comparison) {
    write_curves_csv(out_ / "curves.csv", curves);
    write_text(out_ / "comparison.json", comparison.dump(2) + "\n");
    manifest_["status"] = "complete";
    manifest_["wall_clock_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    write_text(out_ / "manifest.json", manifest_.dump(2) + "\n");
  }

 private:
  fs::path out_;
  std::chrono::steady_clock::time_point start_;
  nlohmann::ordered_json manifest_;
};

nlohmann::ordered_json final_entry(const std::vector<MissionAggregate>& agg) {
  nlohmann::ordered_json j;
  if (agg.empty()) return j;
  const auto& last = agg.back();
  j["final_miou"] = last.miou_mean;
  j["final_accuracy"] = last.accuracy_mean;
  j["final_images"] = last.images_mean;
  j["final_human_pixels"] = last.human_pixels_mean;
  return j;
}

int cmd_simulate(const Overrides& o) {
  const ExperimentConfig config = load_config(o);
  run_to_directory(config, o.out_dir, "simulate", o.config_path, o.jobs);
  return 0;
}

int cmd_compare_planners(Overrides o) {
  if (o.mode.empty()) o.mode = "full";
  const ExperimentConfig base = load_config(o);
  ComparisonWriter writer(base, o.out_dir, "compare-planners", o.config_path);
  std::vector<LabelledCurve> curves;
  nlohmann::ordered_json comparison;
  comparison["mode"] = std::string(to_string(base.mode));
  for (PlannerKind kind : kAllPlanners) {
    ExperimentConfig config = base;
    config.planner_kind = kind;
    const std::string name(to_string(kind));
    const auto arms = run_to_directory(config, fs::path(o.out_dir) / name, name,
                                       o.config_path, o.jobs);
    curves.push_back(curve_of(name, arms));
    comparison["planners"][name] = final_entry(curves.back().missions);
  }
  writer.finish(curves, comparison);
  return 0;
}

int cmd_compare_supervision(Overrides o) {
  if (o.planner.empty()) o.planner = "frontier";
  const ExperimentConfig base = load_config(o);
  ComparisonWriter writer(base, o.out_dir, "compare-supervision", o.config_path);
  std::vector<LabelledCurve> curves;
  nlohmann::ordered_json comparison;
  comparison["planner"] = std::string(to_string(base.planner_kind));
  for (SupervisionMode mode :
       {SupervisionMode::kFull, SupervisionMode::kSemi, SupervisionMode::kSelf}) {
    ExperimentConfig config = base;
    config.mode = mode;
    const std::string name(to_string(mode));
    const auto arms = run_to_directory(config, fs::path(o.out_dir) / name, name,
                                       o.config_path, o.jobs);
    curves.push_back(curve_of(name, arms));
    comparison["modes"][name] = final_entry(curves.back().missions);
  }
  writer.finish(curves, comparison);
  return 0;
}

int cmd_dump_map(const std::string& run_dir, std::string out_dir) {
  const fs::path maps = fs::path(run_dir) / "maps";
  if (!fs::is_directory(maps)) {
    throw std::runtime_error("no maps/ directory in run " + run_dir);
  }
  if (out_dir.empty()) out_dir = (fs::path(run_dir) / "map_dump").string();
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(maps)) {
    if (entry.path().extension() == ".tmap") files.push_back(entry.path());
  }
  if (files.empty()) throw std::runtime_error("no .tmap snapshots in " + maps.string());
  std::sort(files.begin(), files.end());
  for (const auto& file : files) {
    const fs::path dir = fs::path(out_dir) / file.stem();
    prepare_directory(dir);
    dump_map(dir, load_map(file));
    spdlog::info("dumped {} -> {}", file.string(), dir.string());
  }
  return 0;
}

void add_run_flags(CLI::App* app, Overrides& o) {
  app->add_option("--config", o.config_path, "Experiment config file");
  app->add_option("--out", o.out_dir, "Output directory")->required();
  app->add_option("--seed", o.seed, "Run a single seed instead of the config's list");
  app->add_option("--jobs", o.jobs, "Concurrent experiment arms")
      ->check(CLI::Range(1, 1024));
  app->add_option("--planner", o.planner,
                  "coverage | local | frontier | optimization | sampling");
  app->add_option("--mode", o.mode, "full | semi | self");
}

}  // namespace

std::vector<ArmResult> run_to_directory(const ExperimentConfig& config,
                                        const fs::path& out_dir, const std::string& label,
                                        const std::string& config_path, int jobs) {
  const auto start = std::chrono::steady_clock::now();
  prepare_directory(out_dir);
  for (const char* sub : {"metrics", "ledger", "maps"}) prepare_directory(out_dir / sub);

  auto manifest = manifest_json(config, out_dir, label, config_path);
  write_text(out_dir / "manifest.json", manifest.dump(2) + "\n");
  write_text(out_dir / "config.resolved.toml", emit_config(config));

  spdlog::info("{}: {} arm(s), planner={}, mode={}, {} mission(s)", label,
               config.start_poses.size() * config.seeds.size(),
               to_string(config.planner_kind), to_string(config.mode),
               config.num_missions);
  std::vector<ArmResult> arms = run_experiment(config, jobs);
  for (const auto& arm : arms) {
    const std::string id = arm_id(arm);
    write_metrics_csv(out_dir / "metrics" / (id + ".csv"), arm);
    write_ledger_csv(out_dir / "ledger" / (id + ".csv"), arm);
    if (arm.final_map) save_map(out_dir / "maps" / (id + ".tmap"), *arm.final_map);
    if (!arm.records.empty()) {
      spdlog::info("{}: {} final miou={:.4f} images={}", label, id,
                   arm.records.back().miou, arm.records.back().images);
    }
  }
  write_summary_json(out_dir / "summary.json", label, arms);

  manifest["status"] = "complete";
  manifest["wall_clock_seconds"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_text(out_dir / "manifest.json", manifest.dump(2) + "\n");
  return arms;
}

int run(const std::vector<std::string>& args) {
  if (!spdlog::get("terra")) configure_logging();

  CLI::App app{"Budgeted active learning for semantic terrain mapping", "terra_active"};
  app.set_version_flag("--version", version());
  app.require_subcommand(1);

  Overrides sim, planners, supervision;
  CLI::App* simulate = app.add_subcommand("simulate", "Run one experiment config");
  add_run_flags(simulate, sim);
  CLI::App* cmp_planners = app.add_subcommand(
      "compare-planners", "Run all five planners (mode defaults to full)");
  add_run_flags(cmp_planners, planners);
  CLI::App* cmp_supervision = app.add_subcommand(
      "compare-supervision", "Run full, semi and self supervision (planner defaults to frontier)");
  add_run_flags(cmp_supervision, supervision);

  std::string dump_run, dump_out;
  CLI::App* dump = app.add_subcommand("dump-map", "Write map rasters of a saved run");
  dump->add_option("--run", dump_run, "Run directory containing maps/")->required();
  dump->add_option("--out", dump_out, "Destination (default <run>/map_dump)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*simulate) return cmd_simulate(sim);
    if (*cmp_planners) return cmd_compare_planners(planners);
    if (*cmp_supervision) return cmd_compare_supervision(supervision);
    if (*dump) return cmd_dump_map(dump_run, dump_out);
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace terra::cli
