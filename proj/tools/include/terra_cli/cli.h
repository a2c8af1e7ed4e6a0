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

#ifndef TERRA_CLI_CLI_H_
#define TERRA_CLI_CLI_H_

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "terra/mission.h"

namespace terra::cli {

// Entry point of the `terra_active` executable. `args` excludes the program
// name. Returns the process exit code; errors are reported on stderr.
int run(const std::vector<std::string>& args);

// Writes a complete run directory: manifest.json (before any mission runs),
// config.resolved.toml, metrics/, ledger/, maps/ and summary.json. Returns
// the arm results.
std::vector<ArmResult> run_to_directory(const ExperimentConfig& config,
                                        const std::filesystem::path& out_dir,
                                        const std::string& label,
                                        const std::string& config_path, int jobs);

// Version string baked in at configure time (`git describe` when available).
std::string version();

}  // namespace terra::cli

#endif  // TERRA_CLI_CLI_H_
