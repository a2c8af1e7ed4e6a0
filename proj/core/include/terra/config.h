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

#ifndef TERRA_CONFIG_H_
#define TERRA_CONFIG_H_

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "terra/mission.h"

namespace terra {

// Config problems. `line()` is 1-based, 0 when not tied to a line.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(int line, const std::string& message)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message
                                    : message),
        line_(line),
        detail_(message) {}
  int line() const { return line_; }
  // The message without the line prefix.
  const std::string& detail() const { return detail_; }

 private:
  int line_;
  std::string detail_;
};

// Flat `key = value` text config. Keys may be written fully qualified
// (`planner.speed = 2.0`) or under a `[planner]` table header. Values are
// integers, reals, booleans, double-quoted strings or bracketed lists.
// Omitted keys keep their defaults; unknown keys are rejected; the result is
// validated.
ExperimentConfig parse_config_string(std::string_view text);
ExperimentConfig parse_config(const std::filesystem::path& path);

// Every key, fully qualified, with values that parse back to `config`.
std::string emit_config(const ExperimentConfig& config);

}  // namespace terra

#endif  // TERRA_CONFIG_H_
