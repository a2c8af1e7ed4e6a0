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

#include "terra/config.h"

#include <cctype>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <vector>

namespace terra {
namespace {

struct Value {
  enum class Kind { kInteger, kReal, kBool, kString, kList } kind = Kind::kInteger;
  long long integer = 0;
  std::uint64_t uinteger = 0;  // set for non-negative integers
  bool beyond_int64 = false;
  double real = 0.0;
  bool boolean = false;
  std::string text;
  std::vector<Value> items;
};

class ValueParser {
 public:
  ValueParser(std::string_view s, int line) : s_(s), line_(line) {}

  Value parse() {
    Value v = value();
    skip_ws();
    if (pos_ != s_.size()) fail("trailing characters after value");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw ConfigError(line_, what); }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  Value value() {
    skip_ws();
    if (pos_ >= s_.size()) fail("missing value");
    const char c = s_[pos_];
    if (c == '[') return list();
    if (c == '"') return string();
    return scalar();
  }

  Value list() {
    Value v;
    v.kind = Value::Kind::kList;
    ++pos_;
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == ']') {
      ++pos_;
      return v;
    }
    while (true) {
      v.items.push_back(value());
      skip_ws();
      if (pos_ >= s_.size()) fail("unterminated list");
      if (s_[pos_] == ',') {
        ++pos_;
        continue;
      }
      if (s_[pos_] == ']') {
        ++pos_;
        return v;
      }
      fail("expected ',' or ']' in list");
    }
  }

  Value string() {
    Value v;
    v.kind = Value::Kind::kString;
    ++pos_;
    while (pos_ < s_.size() && s_[pos_] != '"') {
      if (s_[pos_] == '\\' && pos_ + 1 < s_.size()) ++pos_;
      v.text.push_back(s_[pos_++]);
    }
    if (pos_ >= s_.size()) fail("unterminated string");
    ++pos_;
    return v;
  }

  Value scalar() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && s_[pos_] != ',' && s_[pos_] != ']' &&
           !std::isspace(static_cast<unsigned char>(s_[pos_]))) {
      ++pos_;
    }
    const std::string_view tok = s_.substr(start, pos_ - start);
    Value v;
    if (tok == "true" || tok == "false") {
      v.kind = Value::Kind::kBool;
      v.boolean = tok == "true";
      return v;
    }
    const char* b = tok.data();
    const char* e = tok.data() + tok.size();
    auto [ip, iec] = std::from_chars(b, e, v.integer);
    if (iec == std::errc() && ip == e) {
      v.kind = Value::Kind::kInteger;
      v.real = static_cast<double>(v.integer);
      if (v.integer >= 0) v.uinteger = static_cast<std::uint64_t>(v.integer);
      return v;
    }
    auto [up, uec] = std::from_chars(b, e, v.uinteger);
    if (uec == std::errc() && up == e) {
      v.kind = Value::Kind::kInteger;
      v.beyond_int64 = true;
      v.real = static_cast<double>(v.uinteger);
      return v;
    }
    auto [rp, rec] = std::from_chars(b, e, v.real);
    if (rec == std::errc() && rp == e) {
      v.kind = Value::Kind::kReal;
      return v;
    }
    fail("cannot parse value '" + std::string(tok) + "'");
  }

  std::string_view s_;
  int line_;
  std::size_t pos_ = 0;
};

std::string strip_comment(const std::string& line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') quoted = !quoted;
    if (line[i] == '#' && !quoted) return line.substr(0, i);
  }
  return line;
}

std::string trim(std::string s) {
  s.erase(0, s.find_first_not_of(" \t\r"));
  s.erase(s.find_last_not_of(" \t\r") + 1);
  return s;
}

using Setter = std::function<void(ExperimentConfig&, const Value&, int line,
                                  const std::string& key)>;

[[noreturn]] void type_error(int line, const std::string& key, const char* expected) {
  throw ConfigError(line, "key '" + key + "': expected " + expected);
}

long long as_integer(const Value& v, int line, const std::string& key) {
  if (v.kind != Value::Kind::kInteger) type_error(line, key, "an integer");
  if (v.beyond_int64) type_error(line, key, "a 64-bit signed integer");
  return v.integer;
}
int as_int(const Value& v, int line, const std::string& key) {
  const long long i = as_integer(v, line, key);
  if (i < INT32_MIN || i > INT32_MAX) type_error(line, key, "a 32-bit integer");
  return static_cast<int>(i);
}
double as_real(const Value& v, int line, const std::string& key) {
  if (v.kind != Value::Kind::kInteger && v.kind != Value::Kind::kReal) {
    type_error(line, key, "a number");
  }
  return v.real;
}

template <typename Field>
Setter int_field(Field field) {
  return [field](ExperimentConfig& c, const Value& v, int line, const std::string& key) {
    std::invoke(field, c) = as_int(v, line, key);
  };
}
template <typename Field>
Setter real_field(Field field) {
  return [field](ExperimentConfig& c, const Value& v, int line, const std::string& key) {
    std::invoke(field, c) = as_real(v, line, key);
  };
}

const std::map<std::string, Setter>& setters() {
  using C = ExperimentConfig;
  static const std::map<std::string, Setter> table = {
      {"num_missions", int_field([](C& c) -> int& { return c.num_missions; })},
      {"budget_seconds", real_field([](C& c) -> double& { return c.budget_seconds; })},
      {"mode",
       [](C& c, const Value& v, int line, const std::string& key) {
         if (v.kind != Value::Kind::kString) type_error(line, key, "a string");
         try {
           c.mode = parse_supervision_mode(v.text);
         } catch (const std::invalid_argument& e) {
           throw ConfigError(line, "key '" + key + "': " + e.what());
         }
       }},
      {"planner",
       [](C& c, const Value& v, int line, const std::string& key) {
         if (v.kind != Value::Kind::kString) type_error(line, key, "a string");
         try {
           c.planner_kind = parse_planner_kind(v.text);
         } catch (const std::invalid_argument& e) {
           throw ConfigError(line, "key '" + key + "': " + e.what());
         }
       }},
      {"start_poses",
       [](C& c, const Value& v, int line, const std::string& key) {
         if (v.kind != Value::Kind::kList) type_error(line, key, "a list of [x, y]");
         c.start_poses.clear();
         for (const Value& item : v.items) {
           if (item.kind != Value::Kind::kList || item.items.size() != 2) {
             type_error(line, key, "a list of [x, y]");
           }
           c.start_poses.push_back({as_real(item.items[0], line, key),
                                    as_real(item.items[1], line, key)});
         }
       }},
      {"seeds",
       [](C& c, const Value& v, int line, const std::string& key) {
         if (v.kind != Value::Kind::kList) type_error(line, key, "a list of integers");
         c.seeds.clear();
         for (const Value& item : v.items) {
           if (item.kind != Value::Kind::kInteger) type_error(line, key, "a list of integers");
           if (item.integer < 0 && !item.beyond_int64) {
             type_error(line, key, "non-negative seeds");
           }
           c.seeds.push_back(item.uinteger);
         }
       }},
      {"label_raster",
       [](C& c, const Value& v, int line, const std::string& key) {
         if (v.kind != Value::Kind::kString) type_error(line, key, "a string");
         c.label_raster = v.text;
       }},
      {"n_seed", int_field([](C& c) -> int& { return c.n_seed; })},
      {"pseudo_weight", real_field([](C& c) -> double& { return c.pseudo_weight; })},
      {"human_weight", real_field([](C& c) -> double& { return c.human_weight; })},
      {"world.width_cells", int_field([](C& c) -> int& { return c.world.width_cells; })},
      {"world.height_cells", int_field([](C& c) -> int& { return c.world.height_cells; })},
      {"world.num_classes", int_field([](C& c) -> int& { return c.world.num_classes; })},
      {"world.blob_scale", int_field([](C& c) -> int& { return c.world.blob_scale; })},
      {"world.feature_dim", int_field([](C& c) -> int& { return c.world.feature_dim; })},
      {"world.class_separation",
       real_field([](C& c) -> double& { return c.world.class_separation; })},
      {"world.noise_sigma", real_field([](C& c) -> double& { return c.world.noise_sigma; })},
      {"world.cell_size", real_field([](C& c) -> double& { return c.world.cell_size; })},
      {"labelling.alpha", int_field([](C& c) -> int& { return c.labelling.alpha; })},
      {"labelling.beta_percent",
       real_field([](C& c) -> double& { return c.labelling.beta_percent; })},
      {"labelling.impurity_radius",
       int_field([](C& c) -> int& { return c.labelling.impurity_radius; })},
      {"planner.footprint_cells",
       int_field([](C& c) -> int& { return c.planner.footprint_cells; })},
      {"planner.exploration_bonus",
       real_field([](C& c) -> double& { return c.planner.exploration_bonus; })},
      {"planner.speed", real_field([](C& c) -> double& { return c.planner.speed; })},
      {"planner.measure_time",
       real_field([](C& c) -> double& { return c.planner.measure_time; })},
      {"planner.candidate_grid_step",
       int_field([](C& c) -> int& { return c.planner.candidate_grid_step; })},
      {"planner.horizon", int_field([](C& c) -> int& { return c.planner.horizon; })},
      {"planner.es_offspring", int_field([](C& c) -> int& { return c.planner.es_offspring; })},
      {"planner.es_generations",
       int_field([](C& c) -> int& { return c.planner.es_generations; })},
      {"planner.mcts_iterations",
       int_field([](C& c) -> int& { return c.planner.mcts_iterations; })},
      {"planner.mcts_uct_constant",
       real_field([](C& c) -> double& { return c.planner.mcts_uct_constant; })},
      {"planner.rollout_depth", int_field([](C& c) -> int& { return c.planner.rollout_depth; })},
      {"planner.local_step", real_field([](C& c) -> double& { return c.planner.local_step; })},
      {"planner.frontier_cost_normalized",
       [](C& c, const Value& v, int line, const std::string& key) {
         if (v.kind != Value::Kind::kBool) type_error(line, key, "true or false");
         c.planner.frontier_cost_normalized = v.boolean;
       }},
      {"planner.frontier_max_cluster_cells",
       int_field([](C& c) -> int& { return c.planner.frontier_max_cluster_cells; })},
      {"train.variance_floor",
       real_field([](C& c) -> double& { return c.train.variance_floor; })},
      {"train.prior_smoothing",
       real_field([](C& c) -> double& { return c.train.prior_smoothing; })},
  };
  return table;
}

}  // namespace

ExperimentConfig parse_config_string(std::string_view text) {
  ExperimentConfig config;
  std::map<std::string, int> seen;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::string section;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(line_no, "malformed table header");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(line_no, "expected 'key = value'");
    std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError(line_no, "missing key");
    if (!section.empty()) key = section + "." + key;
    const auto it = setters().find(key);
    if (it == setters().end()) throw ConfigError(line_no, "unknown key '" + key + "'");
    if (seen.count(key)) {
      throw ConfigError(line_no, "duplicate key '" + key + "' (first on line " +
                                     std::to_string(seen[key]) + ")");
    }
    seen[key] = line_no;
    const Value value = ValueParser(line.substr(eq + 1), line_no).parse();
    it->second(config, value, line_no, key);
  }
  try {
    validate(config);
  } catch (const std::invalid_argument& e) {
    // Messages start with the field name; point at its line when present.
    const std::string msg = e.what();
    const std::string field = msg.substr(0, msg.find(' '));
    const auto it = seen.find(field);
    throw ConfigError(it == seen.end() ? 0 : it->second, "invalid value: " + msg);
  }
  return config;
}

ExperimentConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(0, "cannot open config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_config_string(ss.str());
  } catch (const ConfigError& e) {
    throw ConfigError(e.line(), path.string() + ": " + e.detail());
  }
}

namespace {

std::string real(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  std::string s(buf, res.ptr);
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out + "\"";
}

}  // namespace

std::string emit_config(const ExperimentConfig& c) {
  std::ostringstream out;
  out << "num_missions = " << c.num_missions << '\n'
      << "budget_seconds = " << real(c.budget_seconds) << '\n'
      << "mode = " << quote(std::string(to_string(c.mode))) << '\n'
      << "planner = " << quote(std::string(to_string(c.planner_kind))) << '\n'
      << "start_poses = [";
  for (std::size_t i = 0; i < c.start_poses.size(); ++i) {
    out << (i ? ", " : "") << '[' << real(c.start_poses[i].x) << ", "
        << real(c.start_poses[i].y) << ']';
  }
  out << "]\nseeds = [";
  for (std::size_t i = 0; i < c.seeds.size(); ++i) out << (i ? ", " : "") << c.seeds[i];
  out << "]\n"
      << "label_raster = " << quote(c.label_raster) << '\n'
      << "n_seed = " << c.n_seed << '\n'
      << "pseudo_weight = " << real(c.pseudo_weight) << '\n'
      << "human_weight = " << real(c.human_weight) << '\n'
      << "world.width_cells = " << c.world.width_cells << '\n'
      << "world.height_cells = " << c.world.height_cells << '\n'
      << "world.num_classes = " << c.world.num_classes << '\n'
      << "world.blob_scale = " << c.world.blob_scale << '\n'
      << "world.feature_dim = " << c.world.feature_dim << '\n'
      << "world.class_separation = " << real(c.world.class_separation) << '\n'
      << "world.noise_sigma = " << real(c.world.noise_sigma) << '\n'
      << "world.cell_size = " << real(c.world.cell_size) << '\n'
      << "labelling.alpha = " << c.labelling.alpha << '\n'
      << "labelling.beta_percent = " << real(c.labelling.beta_percent) << '\n'
      << "labelling.impurity_radius = " << c.labelling.impurity_radius << '\n'
      << "planner.footprint_cells = " << c.planner.footprint_cells << '\n'
      << "planner.exploration_bonus = " << real(c.planner.exploration_bonus) << '\n'
      << "planner.speed = " << real(c.planner.speed) << '\n'
      << "planner.measure_time = " << real(c.planner.measure_time) << '\n'
      << "planner.candidate_grid_step = " << c.planner.candidate_grid_step << '\n'
      << "planner.horizon = " << c.planner.horizon << '\n'
      << "planner.es_offspring = " << c.planner.es_offspring << '\n'
      << "planner.es_generations = " << c.planner.es_generations << '\n'
      << "planner.mcts_iterations = " << c.planner.mcts_iterations << '\n'
      << "planner.mcts_uct_constant = " << real(c.planner.mcts_uct_constant) << '\n'
      << "planner.rollout_depth = " << c.planner.rollout_depth << '\n'
      << "planner.local_step = " << real(c.planner.local_step) << '\n'
      << "planner.frontier_cost_normalized = "
      << (c.planner.frontier_cost_normalized ? "true" : "false") << '\n'
      << "planner.frontier_max_cluster_cells = " << c.planner.frontier_max_cluster_cells
      << '\n'
      << "train.variance_floor = " << real(c.train.variance_floor) << '\n'
      << "train.prior_smoothing = " << real(c.train.prior_smoothing) << '\n';
  return out.str();
}

}  // namespace terra
