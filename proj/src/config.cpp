/*
 * Copyright 2026 The crackseg authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include "crackseg/config.hpp"

#include <fstream>

#include <json.hpp>

namespace crackseg {

using nlohmann::json;

Strategy parse_strategy(const std::string& name, bool allow_extended) {
  if (name == "uw-map") return Strategy::uw_map;
  if (name == "uw-ml") return Strategy::uw_ml;
  if (name == "mfw-map") return Strategy::mfw_map;
  if (name == "mfw-ml") {
    if (!allow_extended) {
      throw std::invalid_argument(
          "strategy mfw-ml requires allow-extended-strategies");
    }
    return Strategy::mfw_ml;
  }
  throw std::invalid_argument("unknown strategy: " + name);
}

std::string strategy_name(Strategy s) {
  switch (s) {
    case Strategy::uw_map: return "uw-map";
    case Strategy::uw_ml: return "uw-ml";
    case Strategy::mfw_map: return "mfw-map";
    case Strategy::mfw_ml: return "mfw-ml";
  }
  throw std::invalid_argument("bad strategy enum value");
}

bool strategy_uses_mfw(Strategy s) {
  return s == Strategy::mfw_map || s == Strategy::mfw_ml;
}

bool strategy_uses_ml(Strategy s) {
  return s == Strategy::uw_ml || s == Strategy::mfw_ml;
}

namespace {

[[noreturn]] void config_error(const std::string& what) {
  throw std::invalid_argument("config: " + what);
}

double get_num(const json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number()) config_error(std::string(key) + " must be a number");
  return j.at(key).get<double>();
}

int get_int(const json& j, const char* key, int fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number_integer()) {
    config_error(std::string(key) + " must be an integer");
  }
  return j.at(key).get<int>();
}

SynthConfig parse_synth(const json& j, std::uint64_t run_seed) {
  SynthConfig s;
  s.count = get_int(j, "count", s.count);
  s.height = get_int(j, "height", s.height);
  s.width = get_int(j, "width", s.width);
  s.min_strokes = get_int(j, "min-strokes", s.min_strokes);
  s.max_strokes = get_int(j, "max-strokes", s.max_strokes);
  s.min_stroke_width = get_int(j, "min-stroke-width", s.min_stroke_width);
  s.max_stroke_width = get_int(j, "max-stroke-width", s.max_stroke_width);
  s.min_crack_fraction = get_num(j, "min-crack-fraction", s.min_crack_fraction);
  s.max_crack_fraction = get_num(j, "max-crack-fraction", s.max_crack_fraction);
  s.noise_amplitude = get_num(j, "noise-amplitude", s.noise_amplitude);
  s.seed = j.contains("seed") ? j.at("seed").get<std::uint64_t>() : run_seed;
  validate(s);
  return s;
}

ArchSpec parse_arch(const json& j) {
  ArchSpec a;
  a.depth = get_int(j, "depth", a.depth);
  if (j.contains("channels")) {
    if (!j.at("channels").is_array()) config_error("arch channels must be an array");
    a.channels = j.at("channels").get<std::vector<int>>();
  } else {
    // default plan (16, 32, 64, 128) truncated/extended to the depth
    a.channels.clear();
    for (int i = 0; i < a.depth; ++i) a.channels.push_back(16 << std::min(i, 3));
  }
  a.kernel = get_int(j, "kernel-size", a.kernel);
  a.input_rows = get_int(j, "input-height", a.input_rows);
  a.input_cols = get_int(j, "input-width", a.input_cols);
  return a;
}

OptimizerSpec parse_optimizer(const json& j) {
  if (!j.contains("algorithm") || !j.at("algorithm").is_string()) {
    config_error("optimizer requires an algorithm name");
  }
  OptimizerSpec s =
      OptimizerSpec::defaults(parse_algorithm(j.at("algorithm").get<std::string>()));
  s.learning_rate = get_num(j, "learning-rate", s.learning_rate);
  s.momentum = get_num(j, "momentum", s.momentum);
  s.rho = get_num(j, "rho", s.rho);
  s.beta1 = get_num(j, "beta1", s.beta1);
  s.beta2 = get_num(j, "beta2", s.beta2);
  s.epsilon = get_num(j, "epsilon", s.epsilon);
  validate(s);
  return s;
}

SearchSpace parse_space(const json& j) {
  SearchSpace space;
  for (const auto& [name, spec] : j.items()) {
    SearchDim dim;
    dim.name = name;
    dim.lower = get_num(spec, "lower", 0.0);
    dim.upper = get_num(spec, "upper", 1.0);
    const std::string scale =
        spec.contains("scale") ? spec.at("scale").get<std::string>() : "linear";
    if (scale == "linear") {
      dim.scale = DimScale::linear;
    } else if (scale == "log10") {
      dim.scale = DimScale::log10;
    } else {
      config_error("unknown scale " + scale + " for dimension " + name);
    }
    space.dims.push_back(std::move(dim));
  }
  validate(space);
  return space;
}

}  // namespace

RunConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("config: invalid JSON: ") + e.what());
  }
  RunConfig cfg;
  cfg.seed = j.contains("seed") ? j.at("seed").get<std::uint64_t>() : 0;

  if (j.contains("data")) {
    const json& data = j.at("data");
    if (data.contains("dir")) {
      cfg.data.dir = data.at("dir").get<std::string>();
    } else if (data.contains("synthetic")) {
      cfg.data.synthetic = parse_synth(data.at("synthetic"), cfg.seed);
    } else {
      config_error("data must name a dir or a synthetic block");
    }
  }

  if (j.contains("arch")) cfg.arch = parse_arch(j.at("arch"));
  if (j.contains("optimizer")) cfg.optimizer = parse_optimizer(j.at("optimizer"));

  const bool allow_extended =
      j.contains("allow-extended-strategies") &&
      j.at("allow-extended-strategies").get<bool>();
  if (j.contains("strategy")) {
    cfg.strategy =
        parse_strategy(j.at("strategy").get<std::string>(), allow_extended);
  }

  cfg.epochs = get_int(j, "epochs", cfg.epochs);
  cfg.batch_size = get_int(j, "batch-size", cfg.batch_size);
  if (cfg.epochs < 1) config_error("epochs must be >= 1");
  if (cfg.batch_size < 1) config_error("batch-size must be >= 1");
  if (j.contains("out")) cfg.out_dir = j.at("out").get<std::string>();
  if (j.contains("select-by-mpa")) {
    cfg.select_by_mpa = j.at("select-by-mpa").get<bool>();
  }
  cfg.prior_alpha = get_num(j, "prior-alpha", cfg.prior_alpha);
  if (!(cfg.prior_alpha > 0.0)) config_error("prior-alpha must be positive");

  if (j.contains("tune")) {
    const json& t = j.at("tune");
    cfg.budget = get_int(t, "budget", cfg.budget);
    if (t.contains("space")) cfg.space = parse_space(t.at("space"));
  }
  if (j.contains("compare")) {
    const json& c = j.at("compare");
    if (!c.contains("inputs") || !c.at("inputs").is_array()) {
      config_error("compare requires an inputs array");
    }
    cfg.compare_inputs = c.at("inputs").get<std::vector<std::string>>();
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError(path + ": cannot open config file");
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return parse_config(text);
}

}  // namespace crackseg
