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
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "crackseg/bayesopt.hpp"
#include "crackseg/dataset.hpp"
#include "crackseg/network.hpp"
#include "crackseg/optimizers.hpp"

namespace crackseg {

// A strategy pairs the training weight scheme with the decision rule.
// The three published cells are uw-map, uw-ml and mfw-map; the fourth cell
// (mfw-ml) is reachable only with allow-extended-strategies.
enum class Strategy { uw_map, uw_ml, mfw_map, mfw_ml };

Strategy parse_strategy(const std::string& name, bool allow_extended);
std::string strategy_name(Strategy s);
bool strategy_uses_mfw(Strategy s);
bool strategy_uses_ml(Strategy s);

struct DataSource {
  std::string dir;  // empty when synthetic
  std::optional<SynthConfig> synthetic;
};

/// One JSON document drives every subcommand; field names are the
/// lower-kebab-case versions of these members.
struct RunConfig {
  DataSource data;
  ArchSpec arch;
  OptimizerSpec optimizer = OptimizerSpec::defaults(OptAlgorithm::adadelta);
  Strategy strategy = Strategy::uw_map;
  int epochs = 1;
  int batch_size = 4;
  std::uint64_t seed = 0;
  std::string out_dir = "out";
  bool select_by_mpa = false;
  double prior_alpha = 1.0;
  // tune section
  SearchSpace space = adadelta_default_space();
  int budget = 16;
  // compare section
  std::vector<std::string> compare_inputs;
};

RunConfig load_config(const std::string& path);
RunConfig parse_config(const std::string& json_text);

}  // namespace crackseg
