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

#include <string>
#include <utility>
#include <vector>

#include "crackseg/config.hpp"
#include "crackseg/decision.hpp"
#include "crackseg/metrics.hpp"

namespace crackseg {

struct EpochLog {
  int epoch = 0;
  double train_loss = 0.0;
  double val_loss = 0.0;
  double val_mpa = 0.0;  // filled only under select-by-mpa
  bool snapshotted = false;
};

struct TrainResult {
  NetParams model;  // parameters at the best validation epoch
  PriorMap priors;  // per-position prior over the training masks
  ClassWeights weights;
  DatasetSplit split;
  std::vector<EpochLog> log;
};

struct EvalResult {
  ConfusionCounts counts;  // decision-rule counts, crack positive
  MetricsReport crack;
  MetricsReport background;
  PrCurve curve;     // crack-score sweep
  PrCurve bg_curve;  // background-score sweep
  std::vector<std::pair<std::string, Mask>> masks;  // per-image decisions
};

/// Loads the directory corpus or generates the synthetic one, then checks
/// every sample against the ArchSpec input shape.
std::vector<ImageSample> load_data(const RunConfig& cfg);

/// The per-pixel crack score a strategy sweeps and thresholds: the raw
/// softmax crack probability for *-map, the prior-adjusted score for *-ml.
Plane strategy_score(const ProbMap& probs, Strategy strategy,
                     const PriorMap& priors);

TrainResult train_model(const RunConfig& cfg,
                        const std::vector<ImageSample>& corpus);

/// Scores already computed: pooled decision counts at threshold 0.5 plus the
/// full curves. The decision masks are the t=0.5 sweep points, so metrics
/// JSON and PR CSV agree bit-for-bit.
EvalResult evaluate_scores(const std::vector<std::string>& ids,
                           const std::vector<Plane>& crack_scores,
                           const std::vector<Mask>& truths,
                           const std::vector<double>& thresholds);

EvalResult evaluate_model(const NetParams& model, const PriorMap& priors,
                          Strategy strategy,
                          const std::vector<ImageSample>& samples,
                          const std::vector<double>& thresholds);

/// Validation-set MPA of a freshly trained model; the tuning objective.
double validation_mpa(const RunConfig& cfg,
                      const std::vector<ImageSample>& corpus);

// Subcommands. Each writes its artifacts under cfg.out_dir and throws on
// failure; outputs are byte-identical across reruns of the same config.
void cmd_synth(const RunConfig& cfg);
void cmd_train(const RunConfig& cfg);
void cmd_eval(const RunConfig& cfg);
void cmd_tune(const RunConfig& cfg);
void cmd_compare(const RunConfig& cfg);

}  // namespace crackseg
