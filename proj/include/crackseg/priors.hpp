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

#include <vector>

#include "crackseg/types.hpp"

namespace crackseg {

/// Per-class loss multipliers applied by the true label of each pixel.
struct ClassWeights {
  double background = 1.0;
  double crack = 1.0;
};

/// Pooled, unsmoothed class fractions over a mask corpus.
struct GlobalFrequencies {
  double background = 0.0;
  double crack = 0.0;
};

// Per-position class priors over N masks with Laplace smoothing:
// prior_c(i,j) = (count_c(i,j) + alpha) / (N + 2 alpha). Smoothing keeps
// every entry strictly inside (0,1), which the ML decision rule requires.
PriorMap frequency_map(const std::vector<Mask>& masks, double alpha = 1.0);

GlobalFrequencies global_frequencies(const std::vector<Mask>& masks);

// Pooled-count prior broadcast to every position; the documented fallback
// when corpus images do not share one resolution. Smoothed over pixel counts.
PriorMap global_prior_map(const std::vector<Mask>& masks, Eigen::Index rows,
                          Eigen::Index cols, double alpha = 1.0);

// w_c = median(f_background, f_crack) / f_c. For two classes the median is
// their arithmetic mean. Requires both frequencies strictly positive.
ClassWeights median_frequency_weights(const GlobalFrequencies& f);

ClassWeights uniform_weights();

}  // namespace crackseg
