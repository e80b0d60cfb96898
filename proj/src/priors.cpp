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
#include "crackseg/priors.hpp"

namespace crackseg {

PriorMap frequency_map(const std::vector<Mask>& masks, double alpha) {
  if (masks.empty()) {
    throw std::invalid_argument("frequency_map: empty mask list");
  }
  if (alpha <= 0.0) {
    throw std::invalid_argument("frequency_map: alpha must be positive");
  }
  const Eigen::Index rows = masks[0].rows();
  const Eigen::Index cols = masks[0].cols();
  Plane crack_count = Plane::Zero(rows, cols);
  for (const Mask& m : masks) {
    if (m.rows() != rows || m.cols() != cols) {
      throw std::invalid_argument("frequency_map: mask dimension mismatch");
    }
    crack_count += m.cast<double>();
  }
  const double n = static_cast<double>(masks.size());
  PriorMap prior;
  prior.crack = (crack_count + alpha) / (n + 2.0 * alpha);
  prior.background = 1.0 - prior.crack;
  return prior;
}

GlobalFrequencies global_frequencies(const std::vector<Mask>& masks) {
  if (masks.empty()) {
    throw std::invalid_argument("global_frequencies: empty mask list");
  }
  std::uint64_t crack = 0, total = 0;
  for (const Mask& m : masks) {
    crack += static_cast<std::uint64_t>((m != 0).count());
    total += static_cast<std::uint64_t>(m.size());
  }
  GlobalFrequencies f;
  f.crack = static_cast<double>(crack) / static_cast<double>(total);
  f.background = static_cast<double>(total - crack) / static_cast<double>(total);
  return f;
}

PriorMap global_prior_map(const std::vector<Mask>& masks, Eigen::Index rows,
                          Eigen::Index cols, double alpha) {
  if (masks.empty()) {
    throw std::invalid_argument("global_prior_map: empty mask list");
  }
  if (alpha <= 0.0) {
    throw std::invalid_argument("global_prior_map: alpha must be positive");
  }
  std::uint64_t crack = 0, total = 0;
  for (const Mask& m : masks) {
    crack += static_cast<std::uint64_t>((m != 0).count());
    total += static_cast<std::uint64_t>(m.size());
  }
  const double p_crack = (static_cast<double>(crack) + alpha) /
                         (static_cast<double>(total) + 2.0 * alpha);
  PriorMap prior;
  prior.crack = Plane::Constant(rows, cols, p_crack);
  prior.background = Plane::Constant(rows, cols, 1.0 - p_crack);
  return prior;
}

ClassWeights median_frequency_weights(const GlobalFrequencies& f) {
  if (f.background <= 0.0 || f.crack <= 0.0) {
    throw std::invalid_argument(
        "median_frequency_weights: class frequency is zero, weight undefined");
  }
  const double median = 0.5 * (f.background + f.crack);
  return ClassWeights{median / f.background, median / f.crack};
}

ClassWeights uniform_weights() { return ClassWeights{1.0, 1.0}; }

}  // namespace crackseg
