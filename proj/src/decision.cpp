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
#include "crackseg/decision.hpp"

namespace crackseg {

Mask map_rule(const ProbMap& p) {
  validate_probmap(p);
  return (p.crack >= p.background).cast<std::uint8_t>();
}

Mask ml_rule(const ProbMap& p, const PriorMap& priors) {
  validate_probmap(p);
  validate_priormap(priors);
  if (p.rows() != priors.rows() || p.cols() != priors.cols()) {
    throw std::invalid_argument("ml_rule: probability/prior shape mismatch");
  }
  return (p.crack >= priors.crack).cast<std::uint8_t>();
}

Mask threshold_rule(const ProbMap& p, double t) {
  validate_probmap(p);
  return threshold_plane(p.crack, t);
}

Mask threshold_plane(const Plane& crack_score, double t) {
  if (t < 0.0 || t > 1.0) {
    throw std::invalid_argument("threshold_rule: t outside [0,1]");
  }
  return (crack_score >= t).cast<std::uint8_t>();
}

Plane ml_adjusted_score(const ProbMap& p, const PriorMap& priors) {
  validate_probmap(p);
  validate_priormap(priors);
  if (p.rows() != priors.rows() || p.cols() != priors.cols()) {
    throw std::invalid_argument(
        "ml_adjusted_score: probability/prior shape mismatch");
  }
  const Plane lc = p.crack / priors.crack;
  const Plane lb = p.background / priors.background;
  return lc / (lc + lb);
}

}  // namespace crackseg
