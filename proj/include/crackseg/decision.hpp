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

#include "crackseg/types.hpp"

namespace crackseg {

// Hard per-pixel decision rules. Ties break toward crack (the positive
// class) in every rule.

/// Maximum a-posteriori: crack iff p_crack >= p_background.
Mask map_rule(const ProbMap& p);

// Maximum likelihood with per-position priors: argmax of p_c / prior_c.
// Implemented through the two-class identity crack iff p_crack >= prior_crack,
// which avoids division. Priors must lie strictly inside (0,1).
Mask ml_rule(const ProbMap& p, const PriorMap& priors);

/// crack iff p_crack >= t, for t in [0,1].
Mask threshold_rule(const ProbMap& p, double t);

/// threshold_rule on a bare crack-score plane.
Mask threshold_plane(const Plane& crack_score, double t);

// Prior-adjusted crack score: (p_crack/prior_crack) normalized over the two
// classes. Thresholding this score at 0.5 is algebraically the ML rule, and
// sweeping it yields the ML strategy's precision-recall curve.
Plane ml_adjusted_score(const ProbMap& p, const PriorMap& priors);

}  // namespace crackseg
