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

#include <cstdint>
#include <string>
#include <vector>

#include "crackseg/types.hpp"

namespace crackseg {

/// Pixel-level segmentation outcomes with crack as the positive class.
struct ConfusionCounts {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;
  std::uint64_t tn = 0;

  std::uint64_t total() const { return tp + fp + fn + tn; }

  ConfusionCounts& operator+=(const ConfusionCounts& o) {
    tp += o.tp;
    fp += o.fp;
    fn += o.fn;
    tn += o.tn;
    return *this;
  }
};

struct PrPoint {
  double threshold;
  double precision;
  double recall;
};

struct PrCurve {
  std::vector<PrPoint> points;
};

struct MetricsReport {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double mpa = 0.0;
  double global_accuracy = 0.0;
};

ConfusionCounts confusion(const Mask& pred, const Mask& truth);

// Degenerate conventions: precision = 1 when no pixel is predicted crack,
// recall = 1 when the truth has no cracks, f1 = 0 when p = r = 0.
double precision(const ConfusionCounts& c);
double recall(const ConfusionCounts& c);
double f1_score(double p, double r);
double global_accuracy(const ConfusionCounts& c);

/// 101 evenly spaced thresholds 0.00, 0.01, ..., 1.00.
std::vector<double> default_thresholds();

// For each threshold t, pixels with crack score >= t are labeled crack.
// Counts are pooled over all images before computing P and R (micro-average).
PrCurve pr_curve(const std::vector<Plane>& crack_scores,
                 const std::vector<Mask>& truths,
                 const std::vector<double>& thresholds);
PrCurve pr_curve(const std::vector<ProbMap>& probs,
                 const std::vector<Mask>& truths,
                 const std::vector<double>& thresholds);

// Trapezoidal area of precision over recall. Points are sorted by ascending
// recall, the anchor (R=0, P=1) is prepended, and equal-recall points are
// deduplicated keeping the max precision.
double mpa(const PrCurve& curve);

/// CSV with header threshold,precision,recall; 12 significant digits.
std::string pr_curve_csv(const PrCurve& curve);
PrCurve parse_pr_curve_csv(const std::string& csv);

}  // namespace crackseg
