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
#include "crackseg/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <sstream>

namespace crackseg {

ConfusionCounts confusion(const Mask& pred, const Mask& truth) {
  if (pred.rows() != truth.rows() || pred.cols() != truth.cols()) {
    throw std::invalid_argument("confusion: dimension mismatch");
  }
  ConfusionCounts c;
  const auto p = pred != 0;
  const auto t = truth != 0;
  c.tp = static_cast<std::uint64_t>((p && t).count());
  c.fp = static_cast<std::uint64_t>((p && !t).count());
  c.fn = static_cast<std::uint64_t>((!p && t).count());
  c.tn = static_cast<std::uint64_t>((!p && !t).count());
  return c;
}

double precision(const ConfusionCounts& c) {
  const std::uint64_t denom = c.tp + c.fp;
  if (denom == 0) return 1.0;
  return static_cast<double>(c.tp) / static_cast<double>(denom);
}

double recall(const ConfusionCounts& c) {
  const std::uint64_t denom = c.tp + c.fn;
  if (denom == 0) return 1.0;
  return static_cast<double>(c.tp) / static_cast<double>(denom);
}

double f1_score(double p, double r) {
  if (p < 0.0 || p > 1.0 || r < 0.0 || r > 1.0) {
    throw std::invalid_argument("f1_score: arguments outside [0,1]");
  }
  if (p == 0.0 && r == 0.0) return 0.0;
  return 2.0 * p * r / (p + r);
}

double global_accuracy(const ConfusionCounts& c) {
  const std::uint64_t total = c.total();
  if (total == 0) return 1.0;
  return static_cast<double>(c.tp + c.tn) / static_cast<double>(total);
}

std::vector<double> default_thresholds() {
  std::vector<double> t(101);
  for (int i = 0; i <= 100; ++i) t[i] = i / 100.0;
  return t;
}

PrCurve pr_curve(const std::vector<Plane>& crack_scores,
                 const std::vector<Mask>& truths,
                 const std::vector<double>& thresholds) {
  if (crack_scores.size() != truths.size()) {
    throw std::invalid_argument("pr_curve: score/truth lists misaligned");
  }
  for (std::size_t k = 0; k < crack_scores.size(); ++k) {
    if (crack_scores[k].rows() != truths[k].rows() ||
        crack_scores[k].cols() != truths[k].cols()) {
      throw std::invalid_argument("pr_curve: score/truth shape mismatch");
    }
  }
  for (double t : thresholds) {
    if (t < 0.0 || t > 1.0) {
      throw std::invalid_argument("pr_curve: threshold outside [0,1]");
    }
  }
  PrCurve curve;
  curve.points.reserve(thresholds.size());
  for (double t : thresholds) {
    ConfusionCounts c;
    for (std::size_t k = 0; k < crack_scores.size(); ++k) {
      const auto pred = crack_scores[k] >= t;
      const auto pos = truths[k] != 0;
      c.tp += static_cast<std::uint64_t>((pred && pos).count());
      c.fp += static_cast<std::uint64_t>((pred && !pos).count());
      c.fn += static_cast<std::uint64_t>((!pred && pos).count());
      c.tn += static_cast<std::uint64_t>((!pred && !pos).count());
    }
    curve.points.push_back(PrPoint{t, precision(c), recall(c)});
  }
  return curve;
}

PrCurve pr_curve(const std::vector<ProbMap>& probs,
                 const std::vector<Mask>& truths,
                 const std::vector<double>& thresholds) {
  std::vector<Plane> scores;
  scores.reserve(probs.size());
  for (const ProbMap& p : probs) scores.push_back(p.crack);
  return pr_curve(scores, truths, thresholds);
}

double mpa(const PrCurve& curve) {
  if (curve.points.empty()) {
    throw std::invalid_argument("mpa: empty curve");
  }
  std::vector<std::pair<double, double>> pts;  // (recall, precision)
  pts.reserve(curve.points.size() + 1);
  pts.emplace_back(0.0, 1.0);  // anchor
  for (const PrPoint& p : curve.points) pts.emplace_back(p.recall, p.precision);
  std::sort(pts.begin(), pts.end());
  // Equal recalls collapse to the max precision.
  std::vector<std::pair<double, double>> dedup;
  for (const auto& rp : pts) {
    if (!dedup.empty() && dedup.back().first == rp.first) {
      dedup.back().second = std::max(dedup.back().second, rp.second);
    } else {
      dedup.push_back(rp);
    }
  }
  double area = 0.0;
  for (std::size_t i = 1; i < dedup.size(); ++i) {
    area += (dedup[i].first - dedup[i - 1].first) *
            0.5 * (dedup[i].second + dedup[i - 1].second);
  }
  return area;
}

std::string pr_curve_csv(const PrCurve& curve) {
  std::string out = "threshold,precision,recall\n";
  char buf[128];
  for (const PrPoint& p : curve.points) {
    std::snprintf(buf, sizeof(buf), "%.12g,%.12g,%.12g\n", p.threshold,
                  p.precision, p.recall);
    out += buf;
  }
  return out;
}

PrCurve parse_pr_curve_csv(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  if (!std::getline(in, line) || line != "threshold,precision,recall") {
    throw FormatError("pr curve CSV: missing or wrong header");
  }
  PrCurve curve;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    PrPoint p{};
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &p.threshold, &p.precision,
                    &p.recall) != 3) {
      throw FormatError("pr curve CSV: malformed row: " + line);
    }
    curve.points.push_back(p);
  }
  return curve;
}

}  // namespace crackseg
