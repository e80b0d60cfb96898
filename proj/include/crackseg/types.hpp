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

#include <Eigen/Core>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace crackseg {

/// A single H×W grid of doubles. Row index = image row (y), column = x.
using Plane = Eigen::ArrayXXd;

/// Binary label grid: 0 = background, 1 = crack.
using Mask = Eigen::Array<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic>;

/// A multi-channel image or feature map: one Plane per channel, equal sizes.
using Channels = std::vector<Plane>;

/// Per-pixel two-class softmax output. Each position sums to 1 within 1e-9.
struct ProbMap {
  Plane background;
  Plane crack;

  Eigen::Index rows() const { return crack.rows(); }
  Eigen::Index cols() const { return crack.cols(); }
};

/// Per-pixel-position class priors, smoothed so every entry is in (0,1).
struct PriorMap {
  Plane background;
  Plane crack;

  Eigen::Index rows() const { return crack.rows(); }
  Eigen::Index cols() const { return crack.cols(); }
};

/// Malformed or unsupported file contents (PNM, PMAP, NETP, config).
struct FormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline void validate_probmap(const ProbMap& p) {
  if (p.background.rows() != p.crack.rows() ||
      p.background.cols() != p.crack.cols()) {
    throw std::invalid_argument("ProbMap channels differ in shape");
  }
  if (((p.background + p.crack) - 1.0).abs().maxCoeff() > 1e-9) {
    throw std::invalid_argument("ProbMap positions do not sum to 1 within 1e-9");
  }
  if (p.background.minCoeff() < 0.0 || p.crack.minCoeff() < 0.0 ||
      p.background.maxCoeff() > 1.0 || p.crack.maxCoeff() > 1.0) {
    throw std::invalid_argument("ProbMap entries outside [0,1]");
  }
}

inline void validate_priormap(const PriorMap& p) {
  if (p.background.rows() != p.crack.rows() ||
      p.background.cols() != p.crack.cols()) {
    throw std::invalid_argument("PriorMap channels differ in shape");
  }
  if (((p.background + p.crack) - 1.0).abs().maxCoeff() > 1e-12) {
    throw std::invalid_argument("PriorMap positions do not sum to 1 within 1e-12");
  }
  if (p.background.minCoeff() <= 0.0 || p.crack.minCoeff() <= 0.0 ||
      p.background.maxCoeff() >= 1.0 || p.crack.maxCoeff() >= 1.0) {
    throw std::invalid_argument("PriorMap entries must lie strictly inside (0,1)");
  }
}

}  // namespace crackseg
