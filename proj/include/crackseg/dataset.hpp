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

/// One RGB image with its binary ground-truth mask (crack = positive class).
struct ImageSample {
  std::string id;
  Channels pixels;  // 3 planes, intensities in [0,1]
  Mask mask;        // same H×W, values {0,1}
};

struct DatasetSplit {
  std::vector<std::string> train;
  std::vector<std::string> val;
  std::vector<std::string> test;
  std::uint64_t seed = 0;
};

struct SynthConfig {
  int count = 0;
  int height = 64;
  int width = 64;
  int min_strokes = 1;
  int max_strokes = 3;
  int min_stroke_width = 1;
  int max_stroke_width = 2;
  double min_crack_fraction = 0.01;
  double max_crack_fraction = 0.05;
  double noise_amplitude = 0.05;
  std::uint64_t seed = 0;
};

void validate(const SynthConfig& config);

/// Loads `<id>.ppm` + `<id>_mask.pgm`; rejects mismatched dimensions.
ImageSample load_sample(const std::string& dir, const std::string& id);

/// Scans a corpus directory for `<id>.ppm` / `<id>_mask.pgm` pairs, sorted by id.
std::vector<ImageSample> load_corpus(const std::string& dir);

// Seeded Fisher-Yates shuffle, then test = round(0.2 N), val = round(0.2 (N -
// test)), train = remainder (round-half-up). Requires N >= 5 so that every
// partition is nonempty.
DatasetSplit split_dataset(const std::vector<std::string>& ids,
                           std::uint64_t seed);

// Noisy textured backgrounds crossed by dark random-walk strokes; the mask
// marks exactly the stroke pixels. The realized crack fraction of the batch
// lies inside [min_crack_fraction, max_crack_fraction]. Deterministic in seed.
std::vector<ImageSample> gen_synthetic(const SynthConfig& config);

double crack_fraction(const Mask& mask);
double batch_crack_fraction(const std::vector<ImageSample>& samples);

}  // namespace crackseg
