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
#include "crackseg/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>

#include "crackseg/pnm.hpp"
#include "crackseg/rng.hpp"

namespace crackseg {

void validate(const SynthConfig& config) {
  if (config.count < 0) throw std::invalid_argument("synth: negative count");
  if (config.height <= 0 || config.width <= 0) {
    throw std::invalid_argument("synth: non-positive dimensions");
  }
  if (config.min_strokes < 1 || config.max_strokes < config.min_strokes) {
    throw std::invalid_argument("synth: bad strokes-per-image range");
  }
  if (config.min_stroke_width < 1 ||
      config.max_stroke_width < config.min_stroke_width) {
    throw std::invalid_argument("synth: bad stroke-width range");
  }
  if (!(config.min_crack_fraction > 0.0) ||
      !(config.max_crack_fraction < 0.5) ||
      config.min_crack_fraction >= config.max_crack_fraction) {
    throw std::invalid_argument(
        "synth: target-crack-fraction range must lie within (0, 0.5)");
  }
  if (config.noise_amplitude < 0.0) {
    throw std::invalid_argument("synth: negative noise amplitude");
  }
}

ImageSample load_sample(const std::string& dir, const std::string& id) {
  namespace fs = std::filesystem;
  ImageSample s;
  s.id = id;
  s.pixels = load_image((fs::path(dir) / (id + ".ppm")).string());
  s.mask = load_mask((fs::path(dir) / (id + "_mask.pgm")).string());
  if (s.mask.rows() != s.pixels[0].rows() ||
      s.mask.cols() != s.pixels[0].cols()) {
    throw FormatError(id + ": mask dimensions do not match the paired image");
  }
  return s;
}

std::vector<ImageSample> load_corpus(const std::string& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) {
    throw FormatError(dir + ": not a directory");
  }
  std::vector<std::string> ids;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const fs::path p = entry.path();
    if (p.extension() == ".ppm") ids.push_back(p.stem().string());
  }
  std::sort(ids.begin(), ids.end());
  std::vector<ImageSample> corpus;
  corpus.reserve(ids.size());
  for (const std::string& id : ids) corpus.push_back(load_sample(dir, id));
  return corpus;
}

namespace {

std::size_t round_half_up(double x) {
  return static_cast<std::size_t>(std::floor(x + 0.5));
}

}  // namespace

DatasetSplit split_dataset(const std::vector<std::string>& ids,
                           std::uint64_t seed) {
  const std::size_t n = ids.size();
  if (n < 5) {
    throw std::invalid_argument(
        "split_dataset: need at least 5 samples to populate all partitions");
  }
  std::vector<std::string> shuffled = ids;
  Rng rng(seed);
  for (std::size_t i = n - 1; i > 0; --i) {
    const std::size_t j = rng.uniform_index(i + 1);
    std::swap(shuffled[i], shuffled[j]);
  }
  const std::size_t n_test = round_half_up(0.2 * static_cast<double>(n));
  const std::size_t n_val =
      round_half_up(0.2 * static_cast<double>(n - n_test));
  DatasetSplit split;
  split.seed = seed;
  split.test.assign(shuffled.begin(), shuffled.begin() + n_test);
  split.val.assign(shuffled.begin() + n_test,
                   shuffled.begin() + n_test + n_val);
  split.train.assign(shuffled.begin() + n_test + n_val, shuffled.end());
  return split;
}

double crack_fraction(const Mask& mask) {
  return static_cast<double>((mask != 0).count()) /
         static_cast<double>(mask.size());
}

double batch_crack_fraction(const std::vector<ImageSample>& samples) {
  std::uint64_t crack = 0, total = 0;
  for (const ImageSample& s : samples) {
    crack += static_cast<std::uint64_t>((s.mask != 0).count());
    total += static_cast<std::uint64_t>(s.mask.size());
  }
  return total == 0 ? 0.0 : static_cast<double>(crack) / static_cast<double>(total);
}

namespace {

// Low-amplitude value noise: a coarse random lattice, bilinearly upsampled,
// plus per-pixel jitter.
Plane value_noise(int rows, int cols, double amplitude, Rng& rng) {
  const int cell = 8;
  const int gr = rows / cell + 2;
  const int gc = cols / cell + 2;
  Plane lattice(gr, gc);
  for (int i = 0; i < gr; ++i) {
    for (int j = 0; j < gc; ++j) lattice(i, j) = rng.uniform(-1.0, 1.0);
  }
  Plane noise(rows, cols);
  for (int i = 0; i < rows; ++i) {
    const double fy = static_cast<double>(i) / cell;
    const int y0 = static_cast<int>(fy);
    const double ty = fy - y0;
    for (int j = 0; j < cols; ++j) {
      const double fx = static_cast<double>(j) / cell;
      const int x0 = static_cast<int>(fx);
      const double tx = fx - x0;
      const double v =
          lattice(y0, x0) * (1 - ty) * (1 - tx) +
          lattice(y0 + 1, x0) * ty * (1 - tx) +
          lattice(y0, x0 + 1) * (1 - ty) * tx +
          lattice(y0 + 1, x0 + 1) * ty * tx;
      noise(i, j) = amplitude * (v + 0.35 * rng.uniform(-1.0, 1.0));
    }
  }
  return noise;
}

// Stamps a w×w square centered (floor bias) on (r, c); returns new pixels.
std::uint64_t stamp(Mask& mask, int r, int c, int w) {
  const int lo = -(w - 1) / 2;
  const int hi = w / 2;
  std::uint64_t added = 0;
  for (int dr = lo; dr <= hi; ++dr) {
    for (int dc = lo; dc <= hi; ++dc) {
      const int rr = r + dr, cc = c + dc;
      if (rr >= 0 && rr < mask.rows() && cc >= 0 && cc < mask.cols() &&
          !mask(rr, cc)) {
        mask(rr, cc) = 1;
        ++added;
      }
    }
  }
  return added;
}

// One attempt at a stroke mask reaching >= budget crack pixels.
// Returns the realized mask; the caller checks the fraction window.
Mask draw_strokes(const SynthConfig& cfg, std::uint64_t budget, Rng& rng) {
  Mask mask = Mask::Zero(cfg.height, cfg.width);
  const int n_strokes = rng.uniform_int(cfg.min_strokes, cfg.max_strokes);
  const std::uint64_t step_cap = 16 * budget + 64;
  std::uint64_t marked = 0;
  for (int s = 0; s < n_strokes; ++s) {
    const int w = rng.uniform_int(cfg.min_stroke_width, cfg.max_stroke_width);
    double y = rng.uniform(0.0, cfg.height - 1.0);
    double x = rng.uniform(0.0, cfg.width - 1.0);
    double heading = rng.uniform(0.0, 6.283185307179586);
    std::uint64_t steps = 0;
    while (steps++ < step_cap) {
      marked += stamp(mask, static_cast<int>(std::lround(y)),
                      static_cast<int>(std::lround(x)), w);
      if (marked >= budget) {
        return mask;
      }
      heading += rng.normal(0.0, 0.25);
      y += std::sin(heading);
      x += std::cos(heading);
      // reflect at borders so walks stay inside the image
      if (y < 0) { y = -y; heading = -heading; }
      if (y > cfg.height - 1) { y = 2.0 * (cfg.height - 1) - y; heading = -heading; }
      if (x < 0) { x = -x; heading = 3.141592653589793 - heading; }
      if (x > cfg.width - 1) { x = 2.0 * (cfg.width - 1) - x; heading = 3.141592653589793 - heading; }
    }
  }
  return mask;
}

ImageSample synth_one(const SynthConfig& cfg, std::uint64_t sample_seed,
                      const std::string& id) {
  Rng rng(sample_seed);
  const double area = static_cast<double>(cfg.height) * cfg.width;
  const double span = cfg.max_crack_fraction - cfg.min_crack_fraction;
  // Target the middle 80% of the window so stamp granularity cannot push the
  // realized fraction outside it.
  const double t_lo = cfg.min_crack_fraction + 0.1 * span;
  const double t_hi = cfg.max_crack_fraction - 0.1 * span;

  constexpr int kMaxAttempts = 20;
  Mask mask;
  bool ok = false;
  for (int attempt = 0; attempt < kMaxAttempts && !ok; ++attempt) {
    const double target = rng.uniform(t_lo, t_hi);
    const auto budget =
        static_cast<std::uint64_t>(std::ceil(target * area));
    mask = draw_strokes(cfg, budget, rng);
    const double frac = crack_fraction(mask);
    ok = frac >= cfg.min_crack_fraction && frac <= cfg.max_crack_fraction;
  }
  if (!ok) {
    throw std::runtime_error(
        "gen_synthetic: stroke placement failed to reach the target crack "
        "fraction for sample " + id);
  }

  const double base = rng.uniform(0.5, 0.7);
  const Plane noise = value_noise(cfg.height, cfg.width, cfg.noise_amplitude, rng);
  const double crack_tone = rng.uniform(0.06, 0.2);

  ImageSample sample;
  sample.id = id;
  sample.mask = mask;
  sample.pixels.assign(3, Plane(cfg.height, cfg.width));
  for (int c = 0; c < 3; ++c) {
    const double tint = rng.uniform(-0.02, 0.02);
    sample.pixels[c] = (base + tint + noise).min(1.0).max(0.0);
  }
  for (int i = 0; i < cfg.height; ++i) {
    for (int j = 0; j < cfg.width; ++j) {
      if (mask(i, j)) {
        const double v =
            std::clamp(crack_tone + 0.03 * rng.uniform(-1.0, 1.0), 0.0, 1.0);
        for (int c = 0; c < 3; ++c) sample.pixels[c](i, j) = v;
      }
    }
  }
  return sample;
}

}  // namespace

std::vector<ImageSample> gen_synthetic(const SynthConfig& config) {
  validate(config);
  std::vector<ImageSample> samples;
  samples.reserve(config.count);
  for (int i = 0; i < config.count; ++i) {
    char id[32];
    std::snprintf(id, sizeof(id), "synth%04d", i);
    samples.push_back(
        synth_one(config, derive_seed(config.seed, i), id));
  }
  return samples;
}

}  // namespace crackseg
