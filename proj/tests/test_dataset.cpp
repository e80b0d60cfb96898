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
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "crackseg/dataset.hpp"
#include "crackseg/rng.hpp"

using namespace crackseg;

namespace {

std::vector<std::string> make_ids(int n) {
  std::vector<std::string> ids;
  for (int i = 0; i < n; ++i) ids.push_back("img" + std::to_string(i));
  return ids;
}

}  // namespace

TEST_CASE("split counts follow the round-half-up rule") {
  const DatasetSplit s118 = split_dataset(make_ids(118), 1);
  CHECK(s118.test.size() == 24);
  CHECK(s118.val.size() == 19);
  CHECK(s118.train.size() == 75);

  const DatasetSplit s5 = split_dataset(make_ids(5), 1);
  CHECK(s5.test.size() == 1);
  CHECK(s5.val.size() == 1);
  CHECK(s5.train.size() == 3);
}

TEST_CASE("same seed gives identical partitions") {
  const auto ids = make_ids(37);
  const DatasetSplit a = split_dataset(ids, 99);
  const DatasetSplit b = split_dataset(ids, 99);
  CHECK(a.train == b.train);
  CHECK(a.val == b.val);
  CHECK(a.test == b.test);
  const DatasetSplit c = split_dataset(ids, 100);
  CHECK(a.test != c.test);  // different seed reshuffles
}

TEST_CASE("fewer than 5 samples is a split error") {
  CHECK_THROWS_AS(split_dataset(make_ids(4), 1), std::invalid_argument);
}

TEST_CASE("splits are disjoint, exhaustive and seed-deterministic on 100 sizes") {
  Rng rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 5 + static_cast<int>(rng.uniform_index(300));
    const auto ids = make_ids(n);
    const std::uint64_t seed = rng.raw();
    const DatasetSplit s = split_dataset(ids, seed);
    std::set<std::string> all;
    all.insert(s.train.begin(), s.train.end());
    all.insert(s.val.begin(), s.val.end());
    all.insert(s.test.begin(), s.test.end());
    CHECK(all.size() == static_cast<std::size_t>(n));
    CHECK(s.train.size() + s.val.size() + s.test.size() ==
          static_cast<std::size_t>(n));
    CHECK(!s.train.empty());
    CHECK(!s.val.empty());
    CHECK(!s.test.empty());
    const DatasetSplit again = split_dataset(ids, seed);
    CHECK(again.train == s.train);
  }
}

TEST_CASE("count 0 gives an empty batch") {
  SynthConfig cfg;
  cfg.count = 0;
  CHECK(gen_synthetic(cfg).empty());
}

TEST_CASE("batch crack fraction lands inside the target window") {
  SynthConfig cfg;
  cfg.count = 12;
  cfg.height = 64;
  cfg.width = 64;
  cfg.min_crack_fraction = 0.01;
  cfg.max_crack_fraction = 0.05;
  cfg.seed = 7;
  const auto batch = gen_synthetic(cfg);
  REQUIRE(batch.size() == 12);
  const double frac = batch_crack_fraction(batch);
  CHECK(frac >= 0.01);
  CHECK(frac <= 0.05);
}

TEST_CASE("every synthetic mask is nonempty with fraction below one half") {
  SynthConfig cfg;
  cfg.count = 20;
  cfg.height = 32;
  cfg.width = 48;
  cfg.seed = 123;
  for (const ImageSample& s : gen_synthetic(cfg)) {
    const double f = crack_fraction(s.mask);
    CHECK(f > 0.0);
    CHECK(f < 0.5);
    CHECK(s.pixels.size() == 3);
    CHECK(s.pixels[0].rows() == 32);
    CHECK(s.pixels[0].cols() == 48);
    CHECK(s.pixels[0].minCoeff() >= 0.0);
    CHECK(s.pixels[0].maxCoeff() <= 1.0);
  }
}

TEST_CASE("same config and seed give bit-identical samples") {
  SynthConfig cfg;
  cfg.count = 4;
  cfg.height = 32;
  cfg.width = 32;
  cfg.seed = 77;
  const auto a = gen_synthetic(cfg);
  const auto b = gen_synthetic(cfg);
  REQUIRE(a.size() == b.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    CHECK(a[k].id == b[k].id);
    CHECK((a[k].mask == b[k].mask).all());
    for (int c = 0; c < 3; ++c) {
      CHECK((a[k].pixels[c] == b[k].pixels[c]).all());
    }
  }
}

TEST_CASE("unreachable crack fraction is a generation error") {
  // a 3-wide stamp on a 4x4 image overshoots a 5-10% window on every attempt
  SynthConfig cfg;
  cfg.count = 1;
  cfg.height = 4;
  cfg.width = 4;
  cfg.min_stroke_width = 3;
  cfg.max_stroke_width = 3;
  cfg.min_crack_fraction = 0.05;
  cfg.max_crack_fraction = 0.10;
  cfg.seed = 1;
  CHECK_THROWS_AS(gen_synthetic(cfg), std::runtime_error);
}

TEST_CASE("invalid target fraction windows are rejected") {
  SynthConfig cfg;
  cfg.min_crack_fraction = 0.0;
  CHECK_THROWS_AS(validate(cfg), std::invalid_argument);
  cfg.min_crack_fraction = 0.1;
  cfg.max_crack_fraction = 0.6;
  CHECK_THROWS_AS(validate(cfg), std::invalid_argument);
}
