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

#include "crackseg/decision.hpp"
#include "crackseg/metrics.hpp"
#include "crackseg/rng.hpp"
#include "oracles.hpp"

using namespace crackseg;

namespace {

ProbMap constant_probmap(double p_crack) {
  ProbMap p;
  p.crack = Plane::Constant(1, 1, p_crack);
  p.background = Plane::Constant(1, 1, 1.0 - p_crack);
  return p;
}

PriorMap constant_priormap(double prior_crack, Eigen::Index rows = 1,
                           Eigen::Index cols = 1) {
  PriorMap p;
  p.crack = Plane::Constant(rows, cols, prior_crack);
  p.background = Plane::Constant(rows, cols, 1.0 - prior_crack);
  return p;
}

}  // namespace

TEST_CASE("map rule picks the larger posterior, ties to crack") {
  CHECK(map_rule(constant_probmap(0.1))(0, 0) == 0);
  CHECK(map_rule(constant_probmap(0.9))(0, 0) == 1);
  CHECK(map_rule(constant_probmap(0.5))(0, 0) == 1);
}

TEST_CASE("map rule equals threshold rule at one half on random maps") {
  Rng rng(41);
  for (int trial = 0; trial < 100; ++trial) {
    const ProbMap p = oracle::random_probmap(8, 8, rng);
    const Mask via_map = map_rule(p);
    const Mask via_threshold = threshold_rule(p, 0.5);
    REQUIRE((via_map == via_threshold).all());
  }
}

TEST_CASE("ml rule boosts the rare class against a skewed prior") {
  // p = (0.7, 0.3) against prior (0.95, 0.05): 0.3/0.05 > 0.7/0.95
  const Mask m = ml_rule(constant_probmap(0.3), constant_priormap(0.05));
  CHECK(m(0, 0) == 1);
}

TEST_CASE("ml rule under a uniform prior is the map rule") {
  Rng rng(42);
  for (int trial = 0; trial < 50; ++trial) {
    const ProbMap p = oracle::random_probmap(8, 8, rng);
    const PriorMap uniform = constant_priormap(0.5, 8, 8);
    REQUIRE((ml_rule(p, uniform) == map_rule(p)).all());
  }
}

TEST_CASE("ml rule equals the ratio-form oracle exhaustively on 8x8 grids") {
  Rng rng(43);
  for (int trial = 0; trial < 100; ++trial) {
    const ProbMap p = oracle::random_probmap(8, 8, rng);
    const PriorMap prior = oracle::random_priormap(8, 8, 0.02, 0.98, rng);
    const Mask production = ml_rule(p, prior);
    const Mask ratio = oracle::ml_ratio_rule(p, prior);
    REQUIRE((production == ratio).all());
  }
}

TEST_CASE("ml rule rejects degenerate priors") {
  PriorMap bad = constant_priormap(0.5);
  bad.crack(0, 0) = 0.0;
  bad.background(0, 0) = 1.0;
  CHECK_THROWS_AS(ml_rule(constant_probmap(0.5), bad), std::invalid_argument);
}

TEST_CASE("threshold rule edge thresholds") {
  Rng rng(44);
  const ProbMap p = oracle::random_probmap(8, 8, rng);
  CHECK((threshold_rule(p, 0.0) == 1).all());

  ProbMap capped = p;
  capped.crack = p.crack.min(0.99);
  capped.background = 1.0 - capped.crack;
  CHECK((threshold_rule(capped, 1.0) == 0).all());

  // exactly 20% crack probability is labeled crack at t = 0.2
  CHECK(threshold_rule(constant_probmap(0.2), 0.2)(0, 0) == 1);
  CHECK_THROWS_AS(threshold_rule(p, 1.5), std::invalid_argument);
  CHECK_THROWS_AS(threshold_rule(p, -0.1), std::invalid_argument);
}

TEST_CASE("crack sets shrink as the threshold rises") {
  Rng rng(45);
  for (int trial = 0; trial < 30; ++trial) {
    const ProbMap p = oracle::random_probmap(10, 10, rng);
    const double t1 = rng.uniform(0.0, 1.0);
    const double t2 = rng.uniform(t1, 1.0);
    const Mask low = threshold_rule(p, t1);
    const Mask high = threshold_rule(p, t2);
    // every pixel labeled at the higher threshold is labeled at the lower
    REQUIRE(((high == 1) && (low == 0)).count() == 0);
  }
}

TEST_CASE("ml recall dominates map recall when priors stay at or below half") {
  Rng rng(46);
  for (int trial = 0; trial < 100; ++trial) {
    const ProbMap p = oracle::random_probmap(12, 12, rng);
    const PriorMap prior = oracle::random_priormap(12, 12, 0.01, 0.5, rng);
    const Mask truth = oracle::random_mask(12, 12, 0.2, rng);
    const ConfusionCounts ml = confusion(ml_rule(p, prior), truth);
    const ConfusionCounts map = confusion(map_rule(p), truth);
    REQUIRE(ml.tp >= map.tp);
    REQUIRE(ml.fn <= map.fn);
    REQUIRE(recall(ml) >= recall(map));
  }
}

TEST_CASE("adjusted score thresholds at one half reproduce the ml rule") {
  Rng rng(47);
  for (int trial = 0; trial < 50; ++trial) {
    const ProbMap p = oracle::random_probmap(8, 8, rng);
    const PriorMap prior = oracle::random_priormap(8, 8, 0.05, 0.45, rng);
    const Plane score = ml_adjusted_score(p, prior);
    CHECK(score.minCoeff() >= 0.0);
    CHECK(score.maxCoeff() <= 1.0);
    REQUIRE((threshold_plane(score, 0.5) == ml_rule(p, prior)).all());
  }
}

TEST_CASE("probmap validation rejects unnormalized grids") {
  ProbMap bad;
  bad.background = Plane::Constant(2, 2, 0.6);
  bad.crack = Plane::Constant(2, 2, 0.6);
  CHECK_THROWS_AS(map_rule(bad), std::invalid_argument);
}
