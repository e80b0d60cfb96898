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

#include <cmath>

#include "crackseg/bayesopt.hpp"
#include "crackseg/rng.hpp"
#include "oracles.hpp"

using namespace crackseg;

namespace {

GpState sine_gp(int n_points, double noise) {
  Eigen::MatrixXd x(n_points, 1);
  Eigen::VectorXd y(n_points);
  for (int i = 0; i < n_points; ++i) {
    x(i, 0) = (i + 0.5) / n_points;
    y(i) = std::sin(6.0 * x(i, 0));
  }
  return gp_build(x, y, 1.0, Eigen::VectorXd::Constant(1, 0.25), noise);
}

}  // namespace

TEST_CASE("a noiseless GP interpolates its training targets") {
  const GpState gp = sine_gp(5, 0.0);
  for (Eigen::Index i = 0; i < gp.inputs.rows(); ++i) {
    const auto [mean, var] = gp_posterior(gp, gp.inputs.row(i).transpose());
    CHECK(std::abs(mean - gp.values(i)) <= 1e-6);
    CHECK(var >= 0.0);
    CHECK(var <= 1e-8);
  }
}

TEST_CASE("far from all data the posterior reverts to the prior") {
  Eigen::MatrixXd x(3, 2);
  x << 0.1, 0.1, 0.15, 0.12, 0.09, 0.14;
  Eigen::VectorXd y(3);
  y << 1.0, 2.0, 3.0;
  const double signal = 0.7;
  const GpState gp =
      gp_build(x, y, signal, Eigen::VectorXd::Constant(2, 0.05), 0.0);
  Eigen::VectorXd far(2);
  far << 0.95, 0.95;  // more than 10 lengthscales away
  const auto [mean, var] = gp_posterior(gp, far);
  CHECK(std::abs(mean - y.mean()) <= 1e-6);
  CHECK(std::abs(var - signal) <= 1e-6);
}

TEST_CASE("posterior means match the direct-inversion oracle on a sine") {
  const int n = 5;
  Eigen::MatrixXd x(n, 1);
  Eigen::VectorXd y(n);
  for (int i = 0; i < n; ++i) {
    x(i, 0) = (i + 0.5) / n;
    y(i) = std::sin(6.0 * x(i, 0));
  }
  const Eigen::VectorXd ls = Eigen::VectorXd::Constant(1, 0.2);
  const double signal = 1.3, noise = 1e-4;
  const GpState gp = gp_build(x, y, signal, ls, noise);
  for (int k = 0; k < 50; ++k) {
    Eigen::VectorXd q(1);
    q << k / 49.0;
    const auto [mean, var] = gp_posterior(gp, q);
    const auto [mean_o, var_o] =
        oracle::gp_posterior_direct(x, y, signal, ls, noise, q);
    REQUIRE(std::abs(mean - mean_o) <= 1e-8);
    REQUIRE(std::abs(var - std::max(0.0, var_o)) <= 1e-8);
  }
}

TEST_CASE("posterior variance is nonnegative at 1000 random queries") {
  Rng rng(70);
  for (int round = 0; round < 10; ++round) {
    const int n = 2 + static_cast<int>(rng.uniform_index(12));
    const int d = 1 + static_cast<int>(rng.uniform_index(3));
    Eigen::MatrixXd x(n, d);
    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < d; ++j) x(i, j) = rng.uniform();
      y(i) = rng.uniform(-2.0, 2.0);
    }
    const GpState gp = gp_fit(x, y, rng.raw());
    for (int q = 0; q < 100; ++q) {
      Eigen::VectorXd point(d);
      for (int j = 0; j < d; ++j) point(j) = rng.uniform();
      const auto [mean, var] = gp_posterior(gp, point);
      REQUIRE(var >= 0.0);
      REQUIRE(std::isfinite(mean));
    }
  }
}

TEST_CASE("expected improvement closed form") {
  CHECK(expected_improvement(0.5, 0.0, 0.7) == 0.0);
  CHECK(expected_improvement(0.9, 0.0, 0.7) == doctest::Approx(0.2).epsilon(1e-15));
  // EI at mu = best, sigma = 1 is phi(0) = 1/sqrt(2 pi)
  const double ei = expected_improvement(0.0, 1.0, 0.0);
  CHECK(ei == doctest::Approx(0.3989422804014327).epsilon(1e-9));
  CHECK(std::abs(ei - 0.39894) <= 1e-5);
  CHECK_THROWS_AS(expected_improvement(0.0, -1.0, 0.0), std::invalid_argument);
}

TEST_CASE("expected improvement matches numerical quadrature") {
  Rng rng(71);
  for (int trial = 0; trial < 50; ++trial) {
    const double mean = rng.uniform(-2.0, 2.0);
    const double sigma = rng.uniform(0.05, 2.0);
    const double best = rng.uniform(-2.0, 2.0);
    const double closed = expected_improvement(mean, sigma * sigma, best);
    const double quad = oracle::ei_quadrature(mean, sigma, best);
    REQUIRE(closed == doctest::Approx(quad).epsilon(1e-5));
    REQUIRE(closed >= 0.0);
  }
}

TEST_CASE("EI vanishes at noiseless observed points and nowhere below zero") {
  const GpState gp = sine_gp(6, 0.0);
  const double best = gp.values.maxCoeff();
  for (Eigen::Index i = 0; i < gp.inputs.rows(); ++i) {
    const auto [mean, var] = gp_posterior(gp, gp.inputs.row(i).transpose());
    if (gp.values(i) < best) {
      CHECK(expected_improvement(mean, var, best) <= 1e-7);
    }
  }
  Rng rng(72);
  for (int q = 0; q < 1000; ++q) {
    Eigen::VectorXd point(1);
    point << rng.uniform();
    const auto [mean, var] = gp_posterior(gp, point);
    REQUIRE(expected_improvement(mean, var, best) >= 0.0);
  }
}

TEST_CASE("proposals are deterministic and avoid a lone observation") {
  Eigen::MatrixXd x(1, 2);
  x << 0.4, 0.6;
  Eigen::VectorXd y(1);
  y << 0.3;
  const GpState gp =
      gp_build(x, y, 1.0, Eigen::VectorXd::Constant(2, 0.2), 0.0);
  const Eigen::VectorXd a = propose_next(gp, 9);
  const Eigen::VectorXd b = propose_next(gp, 9);
  CHECK((a.array() == b.array()).all());
  CHECK((a - x.row(0).transpose()).norm() > 1e-6);
}

TEST_CASE("an all-ties EI landscape returns the first candidate") {
  // huge lengthscales + a single observation make the posterior exactly the
  // prior mean with collapsed variance: EI is 0 at every candidate
  Eigen::MatrixXd x(1, 1);
  x << 0.5;
  Eigen::VectorXd y(1);
  y << 0.2;
  const GpState gp =
      gp_build(x, y, 1e-18, Eigen::VectorXd::Constant(1, 1e6), 0.0);
  const std::uint64_t seed = 4242;
  const Eigen::VectorXd pick = propose_next(gp, seed);
  Rng rng(seed);
  CHECK(pick(0) == rng.uniform());  // candidate index 0 wins the tie
}

TEST_CASE("tune recovers the optimum of a 1-D parabola") {
  // grid-search oracle for the true optimum
  double best_grid = -1e300, best_grid_x = 0.0;
  for (int i = 0; i <= 10000; ++i) {
    const double v = i / 10000.0;
    const double f = -(v - 0.3) * (v - 0.3);
    if (f > best_grid) {
      best_grid = f;
      best_grid_x = v;
    }
  }
  REQUIRE(best_grid_x == doctest::Approx(0.3).epsilon(1e-9));

  SearchSpace space;
  space.dims = {{"x", 0.0, 1.0, DimScale::linear}};
  const Objective objective = [](const std::map<std::string, double>& p) {
    const double x = p.at("x");
    return -(x - 0.3) * (x - 0.3);
  };
  int hits = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const TuneResult r = tune(objective, space, 20, seed);
    REQUIRE(r.history.size() == 20);
    if (std::abs(r.best_params.at("x") - best_grid_x) <= 0.05) ++hits;
  }
  CHECK(hits >= 8);
}

TEST_CASE("budget four runs the pure random design") {
  SearchSpace space;
  space.dims = {{"x", 0.0, 1.0, DimScale::linear}};
  const Objective objective = [](const std::map<std::string, double>& p) {
    return std::sin(5.0 * p.at("x"));
  };
  const TuneResult r = tune(objective, space, 4, 11);
  REQUIRE(r.history.size() == 4);
  double best = -1e300;
  for (const TuneEntry& e : r.history) best = std::max(best, e.objective);
  CHECK(r.best_objective == best);
}

TEST_CASE("a constant objective returns the constant") {
  SearchSpace space;
  space.dims = {{"x", 0.0, 1.0, DimScale::linear}};
  const Objective objective = [](const std::map<std::string, double>&) {
    return 0.42;
  };
  const TuneResult r = tune(objective, space, 8, 5);
  CHECK(r.best_objective == 0.42);
  for (const TuneEntry& e : r.history) CHECK(e.objective == 0.42);
}

TEST_CASE("best objective is non-decreasing in the budget under one seed") {
  SearchSpace space;
  space.dims = {{"x", 0.0, 1.0, DimScale::linear}};
  const Objective objective = [](const std::map<std::string, double>& p) {
    const double x = p.at("x");
    return std::sin(7.0 * x) + 0.5 * x;
  };
  // budgets sharing n_init = 3 form prefix runs of each other
  double prev = -1e300;
  for (int budget : {6, 10, 12}) {
    const TuneResult r = tune(objective, space, budget, 3);
    CHECK(r.best_objective >= prev);
    prev = r.best_objective;
  }
}

TEST_CASE("log10 dimensions decode inside their bounds") {
  SearchSpace space;
  space.dims = {{"eps", 1e-8, 1e-4, DimScale::log10},
                {"lr", 0.1, 2.0, DimScale::linear}};
  validate(space);
  Rng rng(73);
  for (int trial = 0; trial < 200; ++trial) {
    Eigen::VectorXd u(2);
    u << rng.uniform(), rng.uniform();
    const auto decoded = space.decode(u);
    CHECK(decoded.at("eps") >= 1e-8);
    CHECK(decoded.at("eps") <= 1e-4);
    CHECK(decoded.at("lr") >= 0.1);
    CHECK(decoded.at("lr") <= 2.0);
    // encode inverts decode
    const Eigen::VectorXd back = space.encode(decoded);
    CHECK(back(0) == doctest::Approx(u(0)).epsilon(1e-9));
    CHECK(back(1) == doctest::Approx(u(1)).epsilon(1e-9));
  }
}

TEST_CASE("objective failures are recorded at the worst value and skipped") {
  SearchSpace space;
  space.dims = {{"x", 0.0, 1.0, DimScale::linear}};
  int calls = 0;
  const Objective objective = [&calls](const std::map<std::string, double>& p) {
    ++calls;
    if (calls % 3 == 0) throw std::runtime_error("training diverged");
    return 1.0 - p.at("x");
  };
  const TuneResult r = tune(objective, space, 9, 17);
  REQUIRE(r.history.size() == 9);
  double worst_success = 1e300;
  for (const TuneEntry& e : r.history) {
    if (!e.failed) worst_success = std::min(worst_success, e.objective);
  }
  int failures = 0;
  for (const TuneEntry& e : r.history) {
    if (e.failed) {
      ++failures;
      CHECK(e.objective == worst_success);
    }
    CHECK(r.best_objective >= e.objective);
  }
  CHECK(failures == 3);
}

TEST_CASE("forced initial points are evaluated first") {
  SearchSpace space;
  space.dims = {{"x", 0.0, 1.0, DimScale::linear}};
  const Objective objective = [](const std::map<std::string, double>& p) {
    return -(p.at("x") - 0.3) * (p.at("x") - 0.3);
  };
  const TuneResult r = tune(objective, space, 8, 23, {{{"x", 0.77}}});
  CHECK(r.history.front().params.at("x") == doctest::Approx(0.77).epsilon(1e-12));
  // the forced point's objective can never exceed the reported best
  CHECK(r.best_objective >= r.history.front().objective);
}

TEST_CASE("search space validation") {
  SearchSpace bad;
  bad.dims = {{"x", 1.0, 0.5, DimScale::linear}};
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);
  bad.dims = {{"x", -1.0, 1.0, DimScale::log10}};
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);
  CHECK_THROWS_AS(tune([](const std::map<std::string, double>&) { return 0.0; },
                       adadelta_default_space(), 3, 1),
                  std::invalid_argument);
}
