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
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Core>

namespace crackseg {

enum class DimScale { linear, log10 };

struct SearchDim {
  std::string name;
  double lower = 0.0;
  double upper = 1.0;
  DimScale scale = DimScale::linear;
};

struct SearchSpace {
  std::vector<SearchDim> dims;

  std::map<std::string, double> decode(const Eigen::VectorXd& unit) const;
  Eigen::VectorXd encode(const std::map<std::string, double>& params) const;
};

void validate(const SearchSpace& space);

/// Default Adadelta tuning domain: lr in [0.1, 2] and rho in [0.8, 0.999]
/// linear, eps in [1e-8, 1e-4] on a log10 scale.
SearchSpace adadelta_default_space();

// Gaussian-process regression on the unit hypercube with a squared-
// exponential kernel k(a,b) = signal * exp(-sum_d (a_d-b_d)^2 / (2 l_d^2)),
// noise on the training diagonal, and a constant prior mean (the mean of the
// observed values).
struct GpState {
  Eigen::MatrixXd inputs;       // n×d, rows inside [0,1]^d
  Eigen::VectorXd values;       // n
  double signal_var = 1.0;
  Eigen::VectorXd lengthscales; // d
  double noise_var = 0.0;
  double mean = 0.0;
  double jitter = 0.0;          // added to reach a successful factorization
  Eigen::LLT<Eigen::MatrixXd> chol;
  Eigen::VectorXd alpha;        // (K + noise I)^-1 (y - mean)
};

/// Factorizes the covariance, escalating jitter until the Cholesky succeeds
/// (bounded retries).
GpState gp_build(const Eigen::MatrixXd& inputs, const Eigen::VectorXd& values,
                 double signal_var, const Eigen::VectorXd& lengthscales,
                 double noise_var);

/// Kernel hyperparameters chosen by maximizing the log marginal likelihood
/// over a seeded random search of 64 trials. Noise floor 1e-6.
GpState gp_fit(const Eigen::MatrixXd& inputs, const Eigen::VectorXd& values,
               std::uint64_t seed);

double log_marginal_likelihood(const GpState& gp);

/// Exact posterior (mean, variance) at a query point; variance clamped at 0.
std::pair<double, double> gp_posterior(const GpState& gp,
                                       const Eigen::VectorXd& x);

/// Closed-form expected improvement for maximization:
/// EI = (mu - best) Phi(z) + sigma phi(z), z = (mu - best)/sigma;
/// max(mu - best, 0) when the variance is zero.
double expected_improvement(double mean, double variance, double best);

double normal_cdf(double z);
double normal_pdf(double z);

/// Argmax of EI over 2048 seeded uniform candidates; ties keep the lowest
/// candidate index. Deterministic in (gp, seed).
Eigen::VectorXd propose_next(const GpState& gp, std::uint64_t seed);

struct TuneEntry {
  std::map<std::string, double> params;
  double objective = 0.0;
  bool failed = false;
};

struct TuneResult {
  std::map<std::string, double> best_params;
  double best_objective = 0.0;
  std::vector<TuneEntry> history;
};

using Objective = std::function<double(const std::map<std::string, double>&)>;

// Runs max(3, budget/4) initial design points (any forced points first, then
// seeded uniform draws), then EI-driven proposals. Objective failures are
// recorded at the worst observed value and skipped for best-tracking.
TuneResult tune(const Objective& objective, const SearchSpace& space,
                int budget, std::uint64_t seed,
                const std::vector<std::map<std::string, double>>&
                    forced_initial = {});

}  // namespace crackseg
