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
#include "crackseg/bayesopt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "crackseg/rng.hpp"

namespace crackseg {

void validate(const SearchSpace& space) {
  if (space.dims.empty()) {
    throw std::invalid_argument("search space: no dimensions");
  }
  for (const SearchDim& d : space.dims) {
    if (!(d.lower < d.upper)) {
      throw std::invalid_argument("search space: lower must be < upper for " +
                                  d.name);
    }
    if (d.scale == DimScale::log10 && !(d.lower > 0.0)) {
      throw std::invalid_argument(
          "search space: log10 dimension must be strictly positive: " + d.name);
    }
  }
}

std::map<std::string, double> SearchSpace::decode(
    const Eigen::VectorXd& unit) const {
  if (unit.size() != static_cast<Eigen::Index>(dims.size())) {
    throw std::invalid_argument("decode: dimension count mismatch");
  }
  std::map<std::string, double> out;
  for (std::size_t d = 0; d < dims.size(); ++d) {
    const double u = std::clamp(unit(static_cast<Eigen::Index>(d)), 0.0, 1.0);
    const SearchDim& dim = dims[d];
    if (dim.scale == DimScale::linear) {
      out[dim.name] = dim.lower + u * (dim.upper - dim.lower);
    } else {
      const double lo = std::log10(dim.lower), hi = std::log10(dim.upper);
      out[dim.name] = std::pow(10.0, lo + u * (hi - lo));
    }
  }
  return out;
}

Eigen::VectorXd SearchSpace::encode(
    const std::map<std::string, double>& params) const {
  Eigen::VectorXd unit(static_cast<Eigen::Index>(dims.size()));
  for (std::size_t d = 0; d < dims.size(); ++d) {
    const SearchDim& dim = dims[d];
    const auto it = params.find(dim.name);
    if (it == params.end()) {
      throw std::invalid_argument("encode: missing parameter " + dim.name);
    }
    double u;
    if (dim.scale == DimScale::linear) {
      u = (it->second - dim.lower) / (dim.upper - dim.lower);
    } else {
      u = (std::log10(it->second) - std::log10(dim.lower)) /
          (std::log10(dim.upper) - std::log10(dim.lower));
    }
    unit(static_cast<Eigen::Index>(d)) = std::clamp(u, 0.0, 1.0);
  }
  return unit;
}

SearchSpace adadelta_default_space() {
  SearchSpace s;
  s.dims = {{"learning-rate", 0.1, 2.0, DimScale::linear},
            {"rho", 0.8, 0.999, DimScale::linear},
            {"epsilon", 1e-8, 1e-4, DimScale::log10}};
  return s;
}

namespace {

double kernel(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
              double signal_var, const Eigen::VectorXd& lengthscales) {
  double q = 0.0;
  for (Eigen::Index d = 0; d < a.size(); ++d) {
    const double diff = a(d) - b(d);
    q += diff * diff / (2.0 * lengthscales(d) * lengthscales(d));
  }
  return signal_var * std::exp(-q);
}

}  // namespace

GpState gp_build(const Eigen::MatrixXd& inputs, const Eigen::VectorXd& values,
                 double signal_var, const Eigen::VectorXd& lengthscales,
                 double noise_var) {
  const Eigen::Index n = inputs.rows();
  if (n < 1) throw std::invalid_argument("gp_build: need >= 1 observation");
  if (values.size() != n) {
    throw std::invalid_argument("gp_build: input/value count mismatch");
  }
  if (lengthscales.size() != inputs.cols() || (lengthscales.array() <= 0).any()) {
    throw std::invalid_argument("gp_build: bad lengthscales");
  }
  if (!(signal_var > 0.0) || noise_var < 0.0) {
    throw std::invalid_argument("gp_build: bad variance hyperparameters");
  }
  if ((inputs.array() < 0.0).any() || (inputs.array() > 1.0).any()) {
    throw std::invalid_argument("gp_build: inputs outside the unit hypercube");
  }
  GpState gp;
  gp.inputs = inputs;
  gp.values = values;
  gp.signal_var = signal_var;
  gp.lengthscales = lengthscales;
  gp.noise_var = noise_var;
  gp.mean = values.mean();

  Eigen::MatrixXd cov(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      const double k = kernel(inputs.row(i), inputs.row(j), signal_var,
                              lengthscales);
      cov(i, j) = k;
      cov(j, i) = k;
    }
  }
  cov.diagonal().array() += noise_var;

  double jitter = 0.0;
  for (int attempt = 0; attempt < 10; ++attempt) {
    Eigen::MatrixXd k = cov;
    k.diagonal().array() += jitter;
    gp.chol.compute(k);
    if (gp.chol.info() == Eigen::Success) {
      gp.jitter = jitter;
      gp.alpha = gp.chol.solve((values.array() - gp.mean).matrix());
      return gp;
    }
    jitter = jitter == 0.0 ? 1e-12 * std::max(signal_var, 1.0) : jitter * 10.0;
  }
  throw std::runtime_error(
      "gp_build: covariance factorization failed after max jitter");
}

double log_marginal_likelihood(const GpState& gp) {
  const Eigen::Index n = gp.inputs.rows();
  const Eigen::VectorXd centered = gp.values.array() - gp.mean;
  double log_det = 0.0;
  const Eigen::MatrixXd& packed = gp.chol.matrixLLT();
  for (Eigen::Index i = 0; i < n; ++i) log_det += std::log(packed(i, i));
  return -0.5 * centered.dot(gp.alpha) - log_det -
         0.5 * static_cast<double>(n) * std::log(2.0 * 3.141592653589793);
}

GpState gp_fit(const Eigen::MatrixXd& inputs, const Eigen::VectorXd& values,
               std::uint64_t seed) {
  const Eigen::Index d = inputs.cols();
  const double var_y = std::max(
      (values.array() - values.mean()).square().mean(), 1e-8);

  // Always include a sane fallback candidate before the random trials.
  Eigen::VectorXd base_ls = Eigen::VectorXd::Constant(d, 0.3);
  GpState best = gp_build(inputs, values, var_y, base_ls, 1e-6);
  double best_ll = log_marginal_likelihood(best);

  Rng rng(seed);
  for (int trial = 0; trial < 64; ++trial) {
    Eigen::VectorXd ls(d);
    for (Eigen::Index k = 0; k < d; ++k) {
      ls(k) = std::pow(10.0, rng.uniform(std::log10(0.05), std::log10(2.0)));
    }
    const double signal = var_y * std::pow(10.0, rng.uniform(-0.6, 0.6));
    const double noise = std::pow(10.0, rng.uniform(-6.0, -2.0));  // >= 1e-6
    try {
      GpState cand = gp_build(inputs, values, signal, ls, noise);
      const double ll = log_marginal_likelihood(cand);
      if (ll > best_ll) {
        best_ll = ll;
        best = std::move(cand);
      }
    } catch (const std::runtime_error&) {
      // factorization failed for this candidate; skip it
    }
  }
  return best;
}

std::pair<double, double> gp_posterior(const GpState& gp,
                                       const Eigen::VectorXd& x) {
  const Eigen::Index n = gp.inputs.rows();
  if (n < 1) throw std::invalid_argument("gp_posterior: empty GP");
  Eigen::VectorXd k_star(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    k_star(i) = kernel(gp.inputs.row(i), x, gp.signal_var, gp.lengthscales);
  }
  const double mean = gp.mean + k_star.dot(gp.alpha);
  const Eigen::VectorXd v = gp.chol.solve(k_star);
  const double variance = std::max(0.0, gp.signal_var - k_star.dot(v));
  return {mean, variance};
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double normal_pdf(double z) {
  return std::exp(-0.5 * z * z) / std::sqrt(2.0 * 3.141592653589793);
}

double expected_improvement(double mean, double variance, double best) {
  if (variance < 0.0) {
    throw std::invalid_argument("expected_improvement: negative variance");
  }
  const double sigma = std::sqrt(variance);
  if (sigma < 1e-15) return std::max(mean - best, 0.0);
  const double z = (mean - best) / sigma;
  return (mean - best) * normal_cdf(z) + sigma * normal_pdf(z);
}

Eigen::VectorXd propose_next(const GpState& gp, std::uint64_t seed) {
  const Eigen::Index n = gp.inputs.rows();
  if (n < 1) throw std::invalid_argument("propose_next: empty GP");
  const Eigen::Index d = gp.inputs.cols();
  const double best = gp.values.maxCoeff();
  Rng rng(seed);
  Eigen::VectorXd winner(d);
  double winner_ei = -1.0;
  constexpr int kCandidates = 2048;
  for (int c = 0; c < kCandidates; ++c) {
    Eigen::VectorXd x(d);
    for (Eigen::Index k = 0; k < d; ++k) x(k) = rng.uniform();
    const auto [mu, var] = gp_posterior(gp, x);
    const double ei = expected_improvement(mu, var, best);
    if (ei > winner_ei) {  // strict: ties keep the lowest candidate index
      winner_ei = ei;
      winner = x;
    }
  }
  return winner;
}

TuneResult tune(const Objective& objective, const SearchSpace& space,
                int budget, std::uint64_t seed,
                const std::vector<std::map<std::string, double>>&
                    forced_initial) {
  validate(space);
  if (budget < 4) throw std::invalid_argument("tune: budget must be >= 4");
  const Eigen::Index d = static_cast<Eigen::Index>(space.dims.size());
  const int n_init = std::max({3, budget / 4,
                               static_cast<int>(std::min<std::size_t>(
                                   forced_initial.size(), budget))});

  TuneResult result;
  std::vector<Eigen::VectorXd> xs;
  std::vector<double> provisional;  // GP targets; failures patched at the end
  std::vector<std::size_t> failed_indices;
  double best_value = -std::numeric_limits<double>::infinity();
  double worst_success = std::numeric_limits<double>::infinity();

  auto evaluate_at = [&](const Eigen::VectorXd& unit) {
    const std::map<std::string, double> params = space.decode(unit);
    TuneEntry entry;
    entry.params = params;
    double value = 0.0;
    bool ok = true;
    try {
      value = objective(params);
      ok = std::isfinite(value);
    } catch (const std::exception&) {
      ok = false;
    }
    if (ok) {
      entry.objective = value;
      worst_success = std::min(worst_success, value);
      if (value > best_value) {
        best_value = value;
        result.best_params = params;
      }
    } else {
      entry.failed = true;
      entry.objective = std::isfinite(worst_success) ? worst_success : 0.0;
      failed_indices.push_back(result.history.size());
    }
    xs.push_back(unit);
    provisional.push_back(entry.objective);
    result.history.push_back(std::move(entry));
  };

  Rng init_rng(derive_seed(seed, 0));
  for (int i = 0; i < n_init && i < budget; ++i) {
    if (i < static_cast<int>(forced_initial.size())) {
      evaluate_at(space.encode(forced_initial[i]));
    } else {
      Eigen::VectorXd x(d);
      for (Eigen::Index k = 0; k < d; ++k) x(k) = init_rng.uniform();
      evaluate_at(x);
    }
  }

  for (int i = n_init; i < budget; ++i) {
    Eigen::MatrixXd inputs(xs.size(), d);
    Eigen::VectorXd values(xs.size());
    for (std::size_t r = 0; r < xs.size(); ++r) {
      inputs.row(r) = xs[r];
      values(static_cast<Eigen::Index>(r)) = provisional[r];
    }
    const GpState gp = gp_fit(inputs, values, derive_seed(seed, 100 + i));
    evaluate_at(propose_next(gp, derive_seed(seed, 200 + i)));
  }

  // Failures are recorded at the worst value observed over the whole run.
  const double patched =
      std::isfinite(worst_success) ? worst_success : 0.0;
  for (std::size_t idx : failed_indices) result.history[idx].objective = patched;

  if (std::isfinite(best_value)) {
    result.best_objective = best_value;
  } else {
    result.best_objective = patched;
    result.best_params = result.history.front().params;
  }
  return result;
}

}  // namespace crackseg
