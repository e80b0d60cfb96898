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

// Naive reference implementations, written independently of the production
// paths they check. Everything here is plain loops and direct formulas;
// none of it calls into the module under test.

#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "crackseg/rng.hpp"
#include "crackseg/types.hpp"

namespace oracle {

struct Tally {
  std::uint64_t tp = 0, fp = 0, fn = 0, tn = 0;
};

inline Tally tally(const crackseg::Mask& pred, const crackseg::Mask& truth) {
  Tally t;
  for (Eigen::Index i = 0; i < pred.rows(); ++i) {
    for (Eigen::Index j = 0; j < pred.cols(); ++j) {
      const bool p = pred(i, j) != 0;
      const bool y = truth(i, j) != 0;
      if (p && y) ++t.tp;
      else if (p && !y) ++t.fp;
      else if (!p && y) ++t.fn;
      else ++t.tn;
    }
  }
  return t;
}

inline double precision_of(const Tally& t) {
  return t.tp + t.fp == 0 ? 1.0
                          : static_cast<double>(t.tp) /
                                static_cast<double>(t.tp + t.fp);
}

inline double recall_of(const Tally& t) {
  return t.tp + t.fn == 0 ? 1.0
                          : static_cast<double>(t.tp) /
                                static_cast<double>(t.tp + t.fn);
}

/// Brute-force threshold-and-tally over a list of score/truth pairs.
inline Tally threshold_tally(const std::vector<crackseg::Plane>& scores,
                             const std::vector<crackseg::Mask>& truths,
                             double threshold) {
  Tally t;
  for (std::size_t k = 0; k < scores.size(); ++k) {
    for (Eigen::Index i = 0; i < scores[k].rows(); ++i) {
      for (Eigen::Index j = 0; j < scores[k].cols(); ++j) {
        const bool p = scores[k](i, j) >= threshold;
        const bool y = truths[k](i, j) != 0;
        if (p && y) ++t.tp;
        else if (p && !y) ++t.fp;
        else if (!p && y) ++t.fn;
        else ++t.tn;
      }
    }
  }
  return t;
}

/// Per-position Laplace-smoothed crack frequency over a mask stack.
inline crackseg::Plane position_frequency(
    const std::vector<crackseg::Mask>& masks, double alpha) {
  crackseg::Plane freq =
      crackseg::Plane::Zero(masks[0].rows(), masks[0].cols());
  for (Eigen::Index i = 0; i < freq.rows(); ++i) {
    for (Eigen::Index j = 0; j < freq.cols(); ++j) {
      double count = 0;
      for (const crackseg::Mask& m : masks) count += m(i, j) != 0 ? 1 : 0;
      freq(i, j) = (count + alpha) /
                   (static_cast<double>(masks.size()) + 2.0 * alpha);
    }
  }
  return freq;
}

/// Ratio-form maximum likelihood rule: argmax_c p_c / prior_c, ties to crack.
inline crackseg::Mask ml_ratio_rule(const crackseg::ProbMap& p,
                                    const crackseg::PriorMap& prior) {
  crackseg::Mask out(p.rows(), p.cols());
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    for (Eigen::Index j = 0; j < p.cols(); ++j) {
      const double crack_lh = p.crack(i, j) / prior.crack(i, j);
      const double bg_lh = p.background(i, j) / prior.background(i, j);
      out(i, j) = crack_lh >= bg_lh ? 1 : 0;
    }
  }
  return out;
}

// --- scalar optimizer one-step oracles (hand-evaluated update rules) ---

inline double sgd_step(double param, double grad, double lr) {
  return param - lr * grad;
}

inline double adadelta_first_step(double param, double grad, double rho,
                                  double eps, double lr) {
  const double acc_grad = (1.0 - rho) * grad * grad;
  const double delta = -std::sqrt(0.0 + eps) / std::sqrt(acc_grad + eps) * grad;
  return param + lr * delta;
}

inline double adam_first_step(double param, double grad, double lr, double b1,
                              double b2, double eps) {
  const double m_hat = (1.0 - b1) * grad / (1.0 - b1);
  const double v_hat = (1.0 - b2) * grad * grad / (1.0 - b2);
  return param - lr * m_hat / (std::sqrt(v_hat) + eps);
}

// --- Gaussian process: naive direct-inversion posterior ---

inline double se_kernel(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                        double signal, const Eigen::VectorXd& ls) {
  double q = 0.0;
  for (Eigen::Index d = 0; d < a.size(); ++d) {
    q += (a(d) - b(d)) * (a(d) - b(d)) / (2.0 * ls(d) * ls(d));
  }
  return signal * std::exp(-q);
}

inline std::pair<double, double> gp_posterior_direct(
    const Eigen::MatrixXd& inputs, const Eigen::VectorXd& values,
    double signal, const Eigen::VectorXd& ls, double noise,
    const Eigen::VectorXd& x) {
  const Eigen::Index n = inputs.rows();
  Eigen::MatrixXd k(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      k(i, j) = se_kernel(inputs.row(i), inputs.row(j), signal, ls);
    }
  }
  k.diagonal().array() += noise;
  const Eigen::MatrixXd k_inv = k.inverse();  // O(n^3), fine for the oracle
  Eigen::VectorXd k_star(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    k_star(i) = se_kernel(inputs.row(i), x, signal, ls);
  }
  const double m = values.mean();
  const double mean = m + k_star.dot(k_inv * (values.array() - m).matrix());
  const double var = signal - k_star.dot(k_inv * k_star);
  return {mean, var};
}

/// Expected improvement by Simpson quadrature of the improvement integrand.
inline double ei_quadrature(double mean, double sigma, double best) {
  const double lo = best;
  const double hi = std::max(best, mean) + 12.0 * sigma;
  const int n = 20000;  // even
  const double h = (hi - lo) / n;
  auto integrand = [&](double y) {
    const double z = (y - mean) / sigma;
    return (y - best) * std::exp(-0.5 * z * z) /
           (sigma * std::sqrt(2.0 * 3.141592653589793));
  };
  double acc = integrand(lo) + integrand(hi);
  for (int i = 1; i < n; ++i) {
    acc += integrand(lo + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
  }
  return acc * h / 3.0;
}

// --- random test-data generators ---

inline crackseg::Mask random_mask(Eigen::Index rows, Eigen::Index cols,
                                  double crack_prob, crackseg::Rng& rng) {
  crackseg::Mask m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      m(i, j) = rng.uniform() < crack_prob ? 1 : 0;
    }
  }
  return m;
}

/// Softmax-normalized random two-class probability map.
inline crackseg::ProbMap random_probmap(Eigen::Index rows, Eigen::Index cols,
                                        crackseg::Rng& rng) {
  crackseg::ProbMap p;
  p.background = crackseg::Plane(rows, cols);
  p.crack = crackseg::Plane(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      const double l0 = rng.normal(0.0, 2.0);
      const double l1 = rng.normal(0.0, 2.0);
      const double m = std::max(l0, l1);
      const double e0 = std::exp(l0 - m);
      const double e1 = std::exp(l1 - m);
      p.background(i, j) = e0 / (e0 + e1);
      p.crack(i, j) = e1 / (e0 + e1);
    }
  }
  return p;
}

/// Random smoothed prior map with entries strictly inside (lo, hi).
inline crackseg::PriorMap random_priormap(Eigen::Index rows, Eigen::Index cols,
                                          double lo, double hi,
                                          crackseg::Rng& rng) {
  crackseg::PriorMap p;
  p.crack = crackseg::Plane(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      p.crack(i, j) = rng.uniform(lo, hi);
    }
  }
  p.background = 1.0 - p.crack;
  return p;
}

inline crackseg::Plane random_scores(Eigen::Index rows, Eigen::Index cols,
                                     crackseg::Rng& rng) {
  crackseg::Plane s(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) s(i, j) = rng.uniform();
  }
  return s;
}

}  // namespace oracle
