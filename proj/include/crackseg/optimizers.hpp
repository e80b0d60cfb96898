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

#include <string>

#include <Eigen/Core>

#include "crackseg/network.hpp"

namespace crackseg {

enum class OptAlgorithm { sgd, rmsprop, adagrad, adadelta, adam, adamax, nadam };

OptAlgorithm parse_algorithm(const std::string& name);
std::string algorithm_name(OptAlgorithm a);

// First-order update rules with their common published defaults:
//   sgd       lr 0.01, momentum 0
//   rmsprop   lr 0.001, rho 0.9, eps 1e-8
//   adagrad   lr 0.01, eps 1e-8
//   adadelta  lr 1.0, rho 0.95, eps 1e-6
//   adam      lr 0.001, beta1 0.9, beta2 0.999, eps 1e-8
//   adamax    lr 0.002, beta1 0.9, beta2 0.999, eps 1e-8
//   nadam     lr 0.002, beta1 0.9, beta2 0.999, eps 1e-8
struct OptimizerSpec {
  OptAlgorithm algorithm = OptAlgorithm::sgd;
  double learning_rate = 0.01;
  double momentum = 0.0;
  double rho = 0.9;      // rmsprop / adadelta decay
  double beta1 = 0.9;    // adam family
  double beta2 = 0.999;  // adam family
  double epsilon = 1e-8;

  static OptimizerSpec defaults(OptAlgorithm a);
};

void validate(const OptimizerSpec& spec);

/// Per-parameter accumulators in the canonical flat order; empty when the
/// algorithm does not use them.
struct OptimizerState {
  Eigen::ArrayXd m;  // first moment / momentum / squared-gradient average
  Eigen::ArrayXd v;  // second moment / squared-update average / infinity norm
  long step = 0;
};

OptimizerState opt_init(const OptimizerSpec& spec, Eigen::Index n_params);
OptimizerState opt_init(const OptimizerSpec& spec, const NetParams& params);

// Canonical update rule applied elementwise; deterministic; increments the
// step counter. Throws on non-finite gradients without touching the state.
void opt_step(const OptimizerSpec& spec, OptimizerState& state,
              Eigen::ArrayXd& params, const Eigen::ArrayXd& grads);

/// NetParams adapter: validates per-layer gradient finiteness (naming the
/// first offending layer), then updates through the flat representation.
void opt_step(const OptimizerSpec& spec, OptimizerState& state,
              NetParams& params, const Gradients& grads);

}  // namespace crackseg
