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
#include "crackseg/optimizers.hpp"

#include <cmath>

namespace crackseg {

OptAlgorithm parse_algorithm(const std::string& name) {
  if (name == "sgd") return OptAlgorithm::sgd;
  if (name == "rmsprop") return OptAlgorithm::rmsprop;
  if (name == "adagrad") return OptAlgorithm::adagrad;
  if (name == "adadelta") return OptAlgorithm::adadelta;
  if (name == "adam") return OptAlgorithm::adam;
  if (name == "adamax") return OptAlgorithm::adamax;
  if (name == "nadam") return OptAlgorithm::nadam;
  throw std::invalid_argument("unknown optimizer algorithm: " + name);
}

std::string algorithm_name(OptAlgorithm a) {
  switch (a) {
    case OptAlgorithm::sgd: return "sgd";
    case OptAlgorithm::rmsprop: return "rmsprop";
    case OptAlgorithm::adagrad: return "adagrad";
    case OptAlgorithm::adadelta: return "adadelta";
    case OptAlgorithm::adam: return "adam";
    case OptAlgorithm::adamax: return "adamax";
    case OptAlgorithm::nadam: return "nadam";
  }
  throw std::invalid_argument("bad optimizer enum value");
}

OptimizerSpec OptimizerSpec::defaults(OptAlgorithm a) {
  OptimizerSpec s;
  s.algorithm = a;
  switch (a) {
    case OptAlgorithm::sgd:
      s.learning_rate = 0.01;
      break;
    case OptAlgorithm::rmsprop:
      s.learning_rate = 0.001;
      s.rho = 0.9;
      break;
    case OptAlgorithm::adagrad:
      s.learning_rate = 0.01;
      break;
    case OptAlgorithm::adadelta:
      s.learning_rate = 1.0;
      s.rho = 0.95;
      s.epsilon = 1e-6;
      break;
    case OptAlgorithm::adam:
      s.learning_rate = 0.001;
      break;
    case OptAlgorithm::adamax:
      s.learning_rate = 0.002;
      break;
    case OptAlgorithm::nadam:
      s.learning_rate = 0.002;
      break;
  }
  return s;
}

void validate(const OptimizerSpec& spec) {
  if (!(spec.learning_rate > 0.0)) {
    throw std::invalid_argument("optimizer: learning-rate must be positive");
  }
  if (!(spec.epsilon > 0.0)) {
    throw std::invalid_argument("optimizer: epsilon must be positive");
  }
  if (spec.momentum < 0.0 || spec.momentum >= 1.0) {
    throw std::invalid_argument("optimizer: momentum must lie in [0,1)");
  }
  auto check_decay = [](double v, const char* name) {
    if (!(v > 0.0) || !(v < 1.0)) {
      throw std::invalid_argument(std::string("optimizer: ") + name +
                                  " must lie in (0,1)");
    }
  };
  switch (spec.algorithm) {
    case OptAlgorithm::rmsprop:
    case OptAlgorithm::adadelta:
      check_decay(spec.rho, "rho");
      break;
    case OptAlgorithm::adam:
    case OptAlgorithm::adamax:
    case OptAlgorithm::nadam:
      check_decay(spec.beta1, "beta1");
      check_decay(spec.beta2, "beta2");
      break;
    default:
      break;
  }
}

OptimizerState opt_init(const OptimizerSpec& spec, Eigen::Index n_params) {
  validate(spec);
  OptimizerState st;
  st.step = 0;
  switch (spec.algorithm) {
    case OptAlgorithm::sgd:
      if (spec.momentum > 0.0) st.m = Eigen::ArrayXd::Zero(n_params);
      break;
    case OptAlgorithm::rmsprop:
    case OptAlgorithm::adagrad:
      st.m = Eigen::ArrayXd::Zero(n_params);
      break;
    case OptAlgorithm::adadelta:
    case OptAlgorithm::adam:
    case OptAlgorithm::adamax:
    case OptAlgorithm::nadam:
      st.m = Eigen::ArrayXd::Zero(n_params);
      st.v = Eigen::ArrayXd::Zero(n_params);
      break;
  }
  return st;
}

OptimizerState opt_init(const OptimizerSpec& spec, const NetParams& params) {
  return opt_init(spec, static_cast<Eigen::Index>(param_count(params)));
}

void opt_step(const OptimizerSpec& spec, OptimizerState& state,
              Eigen::ArrayXd& params, const Eigen::ArrayXd& grads) {
  if (params.size() != grads.size()) {
    throw std::invalid_argument("opt_step: parameter/gradient size mismatch");
  }
  if (!grads.isFinite().all()) {
    throw std::runtime_error("opt_step: non-finite gradient");
  }
  const double lr = spec.learning_rate;
  const double eps = spec.epsilon;
  state.step += 1;
  switch (spec.algorithm) {
    case OptAlgorithm::sgd: {
      if (spec.momentum > 0.0) {
        state.m = spec.momentum * state.m - lr * grads;
        params += state.m;
      } else {
        params -= lr * grads;
      }
      break;
    }
    case OptAlgorithm::rmsprop: {
      state.m = spec.rho * state.m + (1.0 - spec.rho) * grads.square();
      params -= lr * grads / (state.m.sqrt() + eps);
      break;
    }
    case OptAlgorithm::adagrad: {
      state.m += grads.square();
      params -= lr * grads / (state.m.sqrt() + eps);
      break;
    }
    case OptAlgorithm::adadelta: {
      // Zeiler's rule; the accumulated update is the unscaled delta, so the
      // exposed learning rate is a pure multiplier (1.0 reproduces the paper).
      state.m = spec.rho * state.m + (1.0 - spec.rho) * grads.square();
      const Eigen::ArrayXd delta =
          -((state.v + eps).sqrt() / (state.m + eps).sqrt()) * grads;
      state.v = spec.rho * state.v + (1.0 - spec.rho) * delta.square();
      params += lr * delta;
      break;
    }
    case OptAlgorithm::adam: {
      state.m = spec.beta1 * state.m + (1.0 - spec.beta1) * grads;
      state.v = spec.beta2 * state.v + (1.0 - spec.beta2) * grads.square();
      const double bc1 = 1.0 - std::pow(spec.beta1, state.step);
      const double bc2 = 1.0 - std::pow(spec.beta2, state.step);
      params -= lr * (state.m / bc1) / ((state.v / bc2).sqrt() + eps);
      break;
    }
    case OptAlgorithm::adamax: {
      state.m = spec.beta1 * state.m + (1.0 - spec.beta1) * grads;
      state.v = (spec.beta2 * state.v).max(grads.abs());
      const double bc1 = 1.0 - std::pow(spec.beta1, state.step);
      params -= (lr / bc1) * state.m / (state.v + eps);
      break;
    }
    case OptAlgorithm::nadam: {
      // Nesterov-corrected first moment: the lookahead term applies the
      // next step's bias correction to m and the current one to the raw
      // gradient.
      state.m = spec.beta1 * state.m + (1.0 - spec.beta1) * grads;
      state.v = spec.beta2 * state.v + (1.0 - spec.beta2) * grads.square();
      const double bc1_next = 1.0 - std::pow(spec.beta1, state.step + 1);
      const double bc1 = 1.0 - std::pow(spec.beta1, state.step);
      const double bc2 = 1.0 - std::pow(spec.beta2, state.step);
      const Eigen::ArrayXd m_bar =
          spec.beta1 * (state.m / bc1_next) + (1.0 - spec.beta1) * (grads / bc1);
      params -= lr * m_bar / ((state.v / bc2).sqrt() + eps);
      break;
    }
  }
}

void opt_step(const OptimizerSpec& spec, OptimizerState& state,
              NetParams& params, const Gradients& grads) {
  for (const auto& [name, layer] : named_layers(grads)) {
    bool finite = layer->bias.allFinite();
    for (const Plane& w : layer->weights) finite = finite && w.isFinite().all();
    if (!finite) {
      throw std::runtime_error("opt_step: non-finite gradient in layer " + name);
    }
  }
  Eigen::ArrayXd flat_params = flatten(params);
  const Eigen::ArrayXd flat_grads = flatten(grads);
  opt_step(spec, state, flat_params, flat_grads);
  unflatten(params, flat_params);
}

}  // namespace crackseg
