// Copyright 2026 The Polarity Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef POLARITY_NN_ADADELTA_HPP
#define POLARITY_NN_ADADELTA_HPP

#include <Eigen/Core>
#include <vector>

#include "polarity/errors.hpp"
#include "polarity/nn/model.hpp"

namespace polarity::nn {

// Adadelta keeps two decaying accumulators per parameter: the mean squared
// gradient and the mean squared update. No learning rate.
struct AdadeltaConfig {
  double rho = 0.95;
  double eps = 1e-6;
};

struct AdadeltaState {
  std::vector<Eigen::MatrixXd> grad_sq_w, delta_sq_w;
  std::vector<Eigen::VectorXd> grad_sq_b, delta_sq_b;

  static AdadeltaState for_model(const Model& model) {
    AdadeltaState s;
    for (const Layer& layer : model.layers) {
      s.grad_sq_w.emplace_back(Eigen::MatrixXd::Zero(layer.weights.rows(), layer.weights.cols()));
      s.delta_sq_w.emplace_back(Eigen::MatrixXd::Zero(layer.weights.rows(), layer.weights.cols()));
      s.grad_sq_b.emplace_back(Eigen::VectorXd::Zero(layer.bias.size()));
      s.delta_sq_b.emplace_back(Eigen::VectorXd::Zero(layer.bias.size()));
    }
    return s;
  }
};

namespace detail {

template <typename Tensor>
void adadelta_step(Tensor& param, const Tensor& grad, Tensor& grad_sq, Tensor& delta_sq,
                   const AdadeltaConfig& cfg) {
  grad_sq = cfg.rho * grad_sq + (1.0 - cfg.rho) * grad.cwiseProduct(grad);
  const Tensor delta =
      (-((delta_sq.array() + cfg.eps) / (grad_sq.array() + cfg.eps)).sqrt() * grad.array())
          .matrix();
  delta_sq = cfg.rho * delta_sq + (1.0 - cfg.rho) * delta.cwiseProduct(delta);
  param += delta;
}

}  // namespace detail

inline void adadelta_update(Model& model, const Gradients& grads, AdadeltaState& state,
                            const AdadeltaConfig& cfg = {}) {
  if (grads.weights.size() != model.layers.size() ||
      state.grad_sq_w.size() != model.layers.size())
    throw ShapeMismatch("optimizer state does not match the model");
  if (cfg.rho <= 0.0 || cfg.rho >= 1.0 || cfg.eps <= 0.0)
    throw BadSpec("adadelta needs rho in (0,1) and eps > 0");
  for (std::size_t i = 0; i < model.layers.size(); ++i) {
    if (!model.layers[i].has_params()) continue;
    detail::adadelta_step(model.layers[i].weights, grads.weights[i], state.grad_sq_w[i],
                          state.delta_sq_w[i], cfg);
    detail::adadelta_step(model.layers[i].bias, grads.bias[i], state.grad_sq_b[i],
                          state.delta_sq_b[i], cfg);
  }
}

}  // namespace polarity::nn

#endif  // POLARITY_NN_ADADELTA_HPP
