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

#ifndef POLARITY_NN_GRADCHECK_HPP
#define POLARITY_NN_GRADCHECK_HPP

#include <Eigen/Core>
#include <algorithm>
#include <cmath>

#include "polarity/errors.hpp"
#include "polarity/nn/loss.hpp"
#include "polarity/nn/model.hpp"

namespace polarity::nn {

namespace detail {

inline double relative_error(double analytic, double numeric) {
  const double denom = std::max({std::abs(analytic), std::abs(numeric), 1e-12});
  return std::abs(analytic - numeric) / denom;
}

}  // namespace detail

// Central-difference check of backward() over every parameter of the model
// at one (input, label) sample. Returns the worst relative error. The model
// is restored to its original parameters on return.
//
// ReLU kinks and max-pool ties make the loss non-differentiable; callers
// should nudge inputs (or resample) so no preactivation sits within a few h
// of such a tie. See nudged_gradient_check below.
inline double gradient_check(Model& model, const Eigen::MatrixXd& input, int label,
                             double h = 1e-5) {
  if (h < 1e-6 || h > 1e-4) throw BadSpec("finite-difference step must lie in [1e-6, 1e-4]");
  const LossKind kind = model.loss_kind();

  ForwardCache cache;
  forward(model, input, &cache);
  const Gradients analytic = backward(model, cache, label);

  const auto loss_at = [&]() { return loss(forward(model, input), label, kind); };

  double worst = 0.0;
  for (std::size_t l = 0; l < model.layers.size(); ++l) {
    Layer& layer = model.layers[l];
    if (!layer.has_params()) continue;
    for (Eigen::Index r = 0; r < layer.weights.rows(); ++r)
      for (Eigen::Index c = 0; c < layer.weights.cols(); ++c) {
        const double saved = layer.weights(r, c);
        layer.weights(r, c) = saved + h;
        const double up = loss_at();
        layer.weights(r, c) = saved - h;
        const double down = loss_at();
        layer.weights(r, c) = saved;
        worst = std::max(worst,
                         detail::relative_error(analytic.weights[l](r, c), (up - down) / (2 * h)));
      }
    for (Eigen::Index i = 0; i < layer.bias.size(); ++i) {
      const double saved = layer.bias(i);
      layer.bias(i) = saved + h;
      const double up = loss_at();
      layer.bias(i) = saved - h;
      const double down = loss_at();
      layer.bias(i) = saved;
      worst = std::max(worst,
                       detail::relative_error(analytic.bias[l](i), (up - down) / (2 * h)));
    }
  }
  return worst;
}

// True if any ReLU preactivation is near zero or any pooled column has two
// window scores within `margin` of its maximum, i.e. a parameter nudge of
// order h could flip a branch and poison the finite difference.
inline bool near_nondifferentiable(const Model& model, const Eigen::MatrixXd& input,
                                   double margin) {
  ForwardCache cache;
  forward(model, input, &cache);
  for (std::size_t l = 0; l < model.layers.size(); ++l) {
    const Eigen::MatrixXd& x = cache.inputs[l];
    if (model.layers[l].kind == LayerKind::relu) {
      if ((x.array().abs() < margin).any()) return true;
    } else if (model.layers[l].kind == LayerKind::max_over_time) {
      for (Eigen::Index f = 0; f < x.cols(); ++f) {
        const double top = x.col(f).maxCoeff();
        int close = 0;
        for (Eigen::Index t = 0; t < x.rows(); ++t)
          if (top - x(t, f) < margin) ++close;
        if (close > 1) return true;
      }
    }
  }
  return false;
}

// gradient_check on a freshly perturbed input whenever the sample lands too
// close to a kink: the input is rescaled and shifted until every branch has
// clearance, then checked. `attempts` bounds the search.
template <typename ResampleFn>
inline double nudged_gradient_check(Model& model, ResampleFn make_input, int label,
                                    double h = 1e-5, int attempts = 64) {
  const double margin = 1e3 * h;
  for (int a = 0; a < attempts; ++a) {
    const Eigen::MatrixXd input = make_input(a);
    if (near_nondifferentiable(model, input, margin)) continue;
    return gradient_check(model, input, label, h);
  }
  throw BadSpec("could not find an input clear of ReLU/pooling ties");
}

}  // namespace polarity::nn

#endif  // POLARITY_NN_GRADCHECK_HPP
