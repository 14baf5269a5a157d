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

#ifndef POLARITY_NN_MODEL_HPP
#define POLARITY_NN_MODEL_HPP

#include <Eigen/Core>
#include <cmath>
#include <string>
#include <vector>

#include "polarity/errors.hpp"
#include "polarity/nn/loss.hpp"

namespace polarity::nn {

enum class LayerKind { dense, conv1d, relu, max_over_time };

enum class OutputKind {
  sigmoid_binary,  // one unit, P(class 0); P(class 1) is the complement
  softmax,         // n_classes units
  sigmoid_multi    // n_classes independent sigmoid units
};

inline const char* layer_kind_name(LayerKind k) {
  switch (k) {
    case LayerKind::dense: return "dense";
    case LayerKind::conv1d: return "conv1d";
    case LayerKind::relu: return "relu";
    case LayerKind::max_over_time: return "max_over_time";
  }
  return "?";
}

inline const char* output_kind_name(OutputKind k) {
  switch (k) {
    case OutputKind::sigmoid_binary: return "sigmoid-binary";
    case OutputKind::softmax: return "softmax";
    case OutputKind::sigmoid_multi: return "sigmoid-multi";
  }
  return "?";
}

struct Layer {
  LayerKind kind = LayerKind::dense;
  // dense: weights is n_out x n_in. conv1d: weights is
  // n_filters x (window * input_dim), one flattened window per column block.
  Eigen::MatrixXd weights;
  Eigen::VectorXd bias;
  int window = 0;     // conv1d
  int input_dim = 0;  // conv1d: columns of the incoming matrix

  bool has_params() const { return kind == LayerKind::dense || kind == LayerKind::conv1d; }
};

inline Layer make_layer(LayerKind kind) {
  Layer layer;
  layer.kind = kind;
  return layer;
}

// A sequential network. Signals are matrices; dense stages use single-column
// matrices. The output nonlinearity is applied after the last layer.
struct Model {
  std::vector<Layer> layers;
  OutputKind output = OutputKind::sigmoid_binary;
  int n_classes = 2;

  LossKind loss_kind() const {
    return output == OutputKind::softmax ? LossKind::cce : LossKind::bce;
  }

  // Units of the final dense layer for this output kind.
  int output_units() const {
    return output == OutputKind::sigmoid_binary ? 1 : n_classes;
  }
};

struct ForwardCache {
  std::vector<Eigen::MatrixXd> inputs;  // inputs[i] feeds layers[i]
  Eigen::VectorXd logits;
  Eigen::VectorXd probs;  // raw output (length 1 for sigmoid-binary)
};

struct Gradients {
  std::vector<Eigen::MatrixXd> weights;
  std::vector<Eigen::VectorXd> bias;
};

namespace detail {

inline Eigen::VectorXd stable_softmax(const Eigen::VectorXd& logits) {
  const Eigen::VectorXd shifted = logits.array() - logits.maxCoeff();
  Eigen::VectorXd exps = shifted.array().exp();
  return exps / exps.sum();
}

inline double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

// Rows [t, t + window) of x flattened row major into one vector per window
// position; the layout the conv weight rows contract against.
inline Eigen::MatrixXd conv_windows(const Eigen::MatrixXd& x, int window) {
  const Eigen::Index positions = x.rows() - window + 1;
  const Eigen::Index d = x.cols();
  Eigen::MatrixXd out(positions, window * d);
  for (Eigen::Index t = 0; t < positions; ++t)
    for (int r = 0; r < window; ++r) out.block(t, r * d, 1, d) = x.row(t + r);
  return out;
}

inline int argmax_first(const Eigen::VectorXd& v) {
  int best = 0;
  for (Eigen::Index i = 1; i < v.size(); ++i)
    if (v[i] > v[best]) best = static_cast<int>(i);
  return best;
}

}  // namespace detail

// Prediction = argmax over class probabilities, ties to the lowest index.
inline int argmax_class(const Eigen::VectorXd& probs) {
  return detail::argmax_first(probs);
}

// Runs the network on `input` (a d x 1 column for dense-first models, a
// length x d matrix for conv-first models) and returns the raw output
// probabilities. Fills `cache` for a subsequent backward pass when given.
inline Eigen::VectorXd forward(const Model& model, const Eigen::MatrixXd& input,
                               ForwardCache* cache = nullptr) {
  Eigen::MatrixXd x = input;
  if (cache) {
    cache->inputs.clear();
    cache->inputs.reserve(model.layers.size());
  }
  for (std::size_t i = 0; i < model.layers.size(); ++i) {
    const Layer& layer = model.layers[i];
    if (cache) cache->inputs.push_back(x);
    switch (layer.kind) {
      case LayerKind::dense: {
        if (x.cols() != 1 || x.rows() != layer.weights.cols())
          throw ShapeMismatch("dense layer " + std::to_string(i) + " expects a " +
                              std::to_string(layer.weights.cols()) + "x1 input, got " +
                              std::to_string(x.rows()) + "x" + std::to_string(x.cols()));
        x = (layer.weights * x.col(0) + layer.bias).eval();
        break;
      }
      case LayerKind::conv1d: {
        if (x.cols() != layer.input_dim)
          throw ShapeMismatch("conv1d layer " + std::to_string(i) + " expects width " +
                              std::to_string(layer.input_dim) + ", got " +
                              std::to_string(x.cols()));
        if (x.rows() < layer.window)
          throw ShapeMismatch("conv1d layer " + std::to_string(i) + " needs at least " +
                              std::to_string(layer.window) + " rows, got " +
                              std::to_string(x.rows()));
        const Eigen::MatrixXd windows = detail::conv_windows(x, layer.window);
        Eigen::MatrixXd scores = windows * layer.weights.transpose();
        scores.rowwise() += layer.bias.transpose();
        x = std::move(scores);  // positions x n_filters
        break;
      }
      case LayerKind::relu:
        x = x.cwiseMax(0.0);
        break;
      case LayerKind::max_over_time:
        x = x.colwise().maxCoeff().transpose().eval();  // n_filters x 1
        break;
    }
  }
  if (x.cols() != 1 || x.rows() != model.output_units())
    throw ShapeMismatch("output expects " + std::to_string(model.output_units()) +
                        " logits, got " + std::to_string(x.rows()) + "x" +
                        std::to_string(x.cols()));

  const Eigen::VectorXd logits = x.col(0);
  Eigen::VectorXd probs;
  switch (model.output) {
    case OutputKind::sigmoid_binary:
    case OutputKind::sigmoid_multi:
      probs = logits.unaryExpr([](double z) { return detail::sigmoid(z); });
      break;
    case OutputKind::softmax:
      probs = detail::stable_softmax(logits);
      break;
  }
  if (cache) {
    cache->logits = logits;
    cache->probs = probs;
  }
  return probs;
}

// Class-probability vector of length n_classes; sigmoid-binary output p is
// expanded to (p, 1 - p). Pure, no cache.
inline Eigen::VectorXd predict_proba(const Model& model, const Eigen::MatrixXd& input) {
  const Eigen::VectorXd raw = forward(model, input);
  if (model.output == OutputKind::sigmoid_binary) {
    Eigen::VectorXd expanded(2);
    expanded << raw[0], 1.0 - raw[0];
    return expanded;
  }
  return raw;
}

inline Gradients zero_gradients(const Model& model) {
  Gradients g;
  g.weights.reserve(model.layers.size());
  g.bias.reserve(model.layers.size());
  for (const Layer& layer : model.layers) {
    g.weights.emplace_back(Eigen::MatrixXd::Zero(layer.weights.rows(), layer.weights.cols()));
    g.bias.emplace_back(Eigen::VectorXd::Zero(layer.bias.size()));
  }
  return g;
}

// Analytic gradients of the model's loss at the cached forward pass. The
// max-over-time gradient is routed to the argmax position, ties to the
// lowest window index; ReLU uses the zero subgradient at the kink.
inline Gradients backward(const Model& model, const ForwardCache& cache, int label) {
  if (cache.inputs.size() != model.layers.size())
    throw ShapeMismatch("forward cache does not match the model");
  if (label < 0 || label >= model.n_classes)
    throw BadLabel("class index " + std::to_string(label) + " out of range");

  Gradients grads = zero_gradients(model);

  // d loss / d logits; the clamp-free identity p - y holds for all three
  // output/loss pairings used here.
  Eigen::VectorXd dlogits = cache.probs;
  if (model.output == OutputKind::sigmoid_binary) {
    dlogits[0] -= label == 0 ? 1.0 : 0.0;
  } else {
    dlogits[label] -= 1.0;
  }

  Eigen::MatrixXd dx = dlogits;
  for (std::size_t idx = model.layers.size(); idx-- > 0;) {
    const Layer& layer = model.layers[idx];
    const Eigen::MatrixXd& x = cache.inputs[idx];
    switch (layer.kind) {
      case LayerKind::dense: {
        grads.weights[idx] = dx.col(0) * x.col(0).transpose();
        grads.bias[idx] = dx.col(0);
        if (idx > 0) dx = (layer.weights.transpose() * dx.col(0)).eval();
        break;
      }
      case LayerKind::conv1d: {
        const Eigen::MatrixXd windows = detail::conv_windows(x, layer.window);
        grads.weights[idx] = dx.transpose() * windows;  // n_filters x (window * d)
        grads.bias[idx] = dx.colwise().sum().transpose();
        if (idx > 0) {
          const Eigen::MatrixXd dwindows = dx * layer.weights;  // positions x (window * d)
          Eigen::MatrixXd dinput = Eigen::MatrixXd::Zero(x.rows(), x.cols());
          const Eigen::Index d = x.cols();
          for (Eigen::Index t = 0; t < dwindows.rows(); ++t)
            for (int r = 0; r < layer.window; ++r)
              dinput.row(t + r) += dwindows.block(t, r * d, 1, d);
          dx = std::move(dinput);
        }
        break;
      }
      case LayerKind::relu:
        dx = ((x.array() > 0.0).cast<double>() * dx.array()).matrix();
        break;
      case LayerKind::max_over_time: {
        Eigen::MatrixXd dinput = Eigen::MatrixXd::Zero(x.rows(), x.cols());
        for (Eigen::Index f = 0; f < x.cols(); ++f) {
          const int t = detail::argmax_first(x.col(f));
          dinput(t, f) = dx(f, 0);
        }
        dx = std::move(dinput);
        break;
      }
    }
  }
  return grads;
}

}  // namespace polarity::nn

#endif  // POLARITY_NN_MODEL_HPP
