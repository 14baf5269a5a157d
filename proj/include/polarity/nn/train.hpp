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

#ifndef POLARITY_NN_TRAIN_HPP
#define POLARITY_NN_TRAIN_HPP

#include <Eigen/Core>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "polarity/errors.hpp"
#include "polarity/nn/adadelta.hpp"
#include "polarity/nn/init.hpp"
#include "polarity/nn/loss.hpp"
#include "polarity/nn/model.hpp"

namespace polarity::nn {

struct TrainConfig {
  int epochs = 50;
  int batch_size = 32;
  std::uint64_t seed = 0;
  LossKind loss = LossKind::bce;
  double rho = 0.95;
  double eps = 1e-6;
};

struct EpochRecord {
  int epoch = 0;  // 1-based
  double train_loss = 0.0;
  double train_accuracy = 0.0;
  // NaN when no validation set was given.
  double val_loss = std::numeric_limits<double>::quiet_NaN();
  double val_accuracy = std::numeric_limits<double>::quiet_NaN();
};

namespace detail {

// Per-epoch batch order. Same Fisher-Yates-over-raw-draws scheme as the
// dataset split so shuffles never depend on library distribution internals.
inline void shuffle_indices(std::vector<std::size_t>& idx, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (std::size_t i = idx.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap(idx[i - 1], idx[j]);
  }
}

inline std::uint64_t epoch_seed(std::uint64_t base, int epoch) {
  return mix_seed(base, static_cast<std::uint64_t>(epoch));
}

inline int class_from_raw(const Model& model, const Eigen::VectorXd& raw) {
  if (model.output == OutputKind::sigmoid_binary) return raw[0] >= 0.5 ? 0 : 1;
  return argmax_class(raw);
}

}  // namespace detail

// Mean loss and accuracy of the model over a labeled feature set.
inline void score_dataset(const Model& model, const std::vector<Eigen::MatrixXd>& inputs,
                          const std::vector<int>& labels, LossKind loss_kind,
                          double& mean_loss, double& accuracy) {
  if (inputs.empty()) throw EmptyDataset("cannot score an empty feature set");
  if (inputs.size() != labels.size())
    throw ShapeMismatch("feature and label counts differ");
  double loss_sum = 0.0;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    const Eigen::VectorXd raw = forward(model, inputs[i]);
    loss_sum += loss(raw, labels[i], loss_kind);
    if (detail::class_from_raw(model, raw) == labels[i]) ++correct;
  }
  mean_loss = loss_sum / static_cast<double>(inputs.size());
  accuracy = static_cast<double>(correct) / static_cast<double>(inputs.size());
}

// Mini-batch Adadelta training, in place. Gradients are averaged within a
// batch; batch order is reshuffled each epoch from the config seed, so the
// whole run is a pure function of (model, data, config). The reported
// training loss/accuracy come from the forward passes made before each
// batch's update.
inline std::vector<EpochRecord> train(Model& model,
                                      const std::vector<Eigen::MatrixXd>& inputs,
                                      const std::vector<int>& labels,
                                      const TrainConfig& config,
                                      const std::vector<Eigen::MatrixXd>* val_inputs = nullptr,
                                      const std::vector<int>* val_labels = nullptr) {
  if (config.epochs < 1) throw BadSpec("epochs must be >= 1");
  if (config.batch_size < 1) throw BadSpec("batch_size must be >= 1");
  if (inputs.empty()) throw EmptyDataset("cannot train on an empty feature set");
  if (inputs.size() != labels.size())
    throw ShapeMismatch("feature and label counts differ");
  const bool softmax = model.output == OutputKind::softmax;
  if (softmax != (config.loss == LossKind::cce))
    throw BadSpec("loss kind does not match the model output: softmax pairs with cce, "
                  "sigmoid outputs pair with bce");
  if (val_inputs && val_labels && val_inputs->size() != val_labels->size())
    throw ShapeMismatch("validation feature and label counts differ");

  AdadeltaState state = AdadeltaState::for_model(model);
  const AdadeltaConfig opt{config.rho, config.eps};

  std::vector<std::size_t> order(inputs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  std::vector<EpochRecord> history;
  history.reserve(static_cast<std::size_t>(config.epochs));
  ForwardCache cache;

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    detail::shuffle_indices(order, detail::epoch_seed(config.seed, epoch));

    double loss_sum = 0.0;
    std::size_t correct = 0;
    const auto batch_size = static_cast<std::size_t>(config.batch_size);
    for (std::size_t start = 0; start < order.size(); start += batch_size) {
      const std::size_t stop = std::min(order.size(), start + batch_size);
      Gradients batch = zero_gradients(model);
      for (std::size_t k = start; k < stop; ++k) {
        const std::size_t i = order[k];
        const Eigen::VectorXd raw = forward(model, inputs[i], &cache);
        loss_sum += loss(raw, labels[i], config.loss);
        if (detail::class_from_raw(model, raw) == labels[i]) ++correct;
        const Gradients g = backward(model, cache, labels[i]);
        for (std::size_t l = 0; l < batch.weights.size(); ++l) {
          batch.weights[l] += g.weights[l];
          batch.bias[l] += g.bias[l];
        }
      }
      const double inv = 1.0 / static_cast<double>(stop - start);
      for (std::size_t l = 0; l < batch.weights.size(); ++l) {
        batch.weights[l] *= inv;
        batch.bias[l] *= inv;
      }
      adadelta_update(model, batch, state, opt);
    }

    EpochRecord rec;
    rec.epoch = epoch + 1;
    rec.train_loss = loss_sum / static_cast<double>(inputs.size());
    rec.train_accuracy = static_cast<double>(correct) / static_cast<double>(inputs.size());
    if (val_inputs && val_labels && !val_inputs->empty())
      score_dataset(model, *val_inputs, *val_labels, config.loss, rec.val_loss,
                    rec.val_accuracy);
    history.push_back(rec);
  }
  return history;
}

}  // namespace polarity::nn

#endif  // POLARITY_NN_TRAIN_HPP
