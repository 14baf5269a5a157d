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

#ifndef POLARITY_ENSEMBLE_HPP
#define POLARITY_ENSEMBLE_HPP

#include <Eigen/Core>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "polarity/errors.hpp"
#include "polarity/nn/model.hpp"
#include "polarity/nn/train.hpp"

namespace polarity {

inline constexpr double kLogProbFloor = 1e-12;

// Combined score_c = sum_m weights[m] * ln(max(p_mc, floor)). Prediction is
// the argmax, ties to the lowest class index.
inline Eigen::VectorXd interpolate_log_probs(const std::vector<Eigen::VectorXd>& model_probs,
                                             const std::vector<double>& weights) {
  if (model_probs.empty()) throw LengthMismatch("no model probabilities given");
  if (model_probs.size() != weights.size())
    throw LengthMismatch("got " + std::to_string(weights.size()) + " weights for " +
                         std::to_string(model_probs.size()) + " models");
  const Eigen::Index n_classes = model_probs.front().size();
  Eigen::VectorXd scores = Eigen::VectorXd::Zero(n_classes);
  for (std::size_t m = 0; m < model_probs.size(); ++m) {
    if (model_probs[m].size() != n_classes)
      throw LengthMismatch("model " + std::to_string(m) + " has a different class count");
    scores += weights[m] *
              model_probs[m].array().max(kLogProbFloor).log().matrix();
  }
  return scores;
}

inline int ensemble_predict(const std::vector<Eigen::VectorXd>& model_probs,
                            const std::vector<double>& weights) {
  return nn::argmax_class(interpolate_log_probs(model_probs, weights));
}

struct GridSearchResult {
  std::vector<double> weights;
  double accuracy = 0.0;
};

// Exhaustive search over {0, step, ..., 1}^M minus the all-zero vector,
// scored by validation accuracy. Candidates are visited in ascending
// lexicographic order and only strictly better accuracy replaces the
// incumbent, so ties resolve to the lexicographically smallest vector.
inline GridSearchResult grid_search_weights(
    const std::vector<std::vector<Eigen::VectorXd>>& probs_per_review,
    const std::vector<int>& labels, double step = 0.1) {
  if (probs_per_review.empty()) throw EmptyValidation("grid search needs validation reviews");
  if (probs_per_review.size() != labels.size())
    throw LengthMismatch("validation probabilities and labels differ in count");
  if (!(step > 0.0) || step > 1.0) throw BadSpec("grid step must lie in (0, 1]");
  const int n_steps = static_cast<int>(std::lround(1.0 / step));
  if (std::abs(n_steps * step - 1.0) > 1e-9)
    throw BadSpec("grid step must divide 1 evenly");

  const std::size_t n_models = probs_per_review.front().size();
  if (n_models == 0) throw LengthMismatch("no model probabilities given");
  const Eigen::Index n_classes = probs_per_review.front().front().size();

  // ln of clamped probs once per review; candidate scoring is then a single
  // vector-matrix product.
  std::vector<Eigen::MatrixXd> logs;
  logs.reserve(probs_per_review.size());
  for (const auto& review : probs_per_review) {
    if (review.size() != n_models)
      throw LengthMismatch("inconsistent model count across reviews");
    Eigen::MatrixXd l(n_models, n_classes);
    for (std::size_t m = 0; m < n_models; ++m) {
      if (review[m].size() != n_classes)
        throw LengthMismatch("inconsistent class count across models");
      l.row(m) = review[m].array().max(kLogProbFloor).log().matrix().transpose();
    }
    logs.push_back(std::move(l));
  }

  std::vector<int> counters(n_models, 0);
  Eigen::VectorXd weights(n_models);
  GridSearchResult best;
  best.accuracy = -1.0;

  while (true) {
    bool all_zero = true;
    for (std::size_t m = 0; m < n_models; ++m) {
      weights[static_cast<Eigen::Index>(m)] = counters[m] * step;
      if (counters[m] != 0) all_zero = false;
    }
    if (!all_zero) {
      std::size_t correct = 0;
      for (std::size_t r = 0; r < logs.size(); ++r) {
        const Eigen::VectorXd scores = logs[r].transpose() * weights;
        if (nn::argmax_class(scores) == labels[r]) ++correct;
      }
      const double acc = static_cast<double>(correct) / static_cast<double>(logs.size());
      if (acc > best.accuracy) {
        best.accuracy = acc;
        best.weights.assign(weights.data(), weights.data() + weights.size());
      }
    }
    // Odometer increment, last index fastest: ascending lexicographic order.
    std::size_t pos = n_models;
    while (pos-- > 0) {
      if (++counters[pos] <= n_steps) break;
      counters[pos] = 0;
      if (pos == 0) return best;
    }
  }
}

// Concatenates each model's class probabilities per review; a length-1
// sigmoid output expands to (p, 1 - p) so every block is a distribution.
inline std::vector<Eigen::VectorXd> build_stacking_features(
    const std::vector<std::vector<Eigen::VectorXd>>& probs_per_review) {
  if (probs_per_review.empty()) throw EmptyDataset("no reviews to stack");
  const std::size_t n_models = probs_per_review.front().size();
  if (n_models == 0) throw InconsistentClasses("no model probabilities given");

  Eigen::Index n_classes = probs_per_review.front().front().size();
  if (n_classes == 1) n_classes = 2;

  std::vector<Eigen::VectorXd> features;
  features.reserve(probs_per_review.size());
  for (const auto& review : probs_per_review) {
    if (review.size() != n_models)
      throw InconsistentClasses("inconsistent model count across reviews");
    Eigen::VectorXd f(static_cast<Eigen::Index>(n_models) * n_classes);
    for (std::size_t m = 0; m < n_models; ++m) {
      const Eigen::VectorXd& p = review[m];
      const Eigen::Index offset = static_cast<Eigen::Index>(m) * n_classes;
      if (p.size() == 1 && n_classes == 2) {
        f[offset] = p[0];
        f[offset + 1] = 1.0 - p[0];
      } else if (p.size() == n_classes) {
        f.segment(offset, n_classes) = p;
      } else {
        throw InconsistentClasses("model " + std::to_string(m) +
                                  " emits a different class count");
      }
    }
    features.push_back(std::move(f));
  }
  return features;
}

// Stacker input width M*C with three equally wide ReLU hidden layers and C
// independent sigmoid output units; prediction by argmax.
inline nn::Model build_stacker(int input_width, int n_classes, std::uint64_t seed,
                               nn::InitBound bound = nn::InitBound::glorot_sqrt) {
  if (input_width < 1) throw BadSpec("stacker input width must be >= 1");
  if (n_classes < 2) throw BadSpec("stacker needs at least 2 classes");

  nn::Model model;
  model.n_classes = n_classes;
  model.output = nn::OutputKind::sigmoid_multi;
  int width = input_width;
  for (int l = 0; l < 3; ++l) {
    nn::Layer layer;
    layer.kind = nn::LayerKind::dense;
    layer.weights = nn::glorot_init(width, input_width, nn::mix_seed(seed, l), bound);
    layer.bias = Eigen::VectorXd::Zero(input_width);
    model.layers.push_back(std::move(layer));
    model.layers.push_back(nn::make_layer(nn::LayerKind::relu));
    width = input_width;
  }
  nn::Layer out;
  out.kind = nn::LayerKind::dense;
  out.weights = nn::glorot_init(width, n_classes, nn::mix_seed(seed, 3), bound);
  out.bias = Eigen::VectorXd::Zero(n_classes);
  model.layers.push_back(std::move(out));
  return model;
}

// Trains a fresh stacker on stacking features with Adadelta and
// per-component binary cross-entropy.
inline nn::Model train_stacker(const std::vector<Eigen::VectorXd>& features,
                               const std::vector<int>& labels, int n_classes,
                               std::uint64_t seed, int epochs = 100, int batch_size = 32) {
  if (features.empty()) throw EmptyDataset("cannot train a stacker on no features");
  nn::Model model =
      build_stacker(static_cast<int>(features.front().size()), n_classes, seed);

  std::vector<Eigen::MatrixXd> inputs;
  inputs.reserve(features.size());
  for (const Eigen::VectorXd& f : features) inputs.emplace_back(f);

  nn::TrainConfig config;
  config.epochs = epochs;
  config.batch_size = batch_size;
  config.seed = seed;
  config.loss = nn::LossKind::bce;
  nn::train(model, inputs, labels, config);
  return model;
}

enum class StackerSource { validation, training };

inline const char* stacker_source_name(StackerSource s) {
  return s == StackerSource::validation ? "validation" : "training";
}

inline StackerSource parse_stacker_source(const std::string& name) {
  if (name == "validation") return StackerSource::validation;
  if (name == "training") return StackerSource::training;
  throw ConfigError("unknown stacker source '" + name + "'");
}

// Picks the split the stacking features are computed from.
template <typename Split>
const Split& stacker_source(StackerSource policy, const Split& train, const Split& val) {
  const Split& chosen = policy == StackerSource::validation ? val : train;
  if (chosen.empty())
    throw EmptySplit(std::string("stacker source split '") + stacker_source_name(policy) +
                     "' is empty");
  return chosen;
}

}  // namespace polarity

#endif  // POLARITY_ENSEMBLE_HPP
