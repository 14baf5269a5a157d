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

#ifndef POLARITY_NN_LOSS_HPP
#define POLARITY_NN_LOSS_HPP

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <string>

#include "polarity/errors.hpp"

namespace polarity::nn {

inline constexpr double kProbClamp = 1e-7;

inline double clamp_prob(double p) {
  return std::min(std::max(p, kProbClamp), 1.0 - kProbClamp);
}

enum class LossKind { bce, cce };

inline const char* loss_kind_name(LossKind k) {
  return k == LossKind::bce ? "bce" : "cce";
}

inline LossKind parse_loss_kind(const std::string& s) {
  if (s == "bce") return LossKind::bce;
  if (s == "cce") return LossKind::cce;
  throw ConfigError("unknown loss '" + s + "'");
}

// Cross-entropy against class index `label`. Probabilities are clamped to
// [1e-7, 1 - 1e-7] before the logarithm.
//
// bce with a single probability reads it as P(class 0); with several, each
// component is scored against the one-hot target and the terms are summed
// (the sigmoid-per-class setup). cce is -ln p_label.
inline double loss(const Eigen::VectorXd& probs, int label, LossKind kind) {
  if (label < 0) throw BadLabel("negative class index");
  if (kind == LossKind::cce) {
    if (label >= probs.size())
      throw BadLabel("class index " + std::to_string(label) + " out of range for " +
                     std::to_string(probs.size()) + " probabilities");
    return -std::log(clamp_prob(probs[label]));
  }
  if (probs.size() == 1) {
    if (label > 1) throw BadLabel("binary loss needs a class index in {0, 1}");
    const double y = label == 0 ? 1.0 : 0.0;
    const double p = clamp_prob(probs[0]);
    return -(y * std::log(p) + (1.0 - y) * std::log(1.0 - p));
  }
  if (label >= probs.size())
    throw BadLabel("class index " + std::to_string(label) + " out of range for " +
                   std::to_string(probs.size()) + " probabilities");
  double total = 0.0;
  for (Eigen::Index c = 0; c < probs.size(); ++c) {
    const double y = c == label ? 1.0 : 0.0;
    const double p = clamp_prob(probs[c]);
    total += -(y * std::log(p) + (1.0 - y) * std::log(1.0 - p));
  }
  return total;
}

}  // namespace polarity::nn

#endif  // POLARITY_NN_LOSS_HPP
