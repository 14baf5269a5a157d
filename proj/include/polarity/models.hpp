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

#ifndef POLARITY_MODELS_HPP
#define POLARITY_MODELS_HPP

#include <cstdint>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "polarity/errors.hpp"
#include "polarity/nn/init.hpp"
#include "polarity/nn/model.hpp"

namespace polarity {

enum class ModelKind { ffnn, cnn };

inline const char* model_kind_name(ModelKind k) {
  return k == ModelKind::ffnn ? "ffnn" : "cnn";
}

inline ModelKind parse_model_kind(const std::string& name) {
  if (name == "ffnn") return ModelKind::ffnn;
  if (name == "cnn") return ModelKind::cnn;
  throw ConfigError("unknown model kind '" + name + "'");
}

struct ArchitectureSpec {
  ModelKind kind = ModelKind::ffnn;
  int input_dim = 0;
  std::vector<int> hidden;  // ffnn; empty list = logistic regression
  int max_len = 0;          // cnn
  int window = 5;           // cnn
  int n_filters = 0;        // cnn; 0 means input_dim
  int n_classes = 2;
};

// The hidden-size ladder swept in the experiments, smallest first. Requires
// d divisible by 4 so every rung is an exact integer.
inline std::vector<std::vector<int>> hidden_family(int d) {
  if (d < 4 || d % 4 != 0) throw BadSpec("hidden family needs d divisible by 4");
  const int half = d / 2;
  return {{d / 4}, {half}, {d}, {half, half}, {half, half, half}, {d, half, half}};
}

inline std::vector<int> default_hidden(int d) {
  if (d < 2 || d % 2 != 0) throw BadSpec("default hidden layer d/2 needs even d");
  return {d / 2};
}

namespace detail {

inline nn::OutputKind output_for_classes(int n_classes) {
  if (n_classes == 2) return nn::OutputKind::sigmoid_binary;
  if (n_classes == 3) return nn::OutputKind::softmax;
  throw BadSpec("n_classes must be 2 or 3, got " + std::to_string(n_classes));
}

inline nn::Layer dense_layer(int n_in, int n_out, std::uint64_t seed, nn::InitBound bound) {
  nn::Layer layer;
  layer.kind = nn::LayerKind::dense;
  layer.weights = nn::glorot_init(n_in, n_out, seed, bound);
  layer.bias = Eigen::VectorXd::Zero(n_out);
  return layer;
}

}  // namespace detail

// Dense stack with ReLU between layers: d -> hidden... -> output units.
// Binary models end in a single sigmoid unit, ternary in softmax.
inline nn::Model build_ffnn(int d, const std::vector<int>& hidden, int n_classes,
                            std::uint64_t seed,
                            nn::InitBound bound = nn::InitBound::glorot_sqrt) {
  if (d < 1) throw BadSpec("input dimension must be >= 1");
  for (int h : hidden)
    if (h < 1) throw BadSpec("hidden sizes must be >= 1");

  nn::Model model;
  model.n_classes = n_classes;
  model.output = detail::output_for_classes(n_classes);

  int width = d;
  std::uint64_t k = 0;
  for (int h : hidden) {
    model.layers.push_back(detail::dense_layer(width, h, nn::mix_seed(seed, k++), bound));
    model.layers.push_back(nn::make_layer(nn::LayerKind::relu));
    width = h;
  }
  model.layers.push_back(
      detail::dense_layer(width, model.output_units(), nn::mix_seed(seed, k++), bound));
  return model;
}

// conv1d over max_len x d review matrices, ReLU, max-over-time pooling, then
// a dense readout. n_filters = 0 picks one filter per input dimension.
inline nn::Model build_cnn(int d, int max_len, int window, int n_filters, int n_classes,
                           std::uint64_t seed,
                           nn::InitBound bound = nn::InitBound::glorot_sqrt) {
  if (d < 1) throw BadSpec("input dimension must be >= 1");
  if (max_len < 1) throw BadSpec("max_len must be >= 1");
  if (window < 1) throw BadSpec("window must be >= 1");
  if (window > max_len)
    throw BadSpec("window " + std::to_string(window) + " exceeds max_len " +
                  std::to_string(max_len));
  if (n_filters == 0) n_filters = d;
  if (n_filters < 1) throw BadSpec("n_filters must be >= 1");

  nn::Model model;
  model.n_classes = n_classes;
  model.output = detail::output_for_classes(n_classes);

  nn::Layer conv;
  conv.kind = nn::LayerKind::conv1d;
  conv.window = window;
  conv.input_dim = d;
  {
    std::mt19937_64 rng(nn::mix_seed(seed, 0));
    conv.weights = nn::glorot_uniform(n_filters, static_cast<Eigen::Index>(window) * d,
                                      window * d, n_filters, rng, bound);
  }
  conv.bias = Eigen::VectorXd::Zero(n_filters);
  model.layers.push_back(std::move(conv));
  model.layers.push_back(nn::make_layer(nn::LayerKind::relu));
  model.layers.push_back(nn::make_layer(nn::LayerKind::max_over_time));
  model.layers.push_back(
      detail::dense_layer(n_filters, model.output_units(), nn::mix_seed(seed, 1), bound));
  return model;
}

inline nn::Model build_model(const ArchitectureSpec& spec, std::uint64_t seed,
                             nn::InitBound bound = nn::InitBound::glorot_sqrt) {
  if (spec.kind == ModelKind::ffnn)
    return build_ffnn(spec.input_dim, spec.hidden, spec.n_classes, seed, bound);
  return build_cnn(spec.input_dim, spec.max_len, spec.window, spec.n_filters,
                   spec.n_classes, seed, bound);
}

inline nlohmann::json architecture_to_json(const ArchitectureSpec& spec) {
  nlohmann::json j;
  j["kind"] = model_kind_name(spec.kind);
  j["input_dim"] = spec.input_dim;
  j["n_classes"] = spec.n_classes;
  if (spec.kind == ModelKind::ffnn) {
    j["hidden"] = spec.hidden;
  } else {
    j["max_len"] = spec.max_len;
    j["window"] = spec.window;
    j["n_filters"] = spec.n_filters;
  }
  return j;
}

inline ArchitectureSpec architecture_from_json(const nlohmann::json& j) {
  try {
    ArchitectureSpec spec;
    spec.kind = parse_model_kind(j.at("kind").get<std::string>());
    spec.input_dim = j.at("input_dim").get<int>();
    spec.n_classes = j.at("n_classes").get<int>();
    if (spec.kind == ModelKind::ffnn) {
      spec.hidden = j.value("hidden", std::vector<int>{});
    } else {
      spec.max_len = j.at("max_len").get<int>();
      spec.window = j.value("window", 5);
      spec.n_filters = j.value("n_filters", 0);
    }
    return spec;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed architecture: ") + e.what());
  }
}

}  // namespace polarity

#endif  // POLARITY_MODELS_HPP
