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

#ifndef POLARITY_NN_SERIALIZE_HPP
#define POLARITY_NN_SERIALIZE_HPP

#include <Eigen/Core>
#include <fstream>
#include <nlohmann/json.hpp>
#include <string>

#include "polarity/errors.hpp"
#include "polarity/nn/model.hpp"

namespace polarity::nn {

inline constexpr int kModelFormatVersion = 1;

namespace detail {

inline nlohmann::json matrix_to_json(const Eigen::MatrixXd& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Eigen::MatrixXd matrix_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.empty() || !j[0].is_array())
    throw FormatError("parameter tensor must be a nested array");
  const Eigen::Index rows = static_cast<Eigen::Index>(j.size());
  const Eigen::Index cols = static_cast<Eigen::Index>(j[0].size());
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    if (!j[r].is_array() || static_cast<Eigen::Index>(j[r].size()) != cols)
      throw FormatError("ragged parameter tensor");
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = j[r][c].get<double>();
  }
  return m;
}

inline nlohmann::json vector_to_json(const Eigen::VectorXd& v) {
  nlohmann::json out = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

inline Eigen::VectorXd vector_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw FormatError("bias must be an array");
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = j[i].get<double>();
  return v;
}

inline LayerKind layer_kind_from_name(const std::string& name) {
  if (name == "dense") return LayerKind::dense;
  if (name == "conv1d") return LayerKind::conv1d;
  if (name == "relu") return LayerKind::relu;
  if (name == "max_over_time") return LayerKind::max_over_time;
  throw FormatError("unknown layer kind '" + name + "'");
}

inline OutputKind output_kind_from_name(const std::string& name) {
  if (name == "sigmoid-binary") return OutputKind::sigmoid_binary;
  if (name == "softmax") return OutputKind::softmax;
  if (name == "sigmoid-multi") return OutputKind::sigmoid_multi;
  throw FormatError("unknown output kind '" + name + "'");
}

}  // namespace detail

// Full-precision document: nlohmann prints doubles with shortest round-trip
// digits, so parse(dump(j)) restores the exact bit pattern.
inline nlohmann::json model_to_json(const Model& model) {
  nlohmann::json j;
  j["format_version"] = kModelFormatVersion;
  j["output"] = output_kind_name(model.output);
  j["n_classes"] = model.n_classes;
  nlohmann::json layers = nlohmann::json::array();
  for (const Layer& layer : model.layers) {
    nlohmann::json lj;
    lj["kind"] = layer_kind_name(layer.kind);
    if (layer.has_params()) {
      lj["weights"] = detail::matrix_to_json(layer.weights);
      lj["bias"] = detail::vector_to_json(layer.bias);
    }
    if (layer.kind == LayerKind::conv1d) {
      lj["window"] = layer.window;
      lj["input_dim"] = layer.input_dim;
    }
    layers.push_back(std::move(lj));
  }
  j["layers"] = std::move(layers);
  return j;
}

inline Model model_from_json(const nlohmann::json& j) {
  try {
    const int version = j.at("format_version").get<int>();
    if (version != kModelFormatVersion)
      throw FormatError("unsupported model format_version " + std::to_string(version));
    Model model;
    model.output = detail::output_kind_from_name(j.at("output").get<std::string>());
    model.n_classes = j.at("n_classes").get<int>();
    if (model.n_classes < 2) throw FormatError("n_classes must be at least 2");
    for (const nlohmann::json& lj : j.at("layers")) {
      Layer layer;
      layer.kind = detail::layer_kind_from_name(lj.at("kind").get<std::string>());
      if (layer.has_params()) {
        layer.weights = detail::matrix_from_json(lj.at("weights"));
        layer.bias = detail::vector_from_json(lj.at("bias"));
        if (layer.bias.size() != layer.weights.rows())
          throw FormatError("bias length does not match weight rows");
      }
      if (layer.kind == LayerKind::conv1d) {
        layer.window = lj.at("window").get<int>();
        layer.input_dim = lj.at("input_dim").get<int>();
        if (layer.window < 1 || layer.input_dim < 1)
          throw FormatError("conv1d needs positive window and input_dim");
      }
      model.layers.push_back(std::move(layer));
    }
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed model document: ") + e.what());
  }
}

inline void save_model(const Model& model, const std::string& path,
                       const nlohmann::json* extra = nullptr) {
  nlohmann::json j = model_to_json(model);
  if (extra)
    for (const auto& [key, value] : extra->items()) j[key] = value;
  std::ofstream out(path);
  if (!out) throw IoError("cannot write model file '" + path + "'");
  out << j.dump(2) << '\n';
  if (!out) throw IoError("failed writing model file '" + path + "'");
}

inline Model load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read model file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("model file is not valid JSON: ") + e.what());
  }
  return model_from_json(j);
}

}  // namespace polarity::nn

#endif  // POLARITY_NN_SERIALIZE_HPP
