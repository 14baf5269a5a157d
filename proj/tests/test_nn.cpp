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

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "polarity/models.hpp"
#include "polarity/nn/adadelta.hpp"
#include "polarity/nn/gradcheck.hpp"
#include "polarity/nn/init.hpp"
#include "polarity/nn/loss.hpp"
#include "polarity/nn/model.hpp"
#include "polarity/nn/serialize.hpp"
#include "polarity/nn/train.hpp"
#include "helpers.hpp"

using namespace polarity;

namespace {

nn::Layer dense(const Eigen::MatrixXd& w, const Eigen::VectorXd& b) {
  nn::Layer layer;
  layer.kind = nn::LayerKind::dense;
  layer.weights = w;
  layer.bias = b;
  return layer;
}

nn::Layer conv(const Eigen::MatrixXd& w, const Eigen::VectorXd& b, int window, int input_dim) {
  nn::Layer layer;
  layer.kind = nn::LayerKind::conv1d;
  layer.weights = w;
  layer.bias = b;
  layer.window = window;
  layer.input_dim = input_dim;
  return layer;
}

nn::Model zero_dense_model(int d, int n_classes, nn::OutputKind output) {
  nn::Model m;
  const int units = output == nn::OutputKind::sigmoid_binary ? 1 : n_classes;
  m.layers.push_back(dense(Eigen::MatrixXd::Zero(units, d), Eigen::VectorXd::Zero(units)));
  m.output = output;
  m.n_classes = n_classes;
  return m;
}

}  // namespace

TEST_CASE("zero logits give uniform softmax probabilities") {
  const nn::Model m = zero_dense_model(4, 3, nn::OutputKind::softmax);
  const Eigen::VectorXd p = nn::forward(m, Eigen::MatrixXd::Ones(4, 1));
  REQUIRE(p.size() == 3);
  for (int c = 0; c < 3; ++c) CHECK(p[c] == Catch::Approx(1.0 / 3.0).margin(1e-12));
}

TEST_CASE("softmax is stable for large logits") {
  Eigen::VectorXd logits(2);
  logits << 1000.0, 0.0;
  const Eigen::VectorXd p = nn::detail::stable_softmax(logits);
  CHECK(p[0] == Catch::Approx(1.0).margin(1e-12));
  CHECK(p[1] == Catch::Approx(0.0).margin(1e-12));
  CHECK(std::isfinite(p[0]));
}

TEST_CASE("sigmoid output reads P(class 0)") {
  nn::Model m;
  m.layers.push_back(dense(Eigen::MatrixXd::Ones(1, 1), Eigen::VectorXd::Zero(1)));
  m.output = nn::OutputKind::sigmoid_binary;
  m.n_classes = 2;
  Eigen::MatrixXd x(1, 1);
  x << 3.0;
  const Eigen::VectorXd raw = nn::forward(m, x);
  REQUIRE(raw.size() == 1);
  CHECK(raw[0] == Catch::Approx(1.0 / (1.0 + std::exp(-3.0))).margin(1e-12));

  const Eigen::VectorXd expanded = nn::predict_proba(m, x);
  REQUIRE(expanded.size() == 2);
  CHECK(expanded[0] == raw[0]);
  CHECK(expanded[1] == Catch::Approx(1.0 - raw[0]).margin(1e-15));
}

TEST_CASE("relu clips negatives on the way through") {
  nn::Model m;
  m.layers.push_back(dense(Eigen::MatrixXd::Identity(2, 2), Eigen::VectorXd::Zero(2)));
  m.layers.push_back(nn::make_layer(nn::LayerKind::relu));
  Eigen::MatrixXd sum(1, 2);
  sum << 1.0, 1.0;
  m.layers.push_back(dense(sum, Eigen::VectorXd::Zero(1)));
  m.output = nn::OutputKind::sigmoid_binary;
  m.n_classes = 2;

  Eigen::MatrixXd x(2, 1);
  x << -1.0, 2.0;
  nn::ForwardCache cache;
  nn::forward(m, x, &cache);
  // (-1, 2) -> relu -> (0, 2) -> sum -> 2.
  CHECK(cache.inputs[2](0, 0) == 0.0);
  CHECK(cache.inputs[2](1, 0) == 2.0);
  CHECK(cache.logits[0] == Catch::Approx(2.0).margin(1e-12));
}

TEST_CASE("conv layer scores one window per position") {
  // One all-ones filter, window 2, width-1 rows (1), (2): score 1 + 2 = 3.
  nn::Model m;
  m.layers.push_back(conv(Eigen::MatrixXd::Ones(1, 2), Eigen::VectorXd::Zero(1), 2, 1));
  m.layers.push_back(nn::make_layer(nn::LayerKind::relu));
  m.layers.push_back(nn::make_layer(nn::LayerKind::max_over_time));
  m.layers.push_back(dense(Eigen::MatrixXd::Identity(1, 1), Eigen::VectorXd::Zero(1)));
  m.output = nn::OutputKind::sigmoid_binary;
  m.n_classes = 2;

  Eigen::MatrixXd x(2, 1);
  x << 1.0, 2.0;
  nn::ForwardCache cache;
  nn::forward(m, x, &cache);
  CHECK(cache.inputs[1](0, 0) == Catch::Approx(3.0).margin(1e-12));  // conv output
  CHECK(cache.logits[0] == Catch::Approx(3.0).margin(1e-12));
}

TEST_CASE("conv windows flatten rows in order") {
  Eigen::MatrixXd x(3, 2);
  x << 1, 2, 3, 4, 5, 6;
  const Eigen::MatrixXd w = nn::detail::conv_windows(x, 2);
  REQUIRE(w.rows() == 2);
  REQUIRE(w.cols() == 4);
  CHECK(w(0, 0) == 1);
  CHECK(w(0, 1) == 2);
  CHECK(w(0, 2) == 3);
  CHECK(w(0, 3) == 4);
  CHECK(w(1, 0) == 3);
  CHECK(w(1, 3) == 6);
}

TEST_CASE("max over time takes the column maxima") {
  nn::Model m;
  m.layers.push_back(nn::make_layer(nn::LayerKind::max_over_time));
  m.output = nn::OutputKind::sigmoid_multi;
  m.n_classes = 2;
  Eigen::MatrixXd x(3, 2);
  x << 0.5, -2.0, 1.5, -0.5, -1.0, -3.0;
  nn::ForwardCache cache;
  nn::forward(m, x, &cache);
  CHECK(cache.logits[0] == 1.5);
  CHECK(cache.logits[1] == -0.5);
}

TEST_CASE("argmax breaks ties toward the lowest index") {
  Eigen::VectorXd v(4);
  v << 2.0, 5.0, 5.0, 1.0;
  CHECK(nn::argmax_class(v) == 1);
  Eigen::VectorXd flat = Eigen::VectorXd::Constant(3, 0.25);
  CHECK(nn::argmax_class(flat) == 0);
}

TEST_CASE("forward validates shapes") {
  nn::Model m = zero_dense_model(4, 2, nn::OutputKind::sigmoid_binary);
  CHECK_THROWS_AS(nn::forward(m, Eigen::MatrixXd::Zero(3, 1)), ShapeMismatch);
  CHECK_THROWS_AS(nn::forward(m, Eigen::MatrixXd::Zero(4, 2)), ShapeMismatch);

  nn::Model c;
  c.layers.push_back(conv(Eigen::MatrixXd::Ones(1, 6), Eigen::VectorXd::Zero(1), 3, 2));
  c.layers.push_back(nn::make_layer(nn::LayerKind::max_over_time));
  c.output = nn::OutputKind::sigmoid_binary;
  c.n_classes = 2;
  CHECK_THROWS_AS(nn::forward(c, Eigen::MatrixXd::Zero(2, 2)), ShapeMismatch);  // too short
  CHECK_THROWS_AS(nn::forward(c, Eigen::MatrixXd::Zero(4, 3)), ShapeMismatch);  // wrong width
  CHECK_NOTHROW(nn::forward(c, Eigen::MatrixXd::Zero(3, 2)));
}

TEST_CASE("cross-entropy of the uniform ternary prediction is ln 3") {
  const Eigen::VectorXd p = Eigen::VectorXd::Constant(3, 1.0 / 3.0);
  CHECK(nn::loss(p, 0, nn::LossKind::cce) == Catch::Approx(std::log(3.0)).margin(1e-12));
  CHECK(nn::loss(p, 2, nn::LossKind::cce) == Catch::Approx(1.0986122886681098).margin(1e-12));
}

TEST_CASE("binary cross-entropy clamps certainty") {
  Eigen::VectorXd p(1);
  p << 0.0;
  CHECK(nn::loss(p, 0, nn::LossKind::bce) ==
        Catch::Approx(-std::log(1e-7)).margin(1e-9));  // about 16.118
  p << 1.0;
  CHECK(nn::loss(p, 1, nn::LossKind::bce) == Catch::Approx(-std::log(1e-7)).margin(1e-9));
  p << 0.25;
  CHECK(nn::loss(p, 0, nn::LossKind::bce) == Catch::Approx(-std::log(0.25)).margin(1e-12));
  CHECK(nn::loss(p, 1, nn::LossKind::bce) == Catch::Approx(-std::log(0.75)).margin(1e-12));
}

TEST_CASE("multi-unit bce sums the per-class terms") {
  Eigen::VectorXd p(2);
  p << 0.8, 0.3;
  const double expected = -std::log(0.8) - std::log(0.7);
  CHECK(nn::loss(p, 0, nn::LossKind::bce) == Catch::Approx(expected).margin(1e-12));
}

TEST_CASE("loss rejects out-of-range labels") {
  const Eigen::VectorXd p3 = Eigen::VectorXd::Constant(3, 1.0 / 3.0);
  CHECK_THROWS_AS(nn::loss(p3, -1, nn::LossKind::cce), BadLabel);
  CHECK_THROWS_AS(nn::loss(p3, 3, nn::LossKind::cce), BadLabel);
  Eigen::VectorXd p1(1);
  p1 << 0.5;
  CHECK_THROWS_AS(nn::loss(p1, 2, nn::LossKind::bce), BadLabel);
  CHECK_THROWS_AS(nn::loss(p3, 3, nn::LossKind::bce), BadLabel);
}

TEST_CASE("glorot bounds follow the fan sizes") {
  CHECK(nn::init_bound_value(100, 50, nn::InitBound::glorot_sqrt) ==
        Catch::Approx(0.2).margin(1e-12));
  CHECK(nn::init_bound_value(1, 1, nn::InitBound::glorot_sqrt) ==
        Catch::Approx(std::sqrt(3.0)).margin(1e-12));
  CHECK(nn::init_bound_value(1, 1, nn::InitBound::glorot_printed) ==
        Catch::Approx(3.0).margin(1e-12));

  const Eigen::MatrixXd w = nn::glorot_init(100, 50, 7);
  CHECK(w.rows() == 50);
  CHECK(w.cols() == 100);
  CHECK(w.cwiseAbs().maxCoeff() <= 0.2);
  CHECK(w.cwiseAbs().maxCoeff() > 0.15);  // the draw actually spans the range
}

TEST_CASE("glorot init is deterministic in the seed") {
  CHECK(nn::glorot_init(8, 4, 99) == nn::glorot_init(8, 4, 99));
  CHECK(nn::glorot_init(8, 4, 99) != nn::glorot_init(8, 4, 100));
  std::mt19937_64 rng(3);
  CHECK_THROWS_AS(nn::glorot_uniform(2, 2, 0, 2, rng), BadSpec);
}

TEST_CASE("adadelta first step has the no-history magnitude") {
  nn::Model m;
  m.layers.push_back(dense(Eigen::MatrixXd::Zero(1, 1), Eigen::VectorXd::Zero(1)));
  m.output = nn::OutputKind::sigmoid_binary;
  m.n_classes = 2;
  nn::AdadeltaState state = nn::AdadeltaState::for_model(m);
  nn::Gradients grads = nn::zero_gradients(m);
  grads.weights[0](0, 0) = 1.0;
  grads.bias[0][0] = 1.0;
  nn::adadelta_update(m, grads, state);

  const double expected = -std::sqrt(1e-6 / (0.05 * 1.0 + 1e-6));
  CHECK(m.layers[0].weights(0, 0) == Catch::Approx(expected).margin(1e-12));
  CHECK(m.layers[0].weights(0, 0) == Catch::Approx(-4.4721e-3).margin(1e-6));
  CHECK(m.layers[0].bias[0] == Catch::Approx(expected).margin(1e-12));
}

TEST_CASE("adadelta matches a scalar reimplementation over several steps") {
  nn::Model m;
  m.layers.push_back(dense(Eigen::MatrixXd::Zero(1, 1), Eigen::VectorXd::Zero(1)));
  m.output = nn::OutputKind::sigmoid_binary;
  m.n_classes = 2;
  nn::AdadeltaState state = nn::AdadeltaState::for_model(m);

  const double rho = 0.95, eps = 1e-6;
  double eg = 0.0, ed = 0.0, x = 0.0;
  for (double g : {1.0, -2.0, 0.5, 0.0, 3.0}) {
    nn::Gradients grads = nn::zero_gradients(m);
    grads.weights[0](0, 0) = g;
    nn::adadelta_update(m, grads, state);

    eg = rho * eg + (1.0 - rho) * g * g;
    const double dx = -std::sqrt((ed + eps) / (eg + eps)) * g;
    ed = rho * ed + (1.0 - rho) * dx * dx;
    x += dx;
    CHECK(m.layers[0].weights(0, 0) == Catch::Approx(x).margin(1e-15));
  }
}

TEST_CASE("adadelta leaves zero-gradient parameters alone") {
  nn::Model m;
  m.layers.push_back(dense(Eigen::MatrixXd::Ones(1, 2), Eigen::VectorXd::Zero(1)));
  m.output = nn::OutputKind::sigmoid_binary;
  m.n_classes = 2;
  nn::AdadeltaState state = nn::AdadeltaState::for_model(m);
  nn::Gradients grads = nn::zero_gradients(m);
  grads.weights[0](0, 0) = 1.0;  // second weight's gradient stays zero
  nn::adadelta_update(m, grads, state);
  CHECK(m.layers[0].weights(0, 0) != 1.0);
  CHECK(m.layers[0].weights(0, 1) == 1.0);
  CHECK(m.layers[0].bias[0] == 0.0);
}

TEST_CASE("adadelta validates its configuration and state") {
  nn::Model m = zero_dense_model(2, 2, nn::OutputKind::sigmoid_binary);
  nn::AdadeltaState state = nn::AdadeltaState::for_model(m);
  const nn::Gradients grads = nn::zero_gradients(m);
  CHECK_THROWS_AS(nn::adadelta_update(m, grads, state, {1.0, 1e-6}), BadSpec);
  CHECK_THROWS_AS(nn::adadelta_update(m, grads, state, {0.95, 0.0}), BadSpec);
  nn::AdadeltaState empty;
  CHECK_THROWS_AS(nn::adadelta_update(m, grads, empty), ShapeMismatch);
}

TEST_CASE("output-layer gradient is probs minus one-hot") {
  nn::Model m = zero_dense_model(4, 3, nn::OutputKind::softmax);
  nn::ForwardCache cache;
  const Eigen::VectorXd probs = nn::forward(m, Eigen::MatrixXd::Ones(4, 1), &cache);
  const nn::Gradients grads = nn::backward(m, cache, 1);
  for (int c = 0; c < 3; ++c) {
    const double y = c == 1 ? 1.0 : 0.0;
    CHECK(grads.bias[0][c] == Catch::Approx(probs[c] - y).margin(1e-15));
  }

  nn::Model b = zero_dense_model(4, 2, nn::OutputKind::sigmoid_binary);
  const Eigen::VectorXd p = nn::forward(b, Eigen::MatrixXd::Ones(4, 1), &cache);
  CHECK(nn::backward(b, cache, 0).bias[0][0] == Catch::Approx(p[0] - 1.0).margin(1e-15));
  CHECK(nn::backward(b, cache, 1).bias[0][0] == Catch::Approx(p[0]).margin(1e-15));
}

TEST_CASE("zero input zeroes the weight gradient but not the bias") {
  nn::Model m = zero_dense_model(4, 2, nn::OutputKind::sigmoid_binary);
  nn::ForwardCache cache;
  nn::forward(m, Eigen::MatrixXd::Zero(4, 1), &cache);
  const nn::Gradients grads = nn::backward(m, cache, 1);
  CHECK(grads.weights[0].norm() == 0.0);
  CHECK(grads.bias[0].norm() > 0.0);
}

TEST_CASE("backward rejects bad labels and stale caches") {
  nn::Model m = zero_dense_model(2, 2, nn::OutputKind::sigmoid_binary);
  nn::ForwardCache cache;
  nn::forward(m, Eigen::MatrixXd::Ones(2, 1), &cache);
  CHECK_THROWS_AS(nn::backward(m, cache, 2), BadLabel);
  CHECK_THROWS_AS(nn::backward(m, cache, -1), BadLabel);
  cache.inputs.pop_back();
  CHECK_THROWS_AS(nn::backward(m, cache, 0), ShapeMismatch);
}

TEST_CASE("analytic gradients agree with finite differences") {
  std::mt19937_64 rng(51);
  const auto resample = [&](Eigen::Index rows, Eigen::Index cols) {
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r)
      for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = 2.0 * testutil::unit_draw(rng) - 1.0;
    return m;
  };

  nn::Model ffnn = build_ffnn(8, {4}, 2, 2024);
  const double ffnn_err = nn::nudged_gradient_check(
      ffnn, [&](int) { return resample(8, 1); }, 1);
  CHECK(ffnn_err < 1e-4);

  nn::Model deep = build_ffnn(8, {8, 4, 4}, 3, 2025);
  const double deep_err = nn::nudged_gradient_check(
      deep, [&](int) { return resample(8, 1); }, 2);
  CHECK(deep_err < 1e-4);

  nn::Model cnn = build_cnn(4, 5, 2, 3, 3, 2026);
  const double cnn_err = nn::nudged_gradient_check(
      cnn, [&](int) { return resample(5, 4); }, 0);
  CHECK(cnn_err < 1e-4);
}

TEST_CASE("gradient check validates the step size") {
  nn::Model m = zero_dense_model(2, 2, nn::OutputKind::sigmoid_binary);
  const Eigen::MatrixXd x = Eigen::MatrixXd::Ones(2, 1);
  CHECK_THROWS_AS(nn::gradient_check(m, x, 0, 1e-7), BadSpec);
  CHECK_THROWS_AS(nn::gradient_check(m, x, 0, 1e-3), BadSpec);
  CHECK_NOTHROW(nn::gradient_check(m, x, 0, 1e-5));
}

namespace {

void blob_data(int n, int d, std::uint64_t seed, std::vector<Eigen::MatrixXd>& inputs,
               std::vector<int>& labels) {
  std::mt19937_64 rng(seed);
  inputs.clear();
  labels.clear();
  for (int i = 0; i < n; ++i) {
    const int label = i % 2;
    Eigen::MatrixXd x(d, 1);
    for (int k = 0; k < d; ++k)
      x(k, 0) = (label == 0 ? 1.0 : -1.0) * (k == 0 ? 1.0 : 0.2) +
                0.2 * (2.0 * testutil::unit_draw(rng) - 1.0);
    inputs.push_back(x);
    labels.push_back(label);
  }
}

}  // namespace

TEST_CASE("training is deterministic given the seed") {
  std::vector<Eigen::MatrixXd> inputs;
  std::vector<int> labels;
  blob_data(24, 4, 61, inputs, labels);

  nn::TrainConfig cfg;
  cfg.epochs = 5;
  cfg.seed = 9;

  nn::Model a = build_ffnn(4, {2}, 2, 123);
  nn::Model b = build_ffnn(4, {2}, 2, 123);
  const auto ha = nn::train(a, inputs, labels, cfg);
  const auto hb = nn::train(b, inputs, labels, cfg);

  REQUIRE(ha.size() == hb.size());
  for (std::size_t e = 0; e < ha.size(); ++e) {
    CHECK(ha[e].train_loss == hb[e].train_loss);
    CHECK(ha[e].train_accuracy == hb[e].train_accuracy);
  }
  for (std::size_t l = 0; l < a.layers.size(); ++l) {
    CHECK(a.layers[l].weights == b.layers[l].weights);
    CHECK(a.layers[l].bias == b.layers[l].bias);
  }
}

TEST_CASE("a batch covering the whole set behaves like one big batch") {
  std::vector<Eigen::MatrixXd> inputs;
  std::vector<int> labels;
  blob_data(20, 4, 71, inputs, labels);

  nn::TrainConfig exact;
  exact.epochs = 3;
  exact.batch_size = 20;
  nn::TrainConfig oversized = exact;
  oversized.batch_size = 64;

  nn::Model a = build_ffnn(4, {2}, 2, 5);
  nn::Model b = build_ffnn(4, {2}, 2, 5);
  nn::train(a, inputs, labels, exact);
  nn::train(b, inputs, labels, oversized);
  for (std::size_t l = 0; l < a.layers.size(); ++l)
    CHECK(a.layers[l].weights == b.layers[l].weights);
}

TEST_CASE("two separable points are learned within 200 epochs") {
  std::vector<Eigen::MatrixXd> inputs(2, Eigen::MatrixXd::Zero(4, 1));
  inputs[0](0, 0) = 1.0;
  inputs[1](0, 0) = -1.0;
  const std::vector<int> labels{0, 1};

  nn::Model m = build_ffnn(4, {2}, 2, 1);
  nn::TrainConfig cfg;
  cfg.epochs = 200;
  cfg.seed = 1;
  const auto history = nn::train(m, inputs, labels, cfg);
  REQUIRE(history.size() == 200);
  CHECK(history.front().epoch == 1);
  CHECK(history.back().epoch == 200);

  CHECK(nn::forward(m, inputs[0])[0] >= 0.5);
  CHECK(nn::forward(m, inputs[1])[0] < 0.5);
}

TEST_CASE("train validates its configuration") {
  std::vector<Eigen::MatrixXd> inputs(2, Eigen::MatrixXd::Zero(2, 1));
  std::vector<int> labels{0, 1};
  nn::Model m = build_ffnn(2, {}, 2, 3);

  nn::TrainConfig cfg;
  cfg.epochs = 0;
  CHECK_THROWS_AS(nn::train(m, inputs, labels, cfg), BadSpec);
  cfg.epochs = 1;
  cfg.batch_size = 0;
  CHECK_THROWS_AS(nn::train(m, inputs, labels, cfg), BadSpec);
  cfg.batch_size = 32;
  CHECK_THROWS_AS(nn::train(m, {}, {}, cfg), EmptyDataset);
  labels.pop_back();
  CHECK_THROWS_AS(nn::train(m, inputs, labels, cfg), ShapeMismatch);
  labels.push_back(1);

  cfg.loss = nn::LossKind::cce;  // sigmoid output cannot pair with cce
  CHECK_THROWS_AS(nn::train(m, inputs, labels, cfg), BadSpec);

  nn::Model ternary = build_ffnn(2, {}, 3, 3);
  cfg.loss = nn::LossKind::bce;  // softmax output cannot pair with bce
  CHECK_THROWS_AS(nn::train(ternary, inputs, labels, cfg), BadSpec);
}

TEST_CASE("validation metrics appear only when a validation set is given") {
  std::vector<Eigen::MatrixXd> inputs;
  std::vector<int> labels;
  blob_data(16, 4, 81, inputs, labels);
  std::vector<Eigen::MatrixXd> val_inputs(inputs.begin(), inputs.begin() + 4);
  std::vector<int> val_labels(labels.begin(), labels.begin() + 4);

  nn::TrainConfig cfg;
  cfg.epochs = 2;

  nn::Model with_val = build_ffnn(4, {2}, 2, 15);
  const auto hv = nn::train(with_val, inputs, labels, cfg, &val_inputs, &val_labels);
  CHECK_FALSE(std::isnan(hv.back().val_loss));
  CHECK_FALSE(std::isnan(hv.back().val_accuracy));

  nn::Model without = build_ffnn(4, {2}, 2, 15);
  const auto h = nn::train(without, inputs, labels, cfg);
  CHECK(std::isnan(h.back().val_loss));
  CHECK(std::isnan(h.back().val_accuracy));
}

TEST_CASE("score_dataset reports mean loss and accuracy") {
  const nn::Model m = zero_dense_model(2, 2, nn::OutputKind::sigmoid_binary);
  const std::vector<Eigen::MatrixXd> inputs(4, Eigen::MatrixXd::Ones(2, 1));
  const std::vector<int> labels{0, 0, 1, 1};
  double mean_loss = 0.0, accuracy = 0.0;
  nn::score_dataset(m, inputs, labels, nn::LossKind::bce, mean_loss, accuracy);
  // p = 0.5 everywhere: loss ln 2, prediction class 0 (0.5 rounds up).
  CHECK(mean_loss == Catch::Approx(std::log(2.0)).margin(1e-12));
  CHECK(accuracy == 0.5);
  CHECK_THROWS_AS(nn::score_dataset(m, {}, {}, nn::LossKind::bce, mean_loss, accuracy),
                  EmptyDataset);
}

TEST_CASE("models survive a save/load round trip exactly") {
  testutil::TempDir tmp;
  nn::Model m = build_cnn(4, 6, 3, 2, 3, 77);
  nn::save_model(m, (tmp / "model.json").string());
  const nn::Model loaded = nn::load_model((tmp / "model.json").string());

  REQUIRE(loaded.layers.size() == m.layers.size());
  CHECK(loaded.output == m.output);
  CHECK(loaded.n_classes == m.n_classes);
  for (std::size_t l = 0; l < m.layers.size(); ++l) {
    CHECK(loaded.layers[l].kind == m.layers[l].kind);
    CHECK(loaded.layers[l].window == m.layers[l].window);
    CHECK(loaded.layers[l].input_dim == m.layers[l].input_dim);
    if (m.layers[l].has_params()) {
      CHECK(loaded.layers[l].weights == m.layers[l].weights);
      CHECK(loaded.layers[l].bias == m.layers[l].bias);
    }
  }

  std::mt19937_64 rng(1);
  Eigen::MatrixXd x(6, 4);
  for (int r = 0; r < 6; ++r)
    for (int c = 0; c < 4; ++c) x(r, c) = 2.0 * testutil::unit_draw(rng) - 1.0;
  CHECK(nn::forward(m, x) == nn::forward(loaded, x));
}

TEST_CASE("save_model merges extra metadata keys") {
  testutil::TempDir tmp;
  nn::Model m = build_ffnn(2, {}, 2, 5);
  nlohmann::json extra;
  extra["note"] = "hello";
  nn::save_model(m, (tmp / "model.json").string(), &extra);
  const std::string text = testutil::read_file(tmp / "model.json");
  const nlohmann::json j = nlohmann::json::parse(text);
  CHECK(j.at("note") == "hello");
  CHECK(j.at("format_version") == nn::kModelFormatVersion);
  CHECK_NOTHROW(nn::load_model((tmp / "model.json").string()));
}

TEST_CASE("model loader rejects foreign versions and ragged tensors") {
  testutil::TempDir tmp;
  testutil::write_file(tmp / "version.json",
                       "{\"format_version\": 99, \"output\": \"softmax\", \"n_classes\": 3, "
                       "\"layers\": []}");
  CHECK_THROWS_AS(nn::load_model((tmp / "version.json").string()), FormatError);

  testutil::write_file(tmp / "ragged.json",
                       "{\"format_version\": 1, \"output\": \"sigmoid-binary\", "
                       "\"n_classes\": 2, \"layers\": [{\"kind\": \"dense\", "
                       "\"weights\": [[1, 2], [3]], \"bias\": [0, 0]}]}");
  CHECK_THROWS_AS(nn::load_model((tmp / "ragged.json").string()), FormatError);
}

TEST_CASE("mix_seed separates substreams deterministically") {
  CHECK(nn::mix_seed(42, 0) == nn::mix_seed(42, 0));
  CHECK(nn::mix_seed(42, 0) != nn::mix_seed(42, 1));
  CHECK(nn::mix_seed(42, 0) != nn::mix_seed(43, 0));
}
