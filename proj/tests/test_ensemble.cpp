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
#include <vector>

#include "polarity/ensemble.hpp"
#include "polarity/nn/train.hpp"
#include "helpers.hpp"

using namespace polarity;

namespace {

using ReviewProbs = std::vector<std::vector<Eigen::VectorXd>>;

int plain_argmax(const Eigen::VectorXd& v) {
  int best = 0;
  for (int i = 1; i < v.size(); ++i)
    if (v[i] > v[best]) best = i;
  return best;
}

// Independent reimplementation of the weight search: same odometer order,
// same counters-times-step weight arithmetic, plain loops for the scores.
GridSearchResult slow_grid_search(const ReviewProbs& probs, const std::vector<int>& labels,
                                  double step) {
  const std::size_t n_models = probs.front().size();
  const int n_steps = static_cast<int>(std::lround(1.0 / step));
  std::vector<int> counters(n_models, 0);
  GridSearchResult best;
  best.accuracy = -1.0;

  for (;;) {
    std::vector<double> weights(n_models);
    bool all_zero = true;
    for (std::size_t m = 0; m < n_models; ++m) {
      weights[m] = counters[m] * step;
      if (counters[m] != 0) all_zero = false;
    }
    if (!all_zero) {
      std::size_t correct = 0;
      for (std::size_t r = 0; r < probs.size(); ++r) {
        Eigen::VectorXd scores = Eigen::VectorXd::Zero(probs[r].front().size());
        for (std::size_t m = 0; m < n_models; ++m)
          for (Eigen::Index c = 0; c < scores.size(); ++c)
            scores[c] += weights[m] * std::log(std::max(probs[r][m][c], 1e-12));
        if (plain_argmax(scores) == labels[r]) ++correct;
      }
      const double acc =
          static_cast<double>(correct) / static_cast<double>(probs.size());
      if (acc > best.accuracy) {
        best.accuracy = acc;
        best.weights = weights;
      }
    }
    std::size_t pos = n_models;
    bool rolled_over = false;
    while (pos-- > 0) {
      if (++counters[pos] <= n_steps) break;
      counters[pos] = 0;
      if (pos == 0) rolled_over = true;
    }
    if (rolled_over) return best;
  }
}

Eigen::VectorXd random_distribution(int n_classes, std::mt19937_64& rng) {
  Eigen::VectorXd p(n_classes);
  double sum = 0.0;
  for (int c = 0; c < n_classes; ++c) {
    p[c] = 0.05 + testutil::unit_draw(rng);
    sum += p[c];
  }
  return p / sum;
}

ReviewProbs random_scenario(int n_reviews, int n_models, int n_classes,
                            std::mt19937_64& rng, std::vector<int>& labels) {
  ReviewProbs probs(n_reviews);
  labels.resize(n_reviews);
  for (int r = 0; r < n_reviews; ++r) {
    labels[r] = static_cast<int>(rng() % n_classes);
    for (int m = 0; m < n_models; ++m)
      probs[r].push_back(random_distribution(n_classes, rng));
  }
  return probs;
}

}  // namespace

TEST_CASE("a single unit-weight model scores its own log probabilities") {
  Eigen::VectorXd p(2);
  p << 0.2, 0.8;
  const Eigen::VectorXd scores = interpolate_log_probs({p}, {1.0});
  CHECK(scores[0] == Catch::Approx(std::log(0.2)).margin(1e-12));
  CHECK(scores[1] == Catch::Approx(std::log(0.8)).margin(1e-12));
  CHECK(ensemble_predict({p}, {1.0}) == 1);
}

TEST_CASE("zero probabilities are floored, not -infinity") {
  Eigen::VectorXd p(2);
  p << 0.0, 1.0;
  const Eigen::VectorXd scores = interpolate_log_probs({p}, {1.0});
  CHECK(std::isfinite(scores[0]));
  CHECK(scores[0] == Catch::Approx(std::log(1e-12)).margin(1e-9));
  CHECK(ensemble_predict({p}, {1.0}) == 1);
}

TEST_CASE("scaling every weight leaves the prediction unchanged") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<Eigen::VectorXd> probs{random_distribution(3, rng),
                                       random_distribution(3, rng)};
    const std::vector<double> w{0.3, 0.6};
    const std::vector<double> scaled{0.1, 0.2};
    CHECK(ensemble_predict(probs, w) == ensemble_predict(probs, scaled));
  }
}

TEST_CASE("score ties resolve to the lowest class") {
  Eigen::VectorXd uniform = Eigen::VectorXd::Constant(3, 1.0 / 3.0);
  CHECK(ensemble_predict({uniform, uniform}, {0.5, 0.5}) == 0);
}

TEST_CASE("interpolation validates its inputs") {
  Eigen::VectorXd p2(2), p3(3);
  p2 << 0.5, 0.5;
  p3 << 0.2, 0.3, 0.5;
  CHECK_THROWS_AS(interpolate_log_probs({}, {}), LengthMismatch);
  CHECK_THROWS_AS(interpolate_log_probs({p2}, {0.5, 0.5}), LengthMismatch);
  CHECK_THROWS_AS(interpolate_log_probs({p2, p3}, {0.5, 0.5}), LengthMismatch);
}

TEST_CASE("grid search agrees with the slow reimplementation") {
  std::mt19937_64 rng(404);
  const double steps[] = {1.0, 0.5, 0.25, 0.2};
  int trial = 0;
  for (int n_models : {2, 3}) {
    for (int n_classes : {2, 3}) {
      for (double step : steps) {
        INFO("models=" << n_models << " classes=" << n_classes << " step=" << step);
        std::vector<int> labels;
        const ReviewProbs probs = random_scenario(7, n_models, n_classes, rng, labels);
        const GridSearchResult fast = grid_search_weights(probs, labels, step);
        const GridSearchResult slow = slow_grid_search(probs, labels, step);
        CHECK(fast.accuracy == slow.accuracy);
        REQUIRE(fast.weights.size() == slow.weights.size());
        for (std::size_t m = 0; m < fast.weights.size(); ++m)
          CHECK(fast.weights[m] == slow.weights[m]);
        ++trial;
      }
    }
  }
  CHECK(trial == 16);
}

TEST_CASE("a perfect model takes all the weight it needs") {
  ReviewProbs probs;
  std::vector<int> labels;
  for (int r = 0; r < 6; ++r) {
    const int y = r % 2;
    Eigen::VectorXd right(2), wrong(2);
    right << (y == 0 ? 0.9 : 0.1), (y == 0 ? 0.1 : 0.9);
    wrong << right[1], right[0];
    probs.push_back({right, wrong});
    labels.push_back(y);
  }
  const GridSearchResult best = grid_search_weights(probs, labels, 0.5);
  CHECK(best.accuracy == 1.0);
  REQUIRE(best.weights.size() == 2);
  CHECK(best.weights[0] == 0.5);
  CHECK(best.weights[1] == 0.0);
}

TEST_CASE("accuracy ties pick the first candidate in odometer order") {
  ReviewProbs probs;
  std::vector<int> labels;
  for (int r = 0; r < 4; ++r) {
    const int y = r % 2;
    Eigen::VectorXd p(2);
    p << (y == 0 ? 0.8 : 0.2), (y == 0 ? 0.2 : 0.8);
    probs.push_back({p, p});  // identical twins, every candidate is perfect
    labels.push_back(y);
  }
  const GridSearchResult best = grid_search_weights(probs, labels, 0.5);
  CHECK(best.accuracy == 1.0);
  CHECK(best.weights[0] == 0.0);
  CHECK(best.weights[1] == 0.5);
}

TEST_CASE("grid search validates the step and the inputs") {
  Eigen::VectorXd p(2);
  p << 0.5, 0.5;
  const ReviewProbs probs{{p, p}};
  const std::vector<int> labels{0};
  CHECK_THROWS_AS(grid_search_weights(probs, labels, 0.3), BadSpec);
  CHECK_THROWS_AS(grid_search_weights(probs, labels, 0.0), BadSpec);
  CHECK_THROWS_AS(grid_search_weights(probs, labels, 1.5), BadSpec);
  CHECK_THROWS_AS(grid_search_weights(probs, labels, -0.1), BadSpec);
  CHECK_THROWS_AS(grid_search_weights({}, {}, 0.5), EmptyValidation);
  CHECK_THROWS_AS(grid_search_weights(probs, {0, 1}, 0.5), LengthMismatch);

  ReviewProbs ragged{{p, p}, {p}};
  CHECK_THROWS_AS(grid_search_weights(ragged, {0, 1}, 0.5), LengthMismatch);

  const GridSearchResult coarse = grid_search_weights(probs, labels, 1.0);
  for (double w : coarse.weights) CHECK((w == 0.0 || w == 1.0));
}

TEST_CASE("stacking features concatenate model blocks in order") {
  Eigen::VectorXd m0(3), m1(3);
  m0 << 0.1, 0.2, 0.7;
  m1 << 0.5, 0.3, 0.2;
  const auto features = build_stacking_features({{m0, m1}});
  REQUIRE(features.size() == 1);
  REQUIRE(features[0].size() == 6);
  CHECK(features[0][0] == 0.1);
  CHECK(features[0][2] == 0.7);
  CHECK(features[0][3] == 0.5);
  CHECK(features[0][5] == 0.2);
}

TEST_CASE("binary outputs expand to a two-way distribution") {
  Eigen::VectorXd a(1), b(1);
  a << 0.9;
  b << 0.25;
  const auto features = build_stacking_features({{a, b}});
  REQUIRE(features[0].size() == 4);
  CHECK(features[0][0] == 0.9);
  CHECK(features[0][1] == Catch::Approx(0.1).margin(1e-15));
  CHECK(features[0][2] == 0.25);
  CHECK(features[0][3] == 0.75);

  // Already-expanded binary probabilities pass through untouched.
  Eigen::VectorXd pair(2);
  pair << 0.6, 0.4;
  const auto expanded = build_stacking_features({{pair, a}});
  REQUIRE(expanded[0].size() == 4);
  CHECK(expanded[0][0] == 0.6);
  CHECK(expanded[0][2] == 0.9);
}

TEST_CASE("stacking rejects inconsistent shapes") {
  Eigen::VectorXd p1(1), p2(2), p3(3);
  p1 << 0.5;
  p2 << 0.5, 0.5;
  p3 << 0.2, 0.3, 0.5;
  CHECK_THROWS_AS(build_stacking_features({}), EmptyDataset);
  CHECK_THROWS_AS(build_stacking_features({{p1, p3}}), InconsistentClasses);
  CHECK_THROWS_AS(build_stacking_features({{p3, p3}, {p3}}), InconsistentClasses);
  CHECK_THROWS_AS(build_stacking_features({{p3, p2}}), InconsistentClasses);
}

TEST_CASE("the stacker keeps its hidden width and ends in sigmoids") {
  const nn::Model wide = build_stacker(9, 3, 41);
  REQUIRE(wide.layers.size() == 7);
  CHECK(wide.layers[0].weights.rows() == 9);
  CHECK(wide.layers[0].weights.cols() == 9);
  CHECK(wide.layers[2].weights.rows() == 9);
  CHECK(wide.layers[4].weights.rows() == 9);
  CHECK(wide.layers[6].weights.rows() == 3);
  CHECK(wide.layers[6].weights.cols() == 9);
  CHECK(wide.output == nn::OutputKind::sigmoid_multi);
  CHECK(wide.n_classes == 3);
  CHECK(wide.loss_kind() == nn::LossKind::bce);

  const nn::Model narrow = build_stacker(4, 2, 41);
  REQUIRE(narrow.layers.size() == 7);
  CHECK(narrow.layers[0].weights.cols() == 4);
  CHECK(narrow.layers[6].weights.rows() == 2);

  CHECK_THROWS_AS(build_stacker(0, 2, 1), BadSpec);
  CHECK_THROWS_AS(build_stacker(4, 1, 1), BadSpec);
}

TEST_CASE("the stacker learns cleanly separable member probabilities") {
  std::mt19937_64 rng(5);
  std::vector<Eigen::VectorXd> features;
  std::vector<int> labels;
  for (int i = 0; i < 48; ++i) {
    const int y = i % 2;
    Eigen::VectorXd f(4);
    for (int m = 0; m < 2; ++m) {
      const double confident = 0.8 + 0.15 * testutil::unit_draw(rng);
      f[2 * m + y] = confident;
      f[2 * m + (1 - y)] = 1.0 - confident;
    }
    features.push_back(f);
    labels.push_back(y);
  }

  const nn::Model s1 = train_stacker(features, labels, 2, 7, 300, 16);
  const nn::Model s2 = train_stacker(features, labels, 2, 7, 300, 16);
  for (std::size_t l = 0; l < s1.layers.size(); ++l) {
    CHECK(s1.layers[l].weights == s2.layers[l].weights);
    CHECK(s1.layers[l].bias == s2.layers[l].bias);
  }

  std::vector<Eigen::MatrixXd> inputs;
  for (const auto& f : features) inputs.emplace_back(f);
  double mean_loss = 0.0, accuracy = 0.0;
  nn::score_dataset(s1, inputs, labels, nn::LossKind::bce, mean_loss, accuracy);
  CHECK(accuracy >= 0.9);

  CHECK_THROWS_AS(train_stacker({}, {}, 2, 7), EmptyDataset);
}

TEST_CASE("stacker source policy picks the requested split") {
  const std::vector<int> train{1, 2, 3};
  const std::vector<int> val{4};
  const std::vector<int> empty;
  CHECK(&stacker_source(StackerSource::validation, train, val) == &val);
  CHECK(&stacker_source(StackerSource::training, train, val) == &train);
  CHECK_THROWS_AS(stacker_source(StackerSource::validation, train, empty), EmptySplit);
  CHECK_THROWS_AS(stacker_source(StackerSource::training, empty, val), EmptySplit);

  CHECK(parse_stacker_source("validation") == StackerSource::validation);
  CHECK(parse_stacker_source("training") == StackerSource::training);
  CHECK_THROWS_AS(parse_stacker_source("test"), ConfigError);
  CHECK(std::string(stacker_source_name(StackerSource::training)) == "training");
}
