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

// Minimal end-to-end use of the library without any input files: build two
// tiny embedding tables, average word vectors into review features, train a
// small dense classifier and print its training accuracy.

#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "polarity/polarity.hpp"

int main() {
  using namespace polarity;

  // Two embedding sources, as if loaded from word2vec and glove files. Words
  // carry a class-correlated direction plus noise.
  const int d1 = 6, d2 = 4;
  EmbeddingTable w2v("w2v", d1), glove("glove", d2);
  std::mt19937_64 rng(7);
  const std::vector<std::string> pos_words = {"great", "lovely", "superb", "fine"};
  const std::vector<std::string> neg_words = {"awful", "dire", "poor", "bleak"};
  auto make_vec = [&](int dim, double sign) {
    Eigen::VectorXd v(dim);
    for (int k = 0; k < dim; ++k) v[k] = sign + 0.3 * (2.0 * nn::uniform_unit(rng) - 1.0);
    return v;
  };
  for (const auto& w : pos_words) {
    w2v.insert(w, make_vec(d1, 1.0));
    glove.insert(w, make_vec(d2, 1.0));
  }
  for (const auto& w : neg_words) {
    w2v.insert(w, make_vec(d1, -1.0));
    glove.insert(w, make_vec(d2, -1.0));
  }

  // A toy labeled corpus.
  LabeledDataset ds;
  const StopwordSet no_stopwords;
  const std::vector<std::pair<std::string, Label>> texts = {
      {"great lovely superb", Label::pos}, {"fine and lovely", Label::pos},
      {"superb, really great!", Label::pos}, {"awful dire poor", Label::neg},
      {"bleak and awful", Label::neg},      {"poor, truly dire.", Label::neg},
  };
  for (std::size_t i = 0; i < texts.size(); ++i)
    ds.reviews.push_back(
        {std::to_string(i + 1), tokenize(texts[i].first, no_stopwords), texts[i].second});

  // Frequency-ratio word weights from the corpus itself, then averaged
  // review vectors.
  const WordStats stats = compute_word_stats(ds);
  const WeightMap weights = build_weight_map(stats, WeightScheme::max_ratio, 1.0);
  std::vector<Eigen::MatrixXd> inputs;
  std::vector<int> labels;
  for (const LabeledReview& review : ds.reviews) {
    inputs.emplace_back(build_review_vector(review.tokens, w2v, glove, weights).values);
    labels.push_back(static_cast<int>(review.label));
  }

  // Train a d -> d/2 -> 1 sigmoid classifier.
  nn::Model model = build_ffnn(d1 + d2, default_hidden(d1 + d2), 2, /*seed=*/1);
  nn::TrainConfig config;
  config.epochs = 40;
  config.seed = 1;
  nn::train(model, inputs, labels, config);

  std::size_t correct = 0;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    const int predicted = nn::argmax_class(nn::predict_proba(model, inputs[i]));
    correct += predicted == labels[i] ? 1 : 0;
  }
  std::cout << "training accuracy: " << static_cast<double>(correct) / inputs.size() << " on "
            << inputs.size() << " reviews\n";
  return 0;
}
