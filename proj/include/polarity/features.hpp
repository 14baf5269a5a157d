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

#ifndef POLARITY_FEATURES_HPP
#define POLARITY_FEATURES_HPP

#include <Eigen/Core>
#include <charconv>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "polarity/corpus.hpp"
#include "polarity/embedding.hpp"
#include "polarity/errors.hpp"

namespace polarity {

using WeightMap = std::unordered_map<std::string, double>;
using VocabFilter = std::unordered_set<std::string>;

inline double lookup_weight(const WeightMap& weights, const std::string& word) {
  auto it = weights.find(word);
  return it == weights.end() ? 1.0 : it->second;
}

struct ReviewVector {
  Eigen::VectorXd values;
  int n_used = 0;  // number of contributing tokens N
};

struct ReviewMatrix {
  Eigen::MatrixXd rows;       // max_len x d, zero rows beyond n_real
  int n_real = 0;             // rows holding (possibly zero) token vectors
  std::size_t truncated = 0;  // tokens dropped past max_len
};

// r = sum(a_i * w_hat_i) / N over tokens that pass the filter and resolve in
// at least one table (skip policy), N being the number of contributing
// tokens. With weighted_mean the divisor is sum(a_i) instead.
inline ReviewVector build_review_vector(const std::vector<std::string>& tokens,
                                        const EmbeddingTable& t1, const EmbeddingTable& t2,
                                        const WeightMap& weights,
                                        const VocabFilter* filter = nullptr,
                                        bool weighted_mean = false) {
  const int d = t1.dim() + t2.dim();
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(d);
  int n_used = 0;
  double weight_sum = 0.0;
  for (const std::string& token : tokens) {
    if (filter && filter->find(token) == filter->end()) continue;
    auto vec = concat_lookup(token, t1, t2, MissingPolicy::skip);
    if (!vec) continue;
    const double a = lookup_weight(weights, token);
    sum += a * vec->values;
    ++n_used;
    weight_sum += a;
  }
  if (n_used == 0) throw EmptyReview();
  const double divisor = weighted_mean ? weight_sum : static_cast<double>(n_used);
  if (!(divisor > 0.0)) throw EmptyReview("weight sum is not positive");
  return ReviewVector{sum / divisor, n_used};
}

// Row i holds a_i * w_hat_i for the i-th token passing the filter, with
// zero-fill for blocks missing from a table. Tokens beyond max_len are
// counted in `truncated`; remaining rows stay zero.
inline ReviewMatrix build_review_matrix(const std::vector<std::string>& tokens,
                                        const EmbeddingTable& t1, const EmbeddingTable& t2,
                                        const WeightMap& weights, const VocabFilter* filter,
                                        int max_len, bool apply_weights = true) {
  if (max_len < 1) throw BadSpec("max_len must be >= 1");
  const int d = t1.dim() + t2.dim();
  ReviewMatrix out;
  out.rows = Eigen::MatrixXd::Zero(max_len, d);
  for (const std::string& token : tokens) {
    if (filter && filter->find(token) == filter->end()) continue;
    if (out.n_real == max_len) {
      ++out.truncated;
      continue;
    }
    auto vec = concat_lookup(token, t1, t2, MissingPolicy::zero_fill);
    const double a = apply_weights ? lookup_weight(weights, token) : 1.0;
    out.rows.row(out.n_real) = a * vec->values.transpose();
    ++out.n_real;
  }
  return out;
}

// Maximum count of filter-surviving tokens over the dataset's reviews.
inline int dataset_max_len(const LabeledDataset& ds, const VocabFilter* filter = nullptr) {
  if (ds.empty()) throw EmptyDataset();
  std::size_t max_len = 0;
  for (const LabeledReview& review : ds.reviews) {
    std::size_t surviving = 0;
    for (const std::string& token : review.tokens)
      if (!filter || filter->find(token) != filter->end()) ++surviving;
    max_len = std::max(max_len, surviving);
  }
  if (max_len == 0) throw EmptyDataset("all reviews are empty after filtering");
  return static_cast<int>(max_len);
}

// Debug dump: review id followed by the d feature values (word2vec block
// first, then glove block), tab separated.
inline void write_review_vectors_tsv(const std::vector<std::string>& ids,
                                     const std::vector<Eigen::VectorXd>& vectors,
                                     const std::filesystem::path& path) {
  if (ids.size() != vectors.size())
    throw LengthMismatch("ids vs vectors: " + std::to_string(ids.size()) + " vs " +
                         std::to_string(vectors.size()));
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  char buf[64];
  for (std::size_t i = 0; i < ids.size(); ++i) {
    out << ids[i];
    for (Eigen::Index k = 0; k < vectors[i].size(); ++k) {
      auto res = std::to_chars(buf, buf + sizeof(buf), vectors[i][k]);
      out << '\t';
      out.write(buf, res.ptr - buf);
    }
    out << '\n';
  }
  if (!out) throw IoError("write failure on " + path.string());
}

}  // namespace polarity

#endif  // POLARITY_FEATURES_HPP
