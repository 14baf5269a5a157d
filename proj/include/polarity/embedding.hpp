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

#ifndef POLARITY_EMBEDDING_HPP
#define POLARITY_EMBEDDING_HPP

#include <Eigen/Core>
#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "polarity/errors.hpp"

namespace polarity {

// Norms below this are treated as zero; such vectors cannot be normalized.
inline constexpr double kZeroNormThreshold = 1e-12;

struct EmbVector {
  Eigen::VectorXd values;
  bool normalized = false;
};

// Divides v by its L2 norm. Throws ZeroVector when the norm vanishes.
inline EmbVector normalize_vector(const Eigen::VectorXd& v) {
  const double norm = v.norm();
  if (norm < kZeroNormThreshold) throw ZeroVector();
  return EmbVector{v / norm, true};
}

enum class EmbeddingFormat { glove_text, word2vec_text };

// Immutable word -> dense vector table. Safe to share across threads after
// loading; every stored vector has length dim().
class EmbeddingTable {
 public:
  EmbeddingTable(std::string name, int dim) : name_(std::move(name)), dim_(dim) {}

  const std::string& name() const { return name_; }
  int dim() const { return dim_; }
  std::size_t size() const { return vectors_.size(); }
  std::size_t duplicate_count() const { return duplicates_; }

  const Eigen::VectorXd* find(const std::string& word) const {
    auto it = vectors_.find(word);
    return it == vectors_.end() ? nullptr : &it->second;
  }

  bool contains(const std::string& word) const { return vectors_.count(word) > 0; }

  // First occurrence wins; returns false (and counts a duplicate) otherwise.
  bool insert(std::string word, Eigen::VectorXd vec) {
    auto [it, inserted] = vectors_.emplace(std::move(word), std::move(vec));
    (void)it;
    if (!inserted) ++duplicates_;
    return inserted;
  }

  const std::unordered_map<std::string, Eigen::VectorXd>& vectors() const {
    return vectors_;
  }

 private:
  std::string name_;
  int dim_ = 0;
  std::size_t duplicates_ = 0;
  std::unordered_map<std::string, Eigen::VectorXd> vectors_;
};

namespace detail {

inline std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

inline double parse_double_field(std::string_view field, std::size_t line_no) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size())
    throw FormatError("non-numeric field '" + std::string(field) + "'", line_no);
  return value;
}

inline std::uint64_t parse_uint_field(std::string_view field, std::size_t line_no) {
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size())
    throw FormatError("expected an unsigned integer, got '" + std::string(field) + "'", line_no);
  return value;
}

}  // namespace detail

// Reads a word-vector file in glove-text (no header) or word2vec-text
// (leading "vocab_count dim" line) format. Values are parsed as doubles.
// Duplicate words keep the first occurrence; see duplicate_count().
inline EmbeddingTable load_embedding_file(const std::filesystem::path& path,
                                          EmbeddingFormat format,
                                          std::string name = {}) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open embedding file " + path.string());
  if (name.empty()) name = path.filename().string();

  std::string line;
  std::size_t line_no = 0;
  int dim = -1;
  std::uint64_t declared_vocab = 0;

  if (format == EmbeddingFormat::word2vec_text) {
    if (!std::getline(in, line)) throw FormatError("missing word2vec header", 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto fields = detail::split_fields(line);
    if (fields.size() != 2)
      throw FormatError("word2vec header must be 'vocab_count dim'", line_no);
    declared_vocab = detail::parse_uint_field(fields[0], line_no);
    dim = static_cast<int>(detail::parse_uint_field(fields[1], line_no));
    if (dim < 1) throw FormatError("header dimension must be positive", line_no);
  }

  EmbeddingTable table(std::move(name), dim < 0 ? 0 : dim);

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = detail::split_fields(line);
    if (fields.empty()) continue;
    if (fields.size() < 2) throw FormatError("row needs a word and at least one value", line_no);

    const std::size_t n_values = fields.size() - 1;
    if (dim < 0) {
      // glove-text: the first data row fixes the dimension.
      dim = static_cast<int>(n_values);
      table = EmbeddingTable(table.name(), dim);
    } else if (static_cast<int>(n_values) != dim) {
      if (format == EmbeddingFormat::word2vec_text)
        throw DimMismatch("header declares dim " + std::to_string(dim) + " but line " +
                          std::to_string(line_no) + " has " + std::to_string(n_values) +
                          " values");
      throw FormatError("expected " + std::to_string(dim) + " values, got " +
                            std::to_string(n_values),
                        line_no);
    }

    Eigen::VectorXd vec(dim);
    for (int k = 0; k < dim; ++k)
      vec[k] = detail::parse_double_field(fields[static_cast<std::size_t>(k) + 1], line_no);
    table.insert(std::string(fields[0]), std::move(vec));
  }
  if (in.bad()) throw IoError("read failure on " + path.string());
  if (dim < 0) throw FormatError("embedding file has no data rows", line_no + 1);
  (void)declared_vocab;  // header count mismatches are tolerated
  return table;
}

enum class MissingPolicy { skip, zero_fill };

// Looks up `word` in both tables and concatenates the per-table normalized
// vectors (t1 block first). A table that lacks the word contributes a zero
// block. Under `skip`, a word absent from both tables yields no result; under
// `zero_fill` it yields an all-zero vector. A stored vector with vanishing
// norm counts as absent since it cannot be normalized.
inline std::optional<EmbVector> concat_lookup(const std::string& word,
                                              const EmbeddingTable& t1,
                                              const EmbeddingTable& t2,
                                              MissingPolicy policy) {
  const Eigen::VectorXd* v1 = t1.find(word);
  const Eigen::VectorXd* v2 = t2.find(word);
  if (v1 && v1->norm() < kZeroNormThreshold) v1 = nullptr;
  if (v2 && v2->norm() < kZeroNormThreshold) v2 = nullptr;
  if (!v1 && !v2 && policy == MissingPolicy::skip) return std::nullopt;

  Eigen::VectorXd out = Eigen::VectorXd::Zero(t1.dim() + t2.dim());
  if (v1) out.head(t1.dim()) = *v1 / v1->norm();
  if (v2) out.tail(t2.dim()) = *v2 / v2->norm();
  return EmbVector{std::move(out), false};
}

}  // namespace polarity

#endif  // POLARITY_EMBEDDING_HPP
