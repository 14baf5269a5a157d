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

#ifndef POLARITY_CORPUS_HPP
#define POLARITY_CORPUS_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include <nlohmann/json.hpp>

#include "polarity/errors.hpp"

namespace polarity {

enum class Label { pos = 0, neg = 1, neu = 2 };

inline const char* label_name(Label l) {
  switch (l) {
    case Label::pos: return "pos";
    case Label::neg: return "neg";
    case Label::neu: return "neu";
  }
  return "?";
}

inline Label parse_label(std::string_view s) {
  if (s == "pos") return Label::pos;
  if (s == "neg") return Label::neg;
  if (s == "neu") return Label::neu;
  throw BadLabel("unknown label '" + std::string(s) + "'");
}

struct LabeledReview {
  std::string id;
  std::vector<std::string> tokens;
  Label label = Label::pos;
};

enum class ClassSet { binary, ternary };

struct LabeledDataset {
  std::vector<LabeledReview> reviews;
  ClassSet class_set = ClassSet::binary;

  std::size_t size() const { return reviews.size(); }
  bool empty() const { return reviews.empty(); }
};

using StopwordSet = std::unordered_set<std::string>;

namespace detail {

// Unicode code points treated as whitespace beyond ASCII.
inline bool is_unicode_space(std::uint32_t cp) {
  if (cp == 0x00A0 || cp == 0x0085 || cp == 0x1680 || cp == 0x2028 ||
      cp == 0x2029 || cp == 0x202F || cp == 0x205F || cp == 0x3000)
    return true;
  return cp >= 0x2000 && cp <= 0x200A;
}

// Decodes one UTF-8 code point starting at i; advances i past it. Invalid
// bytes are passed through as single-byte points so they stay inside tokens.
inline std::uint32_t decode_utf8(std::string_view s, std::size_t& i) {
  const auto byte = [&](std::size_t k) { return static_cast<unsigned char>(s[k]); };
  const unsigned char b0 = byte(i);
  std::size_t len = 1;
  std::uint32_t cp = b0;
  if ((b0 & 0xE0) == 0xC0) {
    len = 2;
    cp = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3;
    cp = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4;
    cp = b0 & 0x07;
  } else {
    ++i;
    return cp;
  }
  if (i + len > s.size()) {
    ++i;
    return b0;
  }
  for (std::size_t k = 1; k < len; ++k) {
    if ((byte(i + k) & 0xC0) != 0x80) {
      ++i;
      return b0;
    }
    cp = (cp << 6) | (byte(i + k) & 0x3F);
  }
  i += len;
  return cp;
}

}  // namespace detail

// Lowercases (ASCII), splits on whitespace and punctuation, and drops stop
// words. Punctuation never enters a token, so punctuation-only tokens vanish.
// Idempotent on its own output.
inline std::vector<std::string> tokenize(std::string_view text, const StopwordSet& stopwords) {
  std::vector<std::string> tokens;
  std::string current;
  const auto flush = [&] {
    if (!current.empty() && stopwords.find(current) == stopwords.end())
      tokens.push_back(current);
    current.clear();
  };
  std::size_t i = 0;
  while (i < text.size()) {
    const unsigned char c = static_cast<unsigned char>(text[i]);
    if (c < 0x80) {
      ++i;
      if (std::isalnum(c)) {
        current.push_back(static_cast<char>(std::tolower(c)));
      } else {
        flush();  // ASCII whitespace, punctuation, control
      }
    } else {
      const std::size_t start = i;
      const std::uint32_t cp = detail::decode_utf8(text, i);
      if (detail::is_unicode_space(cp)) {
        flush();
      } else {
        current.append(text.substr(start, i - start));
      }
    }
  }
  flush();
  return tokens;
}

// One lowercase token per line; blank lines ignored.
inline StopwordSet load_stopwords(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open stopword file " + path.string());
  StopwordSet set;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string word;
    for (char ch : line) {
      if (!std::isspace(static_cast<unsigned char>(ch)))
        word.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
    }
    if (!word.empty()) set.insert(std::move(word));
  }
  return set;
}

// JSONL: one {"text": ..., "label": "pos"|"neg"|"neu"} object per line.
// Review ids are 1-based line numbers.
inline LabeledDataset load_reviews_jsonl(const std::filesystem::path& path,
                                         const StopwordSet& stopwords) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open dataset " + path.string());
  LabeledDataset ds;
  bool has_neu = false;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw FormatError(std::string("malformed JSON: ") + e.what(), line_no);
    }
    if (!obj.is_object() || !obj.contains("text") || !obj.contains("label") ||
        !obj["text"].is_string() || !obj["label"].is_string())
      throw FormatError("expected an object with string fields 'text' and 'label'", line_no);
    Label label;
    try {
      label = parse_label(obj["label"].get<std::string>());
    } catch (const BadLabel& e) {
      throw FormatError(e.what(), line_no);
    }
    if (label == Label::neu) has_neu = true;
    ds.reviews.push_back(LabeledReview{std::to_string(line_no),
                                       tokenize(obj["text"].get<std::string>(), stopwords),
                                       label});
  }
  ds.class_set = has_neu ? ClassSet::ternary : ClassSet::binary;
  return ds;
}

// Directory layout: <root>/pos/*.txt and <root>/neg/*.txt, one review per
// file. Review ids are "pos/<filename>" / "neg/<filename>".
inline LabeledDataset load_reviews_imdb(const std::filesystem::path& root,
                                        const StopwordSet& stopwords) {
  namespace fs = std::filesystem;
  LabeledDataset ds;
  for (const auto& [sub, label] :
       std::array<std::pair<const char*, Label>, 2>{{{"pos", Label::pos}, {"neg", Label::neg}}}) {
    const fs::path dir = root / sub;
    if (!fs::is_directory(dir))
      throw IoError("expected directory " + dir.string());
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
      if (entry.is_regular_file() && entry.path().extension() == ".txt")
        files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& file : files) {
      std::ifstream in(file);
      if (!in) throw IoError("cannot open review file " + file.string());
      std::ostringstream text;
      text << in.rdbuf();
      ds.reviews.push_back(LabeledReview{std::string(sub) + "/" + file.filename().string(),
                                         tokenize(text.str(), stopwords), label});
    }
  }
  ds.class_set = ClassSet::binary;
  return ds;
}

struct SplitFractions {
  double train = 0.8;
  double val = 0.0;
  double test = 0.2;
};

namespace detail {

// Fisher-Yates with raw mt19937_64 draws so the permutation does not depend
// on the standard library's distribution implementations.
inline void deterministic_shuffle(std::vector<std::size_t>& idx, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (std::size_t i = idx.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap(idx[i - 1], idx[j]);
  }
}

}  // namespace detail

// Disjoint shuffled partition. Sizes: floor for train and val, remainder to
// test. Same (dataset, fractions, seed) yields the identical split.
inline std::array<LabeledDataset, 3> split_dataset(const LabeledDataset& ds,
                                                   const SplitFractions& fractions,
                                                   std::uint64_t seed) {
  const double sum = fractions.train + fractions.val + fractions.test;
  if (fractions.train < 0 || fractions.val < 0 || fractions.test < 0)
    throw BadFractions("fractions must be nonnegative");
  if (std::abs(sum - 1.0) > 1e-9)
    throw BadFractions("fractions must sum to 1, got " + std::to_string(sum));

  std::vector<std::size_t> idx(ds.reviews.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  detail::deterministic_shuffle(idx, seed);

  const std::size_t n = idx.size();
  const auto n_train = static_cast<std::size_t>(std::floor(fractions.train * static_cast<double>(n)));
  const auto n_val = static_cast<std::size_t>(std::floor(fractions.val * static_cast<double>(n)));

  std::array<LabeledDataset, 3> parts;
  for (auto& p : parts) p.class_set = ds.class_set;
  for (std::size_t i = 0; i < n; ++i) {
    const LabeledReview& r = ds.reviews[idx[i]];
    if (i < n_train)
      parts[0].reviews.push_back(r);
    else if (i < n_train + n_val)
      parts[1].reviews.push_back(r);
    else
      parts[2].reviews.push_back(r);
  }
  return parts;
}

}  // namespace polarity

#endif  // POLARITY_CORPUS_HPP
