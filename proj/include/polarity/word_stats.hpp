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

#ifndef POLARITY_WORD_STATS_HPP
#define POLARITY_WORD_STATS_HPP

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "polarity/corpus.hpp"
#include "polarity/errors.hpp"

namespace polarity {

struct WordCounts {
  std::uint64_t pos = 0;
  std::uint64_t neg = 0;
  std::uint64_t neu = 0;

  std::uint64_t total() const { return pos + neg + neu; }
};

// Per-word occurrence counts split by review label. Immutable once built.
class WordStats {
 public:
  const WordCounts* find(const std::string& word) const {
    auto it = counts_.find(word);
    return it == counts_.end() ? nullptr : &it->second;
  }

  void add(const std::string& word, Label label, std::uint64_t n = 1) {
    WordCounts& c = counts_[word];
    switch (label) {
      case Label::pos: c.pos += n; break;
      case Label::neg: c.neg += n; break;
      case Label::neu: c.neu += n; break;
    }
    total_tokens_ += n;
  }

  std::size_t vocabulary_size() const { return counts_.size(); }
  bool empty() const { return counts_.empty(); }
  std::uint64_t total_tokens() const { return total_tokens_; }

  const std::unordered_map<std::string, WordCounts>& counts() const { return counts_; }

 private:
  std::unordered_map<std::string, WordCounts> counts_;
  std::uint64_t total_tokens_ = 0;
};

// Accumulates token occurrences (with multiplicity) into the counter that
// matches each review's label.
inline WordStats compute_word_stats(const LabeledDataset& ds) {
  if (ds.empty()) throw EmptyDataset();
  WordStats stats;
  for (const LabeledReview& review : ds.reviews)
    for (const std::string& token : review.tokens) stats.add(token, review.label);
  return stats;
}

enum class WeightScheme { uniform, ratio, max_ratio };

inline const char* weight_scheme_name(WeightScheme s) {
  switch (s) {
    case WeightScheme::uniform: return "uniform";
    case WeightScheme::ratio: return "ratio";
    case WeightScheme::max_ratio: return "max-ratio";
  }
  return "?";
}

inline WeightScheme parse_weight_scheme(const std::string& s) {
  if (s == "uniform") return WeightScheme::uniform;
  if (s == "ratio") return WeightScheme::ratio;
  if (s == "max-ratio") return WeightScheme::max_ratio;
  throw ConfigError("unknown weighting scheme '" + s + "'");
}

// Word weight a_i. ratio is the smoothed positive/negative frequency ratio
// (P_p/P_n reduces to f_p/f_n since the shared total cancels); max-ratio
// takes the larger of the ratio and its reciprocal. Words outside the
// statistics get weight 1.
inline double word_weight(const std::string& word, const WordStats& stats,
                          WeightScheme scheme, double alpha) {
  if (scheme == WeightScheme::uniform) return 1.0;
  if (!(alpha > 0.0))
    throw BadSpec("smoothing alpha must be positive for scheme " +
                  std::string(weight_scheme_name(scheme)));
  const WordCounts* c = stats.find(word);
  if (!c) return 1.0;
  const double ratio = (static_cast<double>(c->pos) + alpha) /
                       (static_cast<double>(c->neg) + alpha);
  return scheme == WeightScheme::ratio ? ratio : std::max(ratio, 1.0 / ratio);
}

// Precomputes a_i for every word in the statistics.
inline std::unordered_map<std::string, double> build_weight_map(const WordStats& stats,
                                                                WeightScheme scheme,
                                                                double alpha) {
  std::unordered_map<std::string, double> weights;
  weights.reserve(stats.vocabulary_size());
  for (const auto& [word, counts] : stats.counts()) {
    (void)counts;
    weights.emplace(word, word_weight(word, stats, scheme, alpha));
  }
  return weights;
}

struct RankedWord {
  std::string word;
  double mean = 0.0;
  double stddev = 0.0;
  double normalized = 0.0;
};

// Words ordered by normalized count spread, most class-skewed first.
struct FilterRank {
  std::vector<RankedWord> entries;

  std::size_t size() const { return entries.size(); }
};

// mean = (c_p + c_n + c_u) / 3 and stddev = sqrt of the summed squared
// deviations; normalized = stddev / mean. With population_stddev the sum is
// divided by 3 under the root (sensitivity variant). Sorted by normalized
// value descending, ties broken by word ascending.
inline FilterRank rank_words(const WordStats& stats, bool population_stddev = false) {
  if (stats.empty()) throw EmptyStats();
  FilterRank rank;
  rank.entries.reserve(stats.vocabulary_size());
  for (const auto& [word, c] : stats.counts()) {
    const double p = static_cast<double>(c.pos);
    const double n = static_cast<double>(c.neg);
    const double u = static_cast<double>(c.neu);
    const double mean = (p + n + u) / 3.0;
    if (mean == 0.0) continue;
    double sq = (p - mean) * (p - mean) + (n - mean) * (n - mean) + (u - mean) * (u - mean);
    if (population_stddev) sq /= 3.0;
    const double stddev = std::sqrt(sq);
    rank.entries.push_back(RankedWord{word, mean, stddev, stddev / mean});
  }
  std::sort(rank.entries.begin(), rank.entries.end(),
            [](const RankedWord& a, const RankedWord& b) {
              if (a.normalized != b.normalized) return a.normalized > b.normalized;
              return a.word < b.word;
            });
  return rank;
}

// First min(n, |rank|) words of the descending order.
inline std::unordered_set<std::string> select_top_n(const FilterRank& rank, std::size_t n) {
  if (n < 1) throw BadSpec("top-n selection needs n >= 1");
  const std::size_t take = std::min(n, rank.entries.size());
  std::unordered_set<std::string> selected;
  selected.reserve(take);
  for (std::size_t i = 0; i < take; ++i) selected.insert(rank.entries[i].word);
  return selected;
}

namespace detail {

inline void write_double(std::ostream& out, double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  out.write(buf, res.ptr - buf);
}

}  // namespace detail

// TSV schema: word TAB f_p TAB f_n TAB f_u, sorted by word.
inline void write_word_stats_tsv(const WordStats& stats, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  std::vector<const std::pair<const std::string, WordCounts>*> rows;
  rows.reserve(stats.vocabulary_size());
  for (const auto& entry : stats.counts()) rows.push_back(&entry);
  std::sort(rows.begin(), rows.end(),
            [](const auto* a, const auto* b) { return a->first < b->first; });
  for (const auto* row : rows)
    out << row->first << '\t' << row->second.pos << '\t' << row->second.neg << '\t'
        << row->second.neu << '\n';
  if (!out) throw IoError("write failure on " + path.string());
}

inline WordStats read_word_stats_tsv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  WordStats stats;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::array<std::string, 4> fields;
    std::size_t field = 0, start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
      if (i == line.size() || line[i] == '\t') {
        if (field >= 4) throw FormatError("expected 4 tab-separated fields", line_no);
        fields[field++] = line.substr(start, i - start);
        start = i + 1;
      }
    }
    if (field != 4) throw FormatError("expected 4 tab-separated fields", line_no);
    const auto parse_count = [&](const std::string& s) {
      std::uint64_t v = 0;
      auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      if (ec != std::errc{} || ptr != s.data() + s.size())
        throw FormatError("bad count '" + s + "'", line_no);
      return v;
    };
    stats.add(fields[0], Label::pos, parse_count(fields[1]));
    stats.add(fields[0], Label::neg, parse_count(fields[2]));
    stats.add(fields[0], Label::neu, parse_count(fields[3]));
  }
  return stats;
}

// TSV schema: word TAB normalized_stddev, already in rank order. Mean and
// stddev columns are not part of the exchange format.
inline void write_filter_rank_tsv(const FilterRank& rank, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  for (const RankedWord& entry : rank.entries) {
    out << entry.word << '\t';
    detail::write_double(out, entry.normalized);
    out << '\n';
  }
  if (!out) throw IoError("write failure on " + path.string());
}

inline FilterRank read_filter_rank_tsv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  FilterRank rank;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::size_t tab = line.find('\t');
    if (tab == std::string::npos || tab == 0)
      throw FormatError("expected 'word TAB normalized_stddev'", line_no);
    const std::string value = line.substr(tab + 1);
    double normalized = 0.0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), normalized);
    if (ec != std::errc{} || ptr != value.data() + value.size())
      throw FormatError("bad normalized_stddev '" + value + "'", line_no);
    rank.entries.push_back(RankedWord{line.substr(0, tab), 0.0, 0.0, normalized});
  }
  return rank;
}

}  // namespace polarity

#endif  // POLARITY_WORD_STATS_HPP
