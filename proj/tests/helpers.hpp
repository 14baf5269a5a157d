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

#ifndef POLARITY_TESTS_HELPERS_HPP
#define POLARITY_TESTS_HELPERS_HPP

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace testutil {

// Self-deleting scratch directory for artifact tests.
class TempDir {
 public:
  TempDir() {
    std::string tmpl = (std::filesystem::temp_directory_path() / "polarity-test-XXXXXX").string();
    std::vector<char> buf(tmpl.begin(), tmpl.end());
    buf.push_back('\0');
    if (!mkdtemp(buf.data())) throw std::runtime_error("mkdtemp failed");
    path_ = buf.data();
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path);
  out << content;
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline double unit_draw(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Two-class toy corpus with planted signal: 100 words, the first 50 leaning
// positive and the rest negative. Word vectors put the class sign into the
// leading coordinate of each table plus noise; reviews draw roughly 80% of
// their 8-20 tokens from their own class's half of the vocabulary.
struct SyntheticCorpus {
  std::filesystem::path dataset;
  std::filesystem::path glove;
  std::filesystem::path word2vec;
  std::filesystem::path stopwords;
  int d1 = 0;
  int d2 = 0;
  int n_reviews = 0;
};

inline SyntheticCorpus make_synthetic_corpus(const std::filesystem::path& dir, int n_reviews,
                                             std::uint64_t seed, int d1 = 12, int d2 = 8) {
  std::filesystem::create_directories(dir);
  SyntheticCorpus corpus;
  corpus.dataset = dir / "reviews.jsonl";
  corpus.glove = dir / "vectors_a.txt";
  corpus.word2vec = dir / "vectors_b.txt";
  corpus.stopwords = dir / "stopwords.txt";
  corpus.d1 = d1;
  corpus.d2 = d2;
  corpus.n_reviews = n_reviews;

  const int vocab = 100;
  std::vector<std::string> words(vocab);
  for (int i = 0; i < vocab; ++i) {
    std::ostringstream name;
    name << 'w' << std::setw(3) << std::setfill('0') << i;
    words[static_cast<std::size_t>(i)] = name.str();
  }

  std::mt19937_64 rng(seed);
  const auto noise = [&] { return 0.7 * unit_draw(rng) - 0.35; };
  const auto write_vectors = [&](const std::filesystem::path& path, int dim, bool header) {
    std::ostringstream out;
    out << std::setprecision(17);
    if (header) out << vocab << ' ' << dim << '\n';
    for (int i = 0; i < vocab; ++i) {
      const double sign = i < vocab / 2 ? 1.0 : -1.0;
      out << words[static_cast<std::size_t>(i)];
      for (int k = 0; k < dim; ++k) out << ' ' << (k == 0 ? sign : 0.0) + noise();
      out << '\n';
    }
    write_file(path, out.str());
  };
  write_vectors(corpus.glove, d1, false);
  write_vectors(corpus.word2vec, d2, true);
  write_file(corpus.stopwords, "the\na\nand\nis\n");

  std::ostringstream data;
  for (int r = 0; r < n_reviews; ++r) {
    const bool positive = r % 2 == 0;
    const int len = 8 + static_cast<int>(rng() % 13);
    std::ostringstream text;
    for (int t = 0; t < len; ++t) {
      const bool own = unit_draw(rng) < 0.8;
      const bool from_pos = positive == own;
      const int index = (from_pos ? 0 : vocab / 2) + static_cast<int>(rng() % (vocab / 2));
      if (t) text << ' ';
      text << words[static_cast<std::size_t>(index)];
    }
    nlohmann::json line;
    line["text"] = text.str();
    line["label"] = positive ? "pos" : "neg";
    data << line.dump() << '\n';
  }
  write_file(corpus.dataset, data.str());
  return corpus;
}

}  // namespace testutil

#endif  // POLARITY_TESTS_HELPERS_HPP
