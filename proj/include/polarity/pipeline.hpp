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

#ifndef POLARITY_PIPELINE_HPP
#define POLARITY_PIPELINE_HPP

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "polarity/corpus.hpp"
#include "polarity/embedding.hpp"
#include "polarity/errors.hpp"
#include "polarity/eval.hpp"
#include "polarity/features.hpp"
#include "polarity/models.hpp"
#include "polarity/nn/serialize.hpp"
#include "polarity/nn/train.hpp"
#include "polarity/word_stats.hpp"

namespace polarity {

struct EmbeddingSource {
  std::string path;
  EmbeddingFormat format = EmbeddingFormat::glove_text;
  std::string name;
};

inline const char* embedding_format_name(EmbeddingFormat f) {
  return f == EmbeddingFormat::glove_text ? "glove_text" : "word2vec_text";
}

inline EmbeddingFormat parse_embedding_format(const std::string& name) {
  if (name == "glove_text") return EmbeddingFormat::glove_text;
  if (name == "word2vec_text") return EmbeddingFormat::word2vec_text;
  throw ConfigError("unknown embedding format '" + name + "'");
}

struct DatasetSource {
  std::string kind = "jsonl";  // or "imdb"
  std::string path;
};

// Everything needed to turn raw review text into model inputs again at
// predict time; persisted inside the model file.
struct FeatureRecipe {
  std::vector<EmbeddingSource> embeddings;  // 1 or 2 sources
  std::string stopwords_path;               // empty = none
  WeightScheme scheme = WeightScheme::uniform;
  double alpha = 1.0;
  bool weighted_mean = false;
  std::size_t filter_n = 0;  // 0 = filter off
  bool population_stddev = false;
};

struct RunConfig {
  FeatureRecipe recipe;
  ArchitectureSpec arch;  // input_dim 0 and max_len 0 are derived
  nn::InitBound init_bound = nn::InitBound::glorot_sqrt;
  nn::TrainConfig train;
  bool loss_given = false;  // absent: bce for 2 classes, cce for 3
  std::uint64_t init_seed = 0;
  bool init_seed_given = false;  // absent: reuse train.seed
  DatasetSource dataset;
  SplitFractions split{0.8, 0.1, 0.1};
  std::uint64_t split_seed = 0;
};

namespace detail {

inline const nlohmann::json& require_key(const nlohmann::json& j, const char* key) {
  if (!j.is_object() || !j.contains(key))
    throw ConfigError(std::string("missing config key '") + key + "'");
  return j.at(key);
}

template <typename T>
T config_value(const nlohmann::json& j, const char* key, T fallback) {
  try {
    return j.is_object() && j.contains(key) ? j.at(key).get<T>() : fallback;
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(std::string("config key '") + key + "' has the wrong type");
  }
}

}  // namespace detail

inline std::vector<EmbeddingSource> parse_embedding_sources(const nlohmann::json& j) {
  if (!j.is_array() || j.empty() || j.size() > 2)
    throw ConfigError("'embeddings' must list one or two sources");
  std::vector<EmbeddingSource> out;
  for (const nlohmann::json& e : j) {
    EmbeddingSource src;
    src.path = detail::require_key(e, "path").get<std::string>();
    src.format = parse_embedding_format(detail::require_key(e, "format").get<std::string>());
    src.name = detail::config_value<std::string>(e, "name", "");
    out.push_back(std::move(src));
  }
  return out;
}

inline FeatureRecipe parse_feature_recipe(const nlohmann::json& j) {
  FeatureRecipe recipe;
  recipe.embeddings = parse_embedding_sources(detail::require_key(j, "embeddings"));
  recipe.stopwords_path = detail::config_value<std::string>(j, "stopwords_path", "");
  recipe.scheme =
      parse_weight_scheme(detail::config_value<std::string>(j, "scheme", "uniform"));
  recipe.alpha = detail::config_value<double>(j, "alpha", 1.0);
  recipe.weighted_mean = detail::config_value<bool>(j, "weighted_mean", false);
  const auto filter_n = detail::config_value<std::int64_t>(j, "filter_n", 0);
  if (filter_n < 0) throw ConfigError("'filter_n' must be >= 0");
  recipe.filter_n = static_cast<std::size_t>(filter_n);
  recipe.population_stddev = detail::config_value<bool>(j, "population_stddev", false);
  return recipe;
}

inline nlohmann::json feature_recipe_to_json(const FeatureRecipe& recipe) {
  nlohmann::json j;
  nlohmann::json embs = nlohmann::json::array();
  for (const EmbeddingSource& src : recipe.embeddings) {
    nlohmann::json e;
    e["path"] = src.path;
    e["format"] = embedding_format_name(src.format);
    e["name"] = src.name;
    embs.push_back(std::move(e));
  }
  j["embeddings"] = std::move(embs);
  j["stopwords_path"] = recipe.stopwords_path;
  j["scheme"] = weight_scheme_name(recipe.scheme);
  j["alpha"] = recipe.alpha;
  j["weighted_mean"] = recipe.weighted_mean;
  j["filter_n"] = recipe.filter_n;
  j["population_stddev"] = recipe.population_stddev;
  return j;
}

inline nn::TrainConfig parse_train_config(const nlohmann::json& j, bool* loss_given) {
  nn::TrainConfig cfg;
  cfg.epochs = detail::config_value<int>(j, "epochs", cfg.epochs);
  cfg.batch_size = detail::config_value<int>(j, "batch_size", cfg.batch_size);
  cfg.seed = detail::config_value<std::uint64_t>(j, "seed", cfg.seed);
  cfg.rho = detail::config_value<double>(j, "rho", cfg.rho);
  cfg.eps = detail::config_value<double>(j, "eps", cfg.eps);
  if (loss_given) *loss_given = j.is_object() && j.contains("loss");
  if (j.is_object() && j.contains("loss"))
    cfg.loss = nn::parse_loss_kind(j.at("loss").get<std::string>());
  return cfg;
}

inline RunConfig parse_run_config(const nlohmann::json& j) {
  RunConfig cfg;
  cfg.recipe = parse_feature_recipe(j);

  const nlohmann::json& arch = detail::require_key(j, "architecture");
  cfg.arch.kind = parse_model_kind(detail::config_value<std::string>(arch, "kind", "ffnn"));
  cfg.arch.input_dim = detail::config_value<int>(arch, "input_dim", 0);
  cfg.arch.n_classes = detail::config_value<int>(arch, "n_classes", 2);
  if (cfg.arch.kind == ModelKind::ffnn) {
    if (arch.contains("hidden"))
      cfg.arch.hidden = arch.at("hidden").get<std::vector<int>>();
    else
      cfg.arch.hidden = {-1};  // sentinel: derive d/2 once input_dim is known
  } else {
    cfg.arch.max_len = detail::config_value<int>(arch, "max_len", 0);
    cfg.arch.window = detail::config_value<int>(arch, "window", 5);
    cfg.arch.n_filters = detail::config_value<int>(arch, "n_filters", 0);
  }

  const std::string bound =
      detail::config_value<std::string>(j, "init_bound", "glorot_sqrt");
  if (bound == "glorot_sqrt")
    cfg.init_bound = nn::InitBound::glorot_sqrt;
  else if (bound == "glorot_printed")
    cfg.init_bound = nn::InitBound::glorot_printed;
  else
    throw ConfigError("unknown init_bound '" + bound + "'");

  cfg.train = parse_train_config(j.contains("train") ? j.at("train") : nlohmann::json(),
                                 &cfg.loss_given);
  cfg.init_seed_given = j.contains("init_seed");
  cfg.init_seed = detail::config_value<std::uint64_t>(j, "init_seed", cfg.train.seed);

  const nlohmann::json& ds = detail::require_key(j, "dataset");
  cfg.dataset.kind = detail::config_value<std::string>(ds, "kind", "jsonl");
  if (cfg.dataset.kind != "jsonl" && cfg.dataset.kind != "imdb")
    throw ConfigError("dataset kind must be 'jsonl' or 'imdb'");
  cfg.dataset.path = detail::require_key(ds, "path").get<std::string>();

  if (j.contains("split")) {
    const nlohmann::json& sp = j.at("split");
    cfg.split.train = detail::config_value<double>(sp, "train", cfg.split.train);
    cfg.split.val = detail::config_value<double>(sp, "val", cfg.split.val);
    cfg.split.test = detail::config_value<double>(sp, "test", cfg.split.test);
    cfg.split_seed = detail::config_value<std::uint64_t>(sp, "seed", 0);
  }

  for (const EmbeddingSource& src : cfg.recipe.embeddings)
    if (!std::filesystem::exists(src.path))
      throw ConfigError("embedding file does not exist: " + src.path);
  if (!cfg.recipe.stopwords_path.empty() &&
      !std::filesystem::exists(cfg.recipe.stopwords_path))
    throw ConfigError("stopword file does not exist: " + cfg.recipe.stopwords_path);
  if (!std::filesystem::exists(cfg.dataset.path))
    throw ConfigError("dataset path does not exist: " + cfg.dataset.path);
  return cfg;
}

inline RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return parse_run_config(j);
}

// Resolved form: derived values filled in, defaults made explicit. Hashing
// and config.json both use this.
inline nlohmann::json run_config_to_json(const RunConfig& cfg) {
  nlohmann::json j = feature_recipe_to_json(cfg.recipe);
  j["architecture"] = architecture_to_json(cfg.arch);
  j["init_bound"] =
      cfg.init_bound == nn::InitBound::glorot_sqrt ? "glorot_sqrt" : "glorot_printed";
  nlohmann::json train;
  train["epochs"] = cfg.train.epochs;
  train["batch_size"] = cfg.train.batch_size;
  train["seed"] = cfg.train.seed;
  train["loss"] = nn::loss_kind_name(cfg.train.loss);
  train["rho"] = cfg.train.rho;
  train["eps"] = cfg.train.eps;
  j["train"] = std::move(train);
  j["init_seed"] = cfg.init_seed;
  nlohmann::json ds;
  ds["kind"] = cfg.dataset.kind;
  ds["path"] = cfg.dataset.path;
  j["dataset"] = std::move(ds);
  nlohmann::json split;
  split["train"] = cfg.split.train;
  split["val"] = cfg.split.val;
  split["test"] = cfg.split.test;
  split["seed"] = cfg.split_seed;
  j["split"] = std::move(split);
  return j;
}

inline std::string fnv1a_hex(std::string_view data) {
  std::uint64_t hash = 14695981039346656037ULL;
  for (unsigned char c : data) {
    hash ^= c;
    hash *= 1099511628211ULL;
  }
  char buf[17];
  static const char* digits = "0123456789abcdef";
  for (int i = 15; i >= 0; --i) {
    buf[i] = digits[hash & 0xF];
    hash >>= 4;
  }
  buf[16] = '\0';
  return std::string(buf, 16);
}

// Loaded embedding pair; the second table may be an empty placeholder when
// the recipe names a single source.
struct EmbeddingPair {
  EmbeddingTable first;
  EmbeddingTable second;

  int dim() const { return first.dim() + second.dim(); }
};

inline EmbeddingPair load_embedding_pair(const std::vector<EmbeddingSource>& sources) {
  if (sources.empty() || sources.size() > 2)
    throw ConfigError("need one or two embedding sources");
  EmbeddingPair pair{
      load_embedding_file(sources[0].path, sources[0].format, sources[0].name),
      sources.size() == 2
          ? load_embedding_file(sources[1].path, sources[1].format, sources[1].name)
          : EmbeddingTable("none", 0)};
  return pair;
}

// Turns token lists into model inputs: a d x 1 column for ffnn models, a
// max_len x d matrix for cnn models. Returns nullopt for reviews with no
// usable tokens; callers drop (and count) those.
class Featurizer {
 public:
  Featurizer(const EmbeddingTable* t1, const EmbeddingTable* t2, WeightMap weights,
             VocabFilter filter, bool use_filter, ModelKind kind, int max_len,
             bool weighted_mean)
      : t1_(t1),
        t2_(t2),
        weights_(std::move(weights)),
        filter_(std::move(filter)),
        use_filter_(use_filter),
        kind_(kind),
        max_len_(max_len),
        weighted_mean_(weighted_mean) {}

  std::optional<Eigen::MatrixXd> operator()(const std::vector<std::string>& tokens) const {
    const VocabFilter* filter = use_filter_ ? &filter_ : nullptr;
    if (kind_ == ModelKind::ffnn) {
      try {
        return Eigen::MatrixXd(
            build_review_vector(tokens, *t1_, *t2_, weights_, filter, weighted_mean_).values);
      } catch (const EmptyReview&) {
        return std::nullopt;
      }
    }
    ReviewMatrix m = build_review_matrix(tokens, *t1_, *t2_, weights_, filter, max_len_);
    if (m.n_real == 0) return std::nullopt;
    return std::move(m.rows);
  }

  const VocabFilter* filter() const { return use_filter_ ? &filter_ : nullptr; }

 private:
  const EmbeddingTable* t1_;
  const EmbeddingTable* t2_;
  WeightMap weights_;
  VocabFilter filter_;
  bool use_filter_ = false;
  ModelKind kind_ = ModelKind::ffnn;
  int max_len_ = 0;
  bool weighted_mean_ = false;
};

// Weight map and filter set from word statistics per the recipe.
inline Featurizer make_featurizer(const FeatureRecipe& recipe, const WordStats& stats,
                                  const EmbeddingTable* t1, const EmbeddingTable* t2,
                                  ModelKind kind, int max_len) {
  WeightMap weights;
  if (recipe.scheme != WeightScheme::uniform)
    weights = build_weight_map(stats, recipe.scheme, recipe.alpha);
  VocabFilter filter;
  if (recipe.filter_n > 0)
    filter = select_top_n(rank_words(stats, recipe.population_stddev), recipe.filter_n);
  return Featurizer(t1, t2, std::move(weights), std::move(filter), recipe.filter_n > 0, kind,
                    max_len, recipe.weighted_mean);
}

struct FeatureSet {
  std::vector<std::string> ids;
  std::vector<Eigen::MatrixXd> inputs;
  std::vector<int> labels;
  std::size_t dropped = 0;
};

inline FeatureSet build_feature_set(const LabeledDataset& ds, const Featurizer& featurize) {
  FeatureSet set;
  for (const LabeledReview& review : ds.reviews) {
    std::optional<Eigen::MatrixXd> input = featurize(review.tokens);
    if (!input) {
      ++set.dropped;
      continue;
    }
    set.ids.push_back(review.id);
    set.inputs.push_back(std::move(*input));
    set.labels.push_back(static_cast<int>(review.label));
  }
  return set;
}

inline LabeledDataset load_dataset(const DatasetSource& source, const StopwordSet& stopwords) {
  if (source.kind == "imdb") return load_reviews_imdb(source.path, stopwords);
  return load_reviews_jsonl(source.path, stopwords);
}

// TSV schema: review_id TAB predicted_label TAB p_1 .. p_C.
inline void write_predictions_tsv(const std::vector<std::string>& ids,
                                  const std::vector<int>& predicted,
                                  const std::vector<Eigen::VectorXd>& probs,
                                  const std::filesystem::path& path) {
  if (ids.size() != predicted.size() || ids.size() != probs.size())
    throw LengthMismatch("ids, predictions and probabilities differ in count");
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  for (std::size_t i = 0; i < ids.size(); ++i) {
    out << ids[i] << '\t' << label_name(static_cast<Label>(predicted[i]));
    for (Eigen::Index k = 0; k < probs[i].size(); ++k) {
      out << '\t';
      detail::write_double(out, probs[i][k]);
    }
    out << '\n';
  }
  if (!out) throw IoError("write failure on " + path.string());
}

struct PredictionRow {
  std::string id;
  int predicted = 0;
  std::vector<double> probs;
};

inline std::vector<PredictionRow> read_predictions_tsv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path.string());
  std::vector<PredictionRow> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    const std::string_view view = line;
    while (true) {
      const std::size_t tab = view.find('\t', start);
      fields.push_back(view.substr(start, tab - start));
      if (tab == std::string_view::npos) break;
      start = tab + 1;
    }
    if (fields.size() < 3)
      throw FormatError("prediction row needs id, label and probabilities", line_no);
    PredictionRow row;
    row.id = std::string(fields[0]);
    try {
      row.predicted = static_cast<int>(parse_label(fields[1]));
    } catch (const BadLabel& e) {
      throw FormatError(e.what(), line_no);
    }
    for (std::size_t k = 2; k < fields.size(); ++k)
      row.probs.push_back(detail::parse_double_field(fields[k], line_no));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw FormatError("prediction file has no rows", line_no + 1);
  return rows;
}

// TSV schema: epoch TAB train_loss TAB train_accuracy TAB val_loss TAB
// val_accuracy; NaN printed for absent validation.
inline void write_history_tsv(const std::vector<nn::EpochRecord>& history,
                              const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  for (const nn::EpochRecord& rec : history) {
    out << rec.epoch << '\t';
    detail::write_double(out, rec.train_loss);
    out << '\t';
    detail::write_double(out, rec.train_accuracy);
    out << '\t';
    detail::write_double(out, rec.val_loss);
    out << '\t';
    detail::write_double(out, rec.val_accuracy);
    out << '\n';
  }
  if (!out) throw IoError("write failure on " + path.string());
}

inline void write_json_file(const nlohmann::json& j, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << j.dump(2) << '\n';
  if (!out) throw IoError("write failure on " + path.string());
}

inline nlohmann::json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(path.string() + " is not valid JSON: " + e.what());
  }
  return j;
}

struct PipelineResult {
  EvalReport report;
  nlohmann::json report_json;
  nn::Model model;
  std::vector<nn::EpochRecord> history;
  ArchitectureSpec arch;  // resolved
  std::size_t dropped_train = 0, dropped_val = 0, dropped_test = 0;
};

// stats -> weights -> filter -> features -> train -> evaluate, writing
// config.json, stats.tsv, filter.tsv, model.json, history.tsv,
// predictions.tsv and report.json into out_dir. Deterministic given the
// config: rerunning produces byte-identical artifacts.
inline PipelineResult run_pipeline(RunConfig cfg, const std::filesystem::path& out_dir) {
  const auto t0 = std::chrono::steady_clock::now();
  std::filesystem::create_directories(out_dir);

  StopwordSet stopwords;
  if (!cfg.recipe.stopwords_path.empty())
    stopwords = load_stopwords(cfg.recipe.stopwords_path);
  const LabeledDataset dataset = load_dataset(cfg.dataset, stopwords);
  const auto splits = split_dataset(dataset, cfg.split, cfg.split_seed);
  const LabeledDataset& train_ds = splits[0];
  const LabeledDataset& val_ds = splits[1];
  const LabeledDataset& test_ds = splits[2];
  if (train_ds.empty()) throw EmptySplit("training split is empty");
  if (test_ds.empty()) throw EmptySplit("test split is empty");

  const int wanted_classes = dataset.class_set == ClassSet::ternary ? 3 : 2;
  if (cfg.arch.n_classes != wanted_classes)
    throw ConfigError("architecture declares " + std::to_string(cfg.arch.n_classes) +
                      " classes but the dataset has " + std::to_string(wanted_classes));

  const EmbeddingPair tables = load_embedding_pair(cfg.recipe.embeddings);
  if (cfg.arch.input_dim == 0) cfg.arch.input_dim = tables.dim();
  if (cfg.arch.input_dim != tables.dim())
    throw ConfigError("architecture input_dim " + std::to_string(cfg.arch.input_dim) +
                      " does not match embedding dimension " + std::to_string(tables.dim()));
  if (cfg.arch.kind == ModelKind::ffnn && cfg.arch.hidden == std::vector<int>{-1})
    cfg.arch.hidden = default_hidden(cfg.arch.input_dim);

  const WordStats stats = compute_word_stats(train_ds);
  write_word_stats_tsv(stats, out_dir / "stats.tsv");

  FilterRank rank;
  if (cfg.recipe.filter_n > 0) {
    rank = rank_words(stats, cfg.recipe.population_stddev);
    write_filter_rank_tsv(rank, out_dir / "filter.tsv");
  }

  Featurizer featurize = make_featurizer(cfg.recipe, stats, &tables.first, &tables.second,
                                         cfg.arch.kind, cfg.arch.max_len);
  if (cfg.arch.kind == ModelKind::cnn && cfg.arch.max_len == 0) {
    cfg.arch.max_len = dataset_max_len(train_ds, featurize.filter());
    featurize = make_featurizer(cfg.recipe, stats, &tables.first, &tables.second,
                                cfg.arch.kind, cfg.arch.max_len);
  }

  if (!cfg.loss_given)
    cfg.train.loss = cfg.arch.n_classes == 2 ? nn::LossKind::bce : nn::LossKind::cce;
  if (!cfg.init_seed_given) cfg.init_seed = cfg.train.seed;

  const nlohmann::json resolved = run_config_to_json(cfg);
  write_json_file(resolved, out_dir / "config.json");
  const std::string config_hash = fnv1a_hex(resolved.dump());

  const FeatureSet train_set = build_feature_set(train_ds, featurize);
  const FeatureSet val_set = build_feature_set(val_ds, featurize);
  const FeatureSet test_set = build_feature_set(test_ds, featurize);
  if (train_set.inputs.empty()) throw EmptySplit("no usable training reviews");
  if (test_set.inputs.empty()) throw EmptySplit("no usable test reviews");

  PipelineResult result;
  result.model = build_model(cfg.arch, cfg.init_seed, cfg.init_bound);
  result.history = nn::train(result.model, train_set.inputs, train_set.labels, cfg.train,
                             val_set.inputs.empty() ? nullptr : &val_set.inputs,
                             val_set.inputs.empty() ? nullptr : &val_set.labels);
  write_history_tsv(result.history, out_dir / "history.tsv");

  nlohmann::json extra;
  extra["architecture"] = architecture_to_json(cfg.arch);
  extra["pipeline"] = feature_recipe_to_json(cfg.recipe);
  nn::save_model(result.model, (out_dir / "model.json").string(), &extra);

  std::vector<int> predicted;
  std::vector<Eigen::VectorXd> probs;
  predicted.reserve(test_set.inputs.size());
  probs.reserve(test_set.inputs.size());
  for (const Eigen::MatrixXd& input : test_set.inputs) {
    probs.push_back(nn::predict_proba(result.model, input));
    predicted.push_back(nn::argmax_class(probs.back()));
  }
  write_predictions_tsv(test_set.ids, predicted, probs, out_dir / "predictions.tsv");

  result.report = evaluate(predicted, test_set.labels, cfg.arch.n_classes);
  result.report.config_hash = config_hash;
  result.report.seed = cfg.train.seed;
  result.arch = cfg.arch;
  result.dropped_train = train_set.dropped;
  result.dropped_val = val_set.dropped;
  result.dropped_test = test_set.dropped;

  nlohmann::json rj = report_to_json(result.report);
  rj["dropped"] = {{"train", train_set.dropped},
                   {"val", val_set.dropped},
                   {"test", test_set.dropped}};
  rj["splits"] = {{"train", train_ds.size()}, {"val", val_ds.size()}, {"test", test_ds.size()}};
  result.report_json = rj;
  write_json_file(rj, out_dir / "report.json");

  result.report.wall_ms = std::chrono::duration<double, std::milli>(
                              std::chrono::steady_clock::now() - t0)
                              .count();
  return result;
}

// A trained run directory reloaded for inference: model plus the feature
// recipe and word statistics it was trained with.
struct LoadedMember {
  nn::Model model;
  ArchitectureSpec arch;
  FeatureRecipe recipe;
  WordStats stats;
};

inline LoadedMember load_member(const std::filesystem::path& run_dir) {
  const nlohmann::json doc = read_json_file(run_dir / "model.json");
  LoadedMember member;
  member.model = nn::model_from_json(doc);
  if (!doc.contains("architecture") || !doc.contains("pipeline"))
    throw FormatError("model file lacks architecture/pipeline metadata: " +
                      (run_dir / "model.json").string());
  member.arch = architecture_from_json(doc.at("architecture"));
  member.recipe = parse_feature_recipe(doc.at("pipeline"));
  member.stats = read_word_stats_tsv(run_dir / "stats.tsv");
  return member;
}

}  // namespace polarity

#endif  // POLARITY_PIPELINE_HPP
