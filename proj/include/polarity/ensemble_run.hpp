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

#ifndef POLARITY_ENSEMBLE_RUN_HPP
#define POLARITY_ENSEMBLE_RUN_HPP

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "polarity/ensemble.hpp"
#include "polarity/pipeline.hpp"

namespace polarity {

struct EnsembleConfig {
  std::string kind = "interpolation";  // or "stacking"
  std::vector<std::string> members;    // run directories of trained members
  double step = 0.1;                   // interpolation grid step
  std::uint64_t stacker_seed = 0;
  int stacker_epochs = 100;
  int stacker_batch = 32;
  StackerSource source = StackerSource::validation;
  std::string stopwords_path;
  DatasetSource dataset;
  SplitFractions split{0.8, 0.1, 0.1};
  std::uint64_t split_seed = 0;
};

inline EnsembleConfig parse_ensemble_config(const nlohmann::json& j) {
  EnsembleConfig cfg;
  cfg.kind = detail::config_value<std::string>(j, "kind", "interpolation");
  if (cfg.kind != "interpolation" && cfg.kind != "stacking")
    throw ConfigError("ensemble kind must be 'interpolation' or 'stacking'");
  cfg.members = detail::require_key(j, "members").get<std::vector<std::string>>();
  if (cfg.members.size() < 2) throw ConfigError("an ensemble needs at least two members");
  cfg.step = detail::config_value<double>(j, "step", 0.1);
  if (j.contains("stacker")) {
    const nlohmann::json& st = j.at("stacker");
    cfg.stacker_seed = detail::config_value<std::uint64_t>(st, "seed", 0);
    cfg.stacker_epochs = detail::config_value<int>(st, "epochs", 100);
    cfg.stacker_batch = detail::config_value<int>(st, "batch_size", 32);
  }
  cfg.source = parse_stacker_source(
      detail::config_value<std::string>(j, "stacker_source", "validation"));
  cfg.stopwords_path = detail::config_value<std::string>(j, "stopwords_path", "");

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

  for (const std::string& dir : cfg.members)
    if (!std::filesystem::exists(std::filesystem::path(dir) / "model.json"))
      throw ConfigError("member run directory lacks model.json: " + dir);
  if (!cfg.stopwords_path.empty() && !std::filesystem::exists(cfg.stopwords_path))
    throw ConfigError("stopword file does not exist: " + cfg.stopwords_path);
  if (!std::filesystem::exists(cfg.dataset.path))
    throw ConfigError("dataset path does not exist: " + cfg.dataset.path);
  return cfg;
}

inline EnsembleConfig load_ensemble_config(const std::filesystem::path& path) {
  return parse_ensemble_config(read_json_file(path));
}

inline nlohmann::json ensemble_config_to_json(const EnsembleConfig& cfg) {
  nlohmann::json j;
  j["kind"] = cfg.kind;
  j["members"] = cfg.members;
  j["step"] = cfg.step;
  j["stacker"] = {{"seed", cfg.stacker_seed},
                  {"epochs", cfg.stacker_epochs},
                  {"batch_size", cfg.stacker_batch}};
  j["stacker_source"] = stacker_source_name(cfg.source);
  j["stopwords_path"] = cfg.stopwords_path;
  j["dataset"] = {{"kind", cfg.dataset.kind}, {"path", cfg.dataset.path}};
  j["split"] = {{"train", cfg.split.train},
                {"val", cfg.split.val},
                {"test", cfg.split.test},
                {"seed", cfg.split_seed}};
  return j;
}

struct EnsembleResult {
  EvalReport report;
  nlohmann::json report_json;
  std::vector<double> weights;  // interpolation only
  double fit_accuracy = 0.0;    // interpolation: grid-search accuracy on the fit split
  std::size_t dropped_fit = 0, dropped_test = 0;
};

namespace detail {

// One member ready for inference: model plus featurizer bound to cached
// embedding tables.
struct ReadyMember {
  LoadedMember loaded;
  Featurizer featurize;
};

class EmbeddingCache {
 public:
  const EmbeddingTable* get(const EmbeddingSource& src) {
    const std::string key = std::string(embedding_format_name(src.format)) + '\x1f' + src.path;
    auto it = tables_.find(key);
    if (it == tables_.end())
      it = tables_
               .emplace(key, std::make_unique<EmbeddingTable>(
                                 load_embedding_file(src.path, src.format, src.name)))
               .first;
    return it->second.get();
  }

  const EmbeddingTable* empty() { return &empty_; }

 private:
  std::map<std::string, std::unique_ptr<EmbeddingTable>> tables_;
  EmbeddingTable empty_{"none", 0};
};

// Per-review member probabilities over a split; reviews any member cannot
// featurize are dropped for all members so rows stay aligned.
inline void member_probs(const std::vector<ReadyMember>& members, const LabeledDataset& ds,
                         std::vector<std::vector<Eigen::VectorXd>>& probs,
                         std::vector<int>& labels, std::vector<std::string>& ids,
                         std::size_t& dropped) {
  probs.clear();
  labels.clear();
  ids.clear();
  dropped = 0;
  for (const LabeledReview& review : ds.reviews) {
    std::vector<Eigen::VectorXd> row;
    row.reserve(members.size());
    bool usable = true;
    for (const ReadyMember& member : members) {
      std::optional<Eigen::MatrixXd> input = member.featurize(review.tokens);
      if (!input) {
        usable = false;
        break;
      }
      row.push_back(nn::predict_proba(member.loaded.model, *input));
    }
    if (!usable) {
      ++dropped;
      continue;
    }
    probs.push_back(std::move(row));
    labels.push_back(static_cast<int>(review.label));
    ids.push_back(review.id);
  }
}

}  // namespace detail

// Loads the member run directories, computes per-review class probabilities
// on the fit and test splits, fits the combiner (grid-searched log-prob
// interpolation or a stacking network) and evaluates on the test split.
// Artifacts: ensemble_config.json, report.json, predictions.tsv, and
// stacker_model.json for the stacking kind.
inline EnsembleResult run_ensemble(const EnsembleConfig& cfg,
                                   const std::filesystem::path& out_dir) {
  const auto t0 = std::chrono::steady_clock::now();
  std::filesystem::create_directories(out_dir);

  StopwordSet stopwords;
  if (!cfg.stopwords_path.empty()) stopwords = load_stopwords(cfg.stopwords_path);
  const LabeledDataset dataset = load_dataset(cfg.dataset, stopwords);
  const auto splits = split_dataset(dataset, cfg.split, cfg.split_seed);
  const LabeledDataset& train_ds = splits[0];
  const LabeledDataset& val_ds = splits[1];
  const LabeledDataset& test_ds = splits[2];
  if (test_ds.empty()) throw EmptySplit("test split is empty");

  detail::EmbeddingCache cache;
  std::vector<detail::ReadyMember> members;
  members.reserve(cfg.members.size());
  int n_classes = 0;
  for (const std::string& dir : cfg.members) {
    LoadedMember loaded = load_member(dir);
    if (n_classes == 0)
      n_classes = loaded.model.n_classes;
    else if (loaded.model.n_classes != n_classes)
      throw InconsistentClasses("member " + dir + " predicts " +
                                std::to_string(loaded.model.n_classes) +
                                " classes, expected " + std::to_string(n_classes));
    const EmbeddingTable* t1 = cache.get(loaded.recipe.embeddings.at(0));
    const EmbeddingTable* t2 = loaded.recipe.embeddings.size() == 2
                                   ? cache.get(loaded.recipe.embeddings.at(1))
                                   : cache.empty();
    Featurizer featurize = make_featurizer(loaded.recipe, loaded.stats, t1, t2,
                                           loaded.arch.kind, loaded.arch.max_len);
    members.push_back(detail::ReadyMember{std::move(loaded), std::move(featurize)});
  }

  // Interpolation weights are always fit on validation; the stacker follows
  // the configured source policy.
  if (cfg.kind == "interpolation" && val_ds.empty())
    throw EmptyValidation("interpolation weights need a non-empty validation split");
  const LabeledDataset& fit_ds = cfg.kind == "interpolation"
                                     ? val_ds
                                     : stacker_source(cfg.source, train_ds, val_ds);

  EnsembleResult result;
  std::vector<std::vector<Eigen::VectorXd>> fit_probs, test_probs;
  std::vector<int> fit_labels, test_labels;
  std::vector<std::string> fit_ids, test_ids;
  detail::member_probs(members, fit_ds, fit_probs, fit_labels, fit_ids, result.dropped_fit);
  detail::member_probs(members, test_ds, test_probs, test_labels, test_ids,
                       result.dropped_test);
  if (fit_probs.empty()) throw EmptySplit("no usable reviews in the combiner fit split");
  if (test_probs.empty()) throw EmptySplit("no usable reviews in the test split");

  const nlohmann::json resolved = ensemble_config_to_json(cfg);
  write_json_file(resolved, out_dir / "ensemble_config.json");
  const std::string config_hash = fnv1a_hex(resolved.dump());

  std::vector<int> predicted;
  std::vector<Eigen::VectorXd> out_probs;
  predicted.reserve(test_probs.size());
  out_probs.reserve(test_probs.size());
  nlohmann::json combiner;

  if (cfg.kind == "interpolation") {
    GridSearchResult gs = grid_search_weights(fit_probs, fit_labels, cfg.step);
    result.weights = gs.weights;
    result.fit_accuracy = gs.accuracy;
    for (const auto& row : test_probs) {
      Eigen::VectorXd scores = interpolate_log_probs(row, gs.weights);
      predicted.push_back(nn::argmax_class(scores));
      // Persist scores renormalized as probabilities of the combined model.
      Eigen::VectorXd p = (scores.array() - scores.maxCoeff()).exp();
      out_probs.push_back(p / p.sum());
    }
    combiner["weights"] = gs.weights;
    combiner["fit_accuracy"] = gs.accuracy;
    combiner["step"] = cfg.step;
  } else {
    const std::vector<Eigen::VectorXd> fit_features = build_stacking_features(fit_probs);
    nn::Model stacker = train_stacker(fit_features, fit_labels, n_classes, cfg.stacker_seed,
                                      cfg.stacker_epochs, cfg.stacker_batch);
    nn::save_model(stacker, (out_dir / "stacker_model.json").string());
    const std::vector<Eigen::VectorXd> test_features = build_stacking_features(test_probs);
    for (const Eigen::VectorXd& f : test_features) {
      Eigen::VectorXd p = nn::predict_proba(stacker, Eigen::MatrixXd(f));
      predicted.push_back(nn::argmax_class(p));
      out_probs.push_back(std::move(p));
    }
    combiner["stacker"] = {{"seed", cfg.stacker_seed},
                           {"epochs", cfg.stacker_epochs},
                           {"batch_size", cfg.stacker_batch},
                           {"source", stacker_source_name(cfg.source)}};
  }

  write_predictions_tsv(test_ids, predicted, out_probs, out_dir / "predictions.tsv");

  result.report = evaluate(predicted, test_labels, n_classes);
  result.report.config_hash = config_hash;
  result.report.seed = cfg.kind == "interpolation" ? cfg.split_seed : cfg.stacker_seed;

  nlohmann::json rj = report_to_json(result.report);
  rj["kind"] = cfg.kind;
  rj["members"] = cfg.members;
  rj["combiner"] = std::move(combiner);
  rj["dropped"] = {{"fit", result.dropped_fit}, {"test", result.dropped_test}};
  result.report_json = rj;
  write_json_file(rj, out_dir / "report.json");

  result.report.wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return result;
}

}  // namespace polarity

#endif  // POLARITY_ENSEMBLE_RUN_HPP
