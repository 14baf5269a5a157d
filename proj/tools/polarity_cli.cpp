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

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iostream>
#include <string>
#include <unordered_map>
#include <vector>

#include "CLI11.hpp"
#include "polarity/gradcheck_suite.hpp"
#include "polarity/polarity.hpp"

namespace {

namespace fs = std::filesystem;
using polarity::DatasetSource;

int cmd_stats(const std::string& data, const std::string& kind, const std::string& stopwords,
              const std::string& out, const std::string& rank_out, bool population) {
  polarity::StopwordSet stop;
  if (!stopwords.empty()) stop = polarity::load_stopwords(stopwords);
  const polarity::LabeledDataset ds =
      polarity::load_dataset(DatasetSource{kind, data}, stop);
  const polarity::WordStats stats = polarity::compute_word_stats(ds);
  polarity::write_word_stats_tsv(stats, out);
  if (!rank_out.empty())
    polarity::write_filter_rank_tsv(polarity::rank_words(stats, population), rank_out);
  std::cout << "reviews: " << ds.size() << "\nvocabulary: " << stats.vocabulary_size()
            << "\ntokens: " << stats.total_tokens() << '\n';
  return 0;
}

int cmd_train(const std::string& config_path, const std::string& out_dir) {
  const polarity::RunConfig cfg = polarity::load_run_config(config_path);
  const polarity::PipelineResult result = polarity::run_pipeline(cfg, out_dir);
  std::cout << "test accuracy: " << result.report.accuracy << " (n=" << result.report.n_items
            << ")\n";
  std::cerr << "wall time: " << result.report.wall_ms << " ms\n";
  if (result.dropped_train + result.dropped_val + result.dropped_test > 0)
    std::cerr << "dropped reviews without usable tokens: train=" << result.dropped_train
              << " val=" << result.dropped_val << " test=" << result.dropped_test << '\n';
  return 0;
}

int cmd_predict(const std::string& model_path, std::string stats_path, const std::string& data,
                const std::string& kind, const std::string& out) {
  const nlohmann::json doc = polarity::read_json_file(model_path);
  polarity::nn::Model model = polarity::nn::model_from_json(doc);
  if (!doc.contains("architecture") || !doc.contains("pipeline"))
    throw polarity::FormatError("model file lacks architecture/pipeline metadata: " +
                                model_path);
  const polarity::ArchitectureSpec arch =
      polarity::architecture_from_json(doc.at("architecture"));
  const polarity::FeatureRecipe recipe = polarity::parse_feature_recipe(doc.at("pipeline"));

  if (stats_path.empty())
    stats_path = (fs::path(model_path).parent_path() / "stats.tsv").string();
  const polarity::WordStats stats = polarity::read_word_stats_tsv(stats_path);

  polarity::StopwordSet stop;
  if (!recipe.stopwords_path.empty()) stop = polarity::load_stopwords(recipe.stopwords_path);
  const polarity::LabeledDataset ds =
      polarity::load_dataset(DatasetSource{kind, data}, stop);

  const polarity::EmbeddingPair tables = polarity::load_embedding_pair(recipe.embeddings);
  const polarity::Featurizer featurize = polarity::make_featurizer(
      recipe, stats, &tables.first, &tables.second, arch.kind, arch.max_len);

  std::vector<std::string> ids;
  std::vector<int> predicted;
  std::vector<Eigen::VectorXd> probs;
  std::size_t skipped = 0;
  for (const polarity::LabeledReview& review : ds.reviews) {
    const auto input = featurize(review.tokens);
    if (!input) {
      ++skipped;
      continue;
    }
    probs.push_back(polarity::nn::predict_proba(model, *input));
    predicted.push_back(polarity::nn::argmax_class(probs.back()));
    ids.push_back(review.id);
  }
  if (ids.empty()) throw polarity::EmptyDataset("no review could be featurized");
  polarity::write_predictions_tsv(ids, predicted, probs, out);
  std::cout << "predicted: " << ids.size() << '\n';
  if (skipped > 0) std::cerr << "skipped reviews without usable tokens: " << skipped << '\n';
  return 0;
}

int cmd_evaluate(const std::string& predictions_path, const std::string& data,
                 const std::string& kind) {
  const auto rows = polarity::read_predictions_tsv(predictions_path);
  const polarity::LabeledDataset ds =
      polarity::load_dataset(DatasetSource{kind, data}, polarity::StopwordSet{});
  std::unordered_map<std::string, int> labels_by_id;
  for (const polarity::LabeledReview& review : ds.reviews)
    labels_by_id.emplace(review.id, static_cast<int>(review.label));

  std::vector<int> predicted, labels;
  int n_classes = ds.class_set == polarity::ClassSet::ternary ? 3 : 2;
  for (const polarity::PredictionRow& row : rows) {
    const auto it = labels_by_id.find(row.id);
    if (it == labels_by_id.end())
      throw polarity::ValidationError("prediction id '" + row.id +
                                      "' is not present in the dataset");
    predicted.push_back(row.predicted);
    labels.push_back(it->second);
    if (row.predicted == 2) n_classes = 3;
  }
  const polarity::EvalReport report = polarity::evaluate(predicted, labels, n_classes);
  std::cout << polarity::report_to_json(report).dump(2) << '\n';
  return 0;
}

int cmd_ensemble(const std::string& config_path, const std::string& out_dir) {
  const polarity::EnsembleConfig cfg = polarity::load_ensemble_config(config_path);
  const polarity::EnsembleResult result = polarity::run_ensemble(cfg, out_dir);
  std::cout << "test accuracy: " << result.report.accuracy << " (n=" << result.report.n_items
            << ")\n";
  if (cfg.kind == "interpolation") {
    std::cout << "weights:";
    for (double w : result.weights) std::cout << ' ' << w;
    std::cout << " (fit accuracy " << result.fit_accuracy << ")\n";
  }
  std::cerr << "wall time: " << result.report.wall_ms << " ms\n";
  return 0;
}

int cmd_gradcheck(int n_ffnn, int n_cnn, std::uint64_t seed, double tol) {
  const auto cases = polarity::gradcheck_suite(n_ffnn, n_cnn, seed);
  bool ok = true;
  for (const polarity::GradCheckCase& c : cases) {
    const bool pass = c.max_rel_err < tol;
    ok = ok && pass;
    std::cout << (pass ? "ok   " : "FAIL ") << c.name << "  max_rel_err=" << c.max_rel_err
              << '\n';
  }
  std::cout << (ok ? "all gradients match" : "gradient mismatch detected") << '\n';
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Review polarity classification from averaged word-embedding features"};
  app.require_subcommand(1);
  std::function<int()> action;

  auto* stats = app.add_subcommand("stats", "Compute per-word class counts and rankings");
  {
    auto data = std::make_shared<std::string>();
    auto kind = std::make_shared<std::string>("jsonl");
    auto stop = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    auto rank = std::make_shared<std::string>();
    auto population = std::make_shared<bool>(false);
    stats->add_option("--data", *data, "dataset file or directory")->required();
    stats->add_option("--kind", *kind, "dataset kind: jsonl or imdb");
    stats->add_option("--stopwords", *stop, "stop-word list, one word per line");
    stats->add_option("--out", *out, "output TSV of per-word class counts")->required();
    stats->add_option("--rank", *rank, "also write the normalized-stddev ranking TSV");
    stats->add_flag("--population", *population,
                    "use the population form of the ranking stddev");
    stats->callback([=, &action] {
      action = [=] { return cmd_stats(*data, *kind, *stop, *out, *rank, *population); };
    });
  }

  auto* train = app.add_subcommand("train", "Run the training pipeline from a config file");
  {
    auto config = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    train->add_option("--config", *config, "run configuration JSON")->required();
    train->add_option("--out", *out, "output directory for run artifacts")->required();
    train->callback([=, &action] { action = [=] { return cmd_train(*config, *out); }; });
  }

  auto* predict = app.add_subcommand("predict", "Predict labels with a trained model");
  {
    auto model = std::make_shared<std::string>();
    auto stats_path = std::make_shared<std::string>();
    auto data = std::make_shared<std::string>();
    auto kind = std::make_shared<std::string>("jsonl");
    auto out = std::make_shared<std::string>();
    predict->add_option("--model", *model, "trained model JSON")->required();
    predict->add_option("--stats", *stats_path,
                        "word-stats TSV from the training run (default: next to the model)");
    predict->add_option("--data", *data, "dataset file or directory")->required();
    predict->add_option("--kind", *kind, "dataset kind: jsonl or imdb");
    predict->add_option("--out", *out, "output predictions TSV")->required();
    predict->callback([=, &action] {
      action = [=] { return cmd_predict(*model, *stats_path, *data, *kind, *out); };
    });
  }

  auto* evaluate = app.add_subcommand("evaluate", "Score a predictions file against labels");
  {
    auto preds = std::make_shared<std::string>();
    auto data = std::make_shared<std::string>();
    auto kind = std::make_shared<std::string>("jsonl");
    evaluate->add_option("--predictions", *preds, "predictions TSV")->required();
    evaluate->add_option("--data", *data, "labeled dataset the ids refer to")->required();
    evaluate->add_option("--kind", *kind, "dataset kind: jsonl or imdb");
    evaluate->callback([=, &action] {
      action = [=] { return cmd_evaluate(*preds, *data, *kind); };
    });
  }

  auto* ensemble = app.add_subcommand("ensemble", "Combine trained runs into an ensemble");
  {
    auto config = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    ensemble->add_option("--config", *config, "ensemble configuration JSON")->required();
    ensemble->add_option("--out", *out, "output directory")->required();
    ensemble->callback([=, &action] { action = [=] { return cmd_ensemble(*config, *out); }; });
  }

  auto* gradcheck = app.add_subcommand("gradcheck", "Finite-difference gradient validation");
  {
    auto n_ffnn = std::make_shared<int>(20);
    auto n_cnn = std::make_shared<int>(10);
    auto seed = std::make_shared<std::uint64_t>(12345);
    auto tol = std::make_shared<double>(1e-4);
    gradcheck->add_option("--ffnn", *n_ffnn, "number of randomized dense models");
    gradcheck->add_option("--cnn", *n_cnn, "number of randomized convolutional models");
    gradcheck->add_option("--seed", *seed, "suite seed");
    gradcheck->add_option("--tol", *tol, "maximum allowed relative error");
    gradcheck->callback([=, &action] {
      action = [=] { return cmd_gradcheck(*n_ffnn, *n_cnn, *seed, *tol); };
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Collapse CLI11's many parse-error codes into the documented exit 1,
    // keeping 0 for --help and --version.
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    return action ? action() : 1;
  } catch (const polarity::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
