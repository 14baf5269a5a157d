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

#ifndef POLARITY_EVAL_HPP
#define POLARITY_EVAL_HPP

#include <cstdint>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "polarity/errors.hpp"

namespace polarity {

struct EvalReport {
  double accuracy = 0.0;
  // confusion[t][p] counts items of true class t predicted as p.
  std::vector<std::vector<std::uint64_t>> confusion;
  std::size_t n_items = 0;
  std::string config_hash;
  std::uint64_t seed = 0;
  // Wall-clock only; kept out of persisted reports so reruns byte-compare.
  double wall_ms = 0.0;
};

inline EvalReport evaluate(const std::vector<int>& predicted, const std::vector<int>& labels,
                           int n_classes) {
  if (predicted.size() != labels.size())
    throw LengthMismatch("predictions vs labels: " + std::to_string(predicted.size()) +
                         " vs " + std::to_string(labels.size()));
  if (predicted.empty()) throw EmptyDataset("nothing to evaluate");
  if (n_classes < 2) throw BadSpec("n_classes must be at least 2");

  EvalReport report;
  report.n_items = predicted.size();
  report.confusion.assign(static_cast<std::size_t>(n_classes),
                          std::vector<std::uint64_t>(static_cast<std::size_t>(n_classes), 0));
  std::uint64_t correct = 0;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    if (labels[i] < 0 || labels[i] >= n_classes)
      throw BadLabel("true class " + std::to_string(labels[i]) + " out of range");
    if (predicted[i] < 0 || predicted[i] >= n_classes)
      throw BadLabel("predicted class " + std::to_string(predicted[i]) + " out of range");
    ++report.confusion[static_cast<std::size_t>(labels[i])]
                      [static_cast<std::size_t>(predicted[i])];
    if (predicted[i] == labels[i]) ++correct;
  }
  report.accuracy = static_cast<double>(correct) / static_cast<double>(report.n_items);
  return report;
}

// Persisted form. Timings are deliberately omitted.
inline nlohmann::json report_to_json(const EvalReport& report) {
  nlohmann::json j;
  j["accuracy"] = report.accuracy;
  j["confusion"] = report.confusion;
  j["n_items"] = report.n_items;
  j["config_hash"] = report.config_hash;
  j["seed"] = report.seed;
  return j;
}

}  // namespace polarity

#endif  // POLARITY_EVAL_HPP
