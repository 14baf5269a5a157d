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

#ifndef POLARITY_GRADCHECK_SUITE_HPP
#define POLARITY_GRADCHECK_SUITE_HPP

#include <cstdint>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "polarity/models.hpp"
#include "polarity/nn/gradcheck.hpp"
#include "polarity/nn/init.hpp"

namespace polarity {

struct GradCheckCase {
  std::string name;
  double max_rel_err = 0.0;
};

namespace detail {

inline Eigen::MatrixXd random_signal(Eigen::Index rows, Eigen::Index cols,
                                     std::mt19937_64& rng) {
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = 2.0 * nn::uniform_unit(rng) - 1.0;
  return m;
}

inline std::string int_list(const std::vector<int>& xs) {
  std::ostringstream out;
  out << '[';
  for (std::size_t i = 0; i < xs.size(); ++i) out << (i ? "," : "") << xs[i];
  out << ']';
  return out.str();
}

}  // namespace detail

// Randomized finite-difference validation across the architecture families:
// n_ffnn dense models cycling d in {8, 20} and the hidden-size ladder, and
// n_cnn convolutional models at d=8, max_len=6, window=3. Deterministic
// given the seed. Errors above ~1e-4 indicate a backpropagation defect.
inline std::vector<GradCheckCase> gradcheck_suite(int n_ffnn, int n_cnn, std::uint64_t seed) {
  std::vector<GradCheckCase> cases;
  cases.reserve(static_cast<std::size_t>(n_ffnn + n_cnn));

  for (int i = 0; i < n_ffnn; ++i) {
    const int d = i % 2 == 0 ? 8 : 20;
    const auto family = hidden_family(d);
    const std::vector<int>& hidden = family[static_cast<std::size_t>(i / 2) % family.size()];
    const int n_classes = i % 3 == 0 ? 3 : 2;
    nn::Model model = build_ffnn(d, hidden, n_classes, nn::mix_seed(seed, 1000 + i));

    std::mt19937_64 rng(nn::mix_seed(seed, 2000 + i));
    const int label = static_cast<int>(rng() % static_cast<std::uint64_t>(n_classes));
    const auto make_input = [&](int) { return detail::random_signal(d, 1, rng); };
    GradCheckCase c;
    c.max_rel_err = nn::nudged_gradient_check(model, make_input, label);
    std::ostringstream name;
    name << "ffnn d=" << d << " hidden=" << detail::int_list(hidden)
         << " classes=" << n_classes;
    c.name = name.str();
    cases.push_back(std::move(c));
  }

  for (int i = 0; i < n_cnn; ++i) {
    const int d = 8, max_len = 6, window = 3;
    const int n_filters = 2 + i % 4;
    const int n_classes = i % 2 == 0 ? 2 : 3;
    nn::Model model =
        build_cnn(d, max_len, window, n_filters, n_classes, nn::mix_seed(seed, 3000 + i));

    std::mt19937_64 rng(nn::mix_seed(seed, 4000 + i));
    const int label = static_cast<int>(rng() % static_cast<std::uint64_t>(n_classes));
    const auto make_input = [&](int) { return detail::random_signal(max_len, d, rng); };
    GradCheckCase c;
    c.max_rel_err = nn::nudged_gradient_check(model, make_input, label);
    std::ostringstream name;
    name << "cnn d=" << d << " max_len=" << max_len << " window=" << window
         << " filters=" << n_filters << " classes=" << n_classes;
    c.name = name.str();
    cases.push_back(std::move(c));
  }
  return cases;
}

}  // namespace polarity

#endif  // POLARITY_GRADCHECK_SUITE_HPP
