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

#ifndef POLARITY_NN_INIT_HPP
#define POLARITY_NN_INIT_HPP

#include <Eigen/Core>
#include <cmath>
#include <cstdint>
#include <random>

#include "polarity/errors.hpp"

namespace polarity::nn {

// Uniform double in [0, 1) from raw engine output; avoids the
// implementation-defined std::uniform_real_distribution.
inline double uniform_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// splitmix64 of (base + k): cheap well-separated substreams for per-layer
// and per-epoch seeding.
inline std::uint64_t mix_seed(std::uint64_t base, std::uint64_t k) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (k + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

enum class InitBound {
  glorot_sqrt,    // sqrt(6 / (n_in + n_out)), the standard Glorot bound
  glorot_printed  // 6 / (n_in + n_out), sensitivity variant
};

inline double init_bound_value(int fan_in, int fan_out, InitBound bound) {
  const double ratio = 6.0 / static_cast<double>(fan_in + fan_out);
  return bound == InitBound::glorot_sqrt ? std::sqrt(ratio) : ratio;
}

// Fills rows x cols with i.i.d. uniform samples in +-bound. Fill order is
// row major so results are reproducible independent of storage layout.
inline Eigen::MatrixXd glorot_uniform(Eigen::Index rows, Eigen::Index cols, int fan_in,
                                      int fan_out, std::mt19937_64& rng,
                                      InitBound bound = InitBound::glorot_sqrt) {
  if (fan_in < 1 || fan_out < 1) throw BadSpec("glorot fans must be >= 1");
  const double b = init_bound_value(fan_in, fan_out, bound);
  Eigen::MatrixXd w(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) w(i, j) = (2.0 * uniform_unit(rng) - 1.0) * b;
  return w;
}

// Dense-layer weight matrix of shape n_out x n_in.
inline Eigen::MatrixXd glorot_init(int n_in, int n_out, std::uint64_t seed,
                                   InitBound bound = InitBound::glorot_sqrt) {
  std::mt19937_64 rng(seed);
  return glorot_uniform(n_out, n_in, n_in, n_out, rng, bound);
}

}  // namespace polarity::nn

#endif  // POLARITY_NN_INIT_HPP
