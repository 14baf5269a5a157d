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

#ifndef POLARITY_POLARITY_HPP
#define POLARITY_POLARITY_HPP

#include "polarity/corpus.hpp"
#include "polarity/embedding.hpp"
#include "polarity/ensemble.hpp"
#include "polarity/ensemble_run.hpp"
#include "polarity/errors.hpp"
#include "polarity/eval.hpp"
#include "polarity/features.hpp"
#include "polarity/models.hpp"
#include "polarity/nn/adadelta.hpp"
#include "polarity/nn/gradcheck.hpp"
#include "polarity/nn/init.hpp"
#include "polarity/nn/loss.hpp"
#include "polarity/nn/model.hpp"
#include "polarity/nn/serialize.hpp"
#include "polarity/nn/train.hpp"
#include "polarity/pipeline.hpp"
#include "polarity/word_stats.hpp"

#endif  // POLARITY_POLARITY_HPP
