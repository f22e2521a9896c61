// Copyright 2026 The Sendgate Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sendgate/authmodel/lstm.hpp"
#include "sendgate/authmodel/vocabulary.hpp"
#include "sendgate/message.hpp"
#include "sendgate/stylometry.hpp"

namespace sendgate::authmodel {

struct TrainConfig {
  std::size_t epochs = 15;
  double learning_rate = 0.05;
  std::size_t hidden_size = 64;
  std::size_t max_length = 200;
  std::uint64_t seed = 1;
  double clip_norm = 5.0;
  std::size_t min_token_frequency = 2;
  std::size_t max_vocabulary = 20000;

  bool operator==(const TrainConfig&) const = default;
};

struct LabeledMessage {
  Message message;
  Label label = Label::legitimate;
};

// One encoded training example, ready for the network.
struct Example {
  EncodedSequence sequence;
  stylometry::StylometricVector styl;  // standardized
  Label label = Label::legitimate;
};

struct EpochMetrics {
  std::size_t epoch = 0;  // 1-based
  double loss = 0;        // mean cross-entropy seen during the pass
  double accuracy = 0;    // fraction predicted correctly during the pass
};

// Everything inference needs: the network plus the preprocessing it was
// trained with.
struct TrainedModel {
  Vocabulary vocabulary;
  stylometry::Standardizer standardizer;
  ModelParams params;
  TrainConfig config;
  std::string feature_manifest_hash;

  Prediction predict(const Message& message,
                     const stylometry::FeatureExtractor& extractor) const;
  Prediction predict_body(std::string_view body,
                          const stylometry::FeatureExtractor& extractor) const;
};

struct TrainResult {
  TrainedModel model;
  std::vector<EpochMetrics> history;
};

// Per-example gradient descent with global-norm clipping, shuffled each
// epoch from the seed. Mutates `params` in place.
std::vector<EpochMetrics> fit(ModelParams& params,
                              std::span<const Example> examples,
                              const TrainConfig& config);

// Builds vocabulary and standardizer from the corpus, then fits.
// Throws Error(empty_corpus | single_class_corpus).
TrainResult train(std::span<const LabeledMessage> corpus,
                  const TrainConfig& config,
                  const stylometry::FeatureExtractor& extractor =
                      stylometry::FeatureExtractor());

struct Evaluation {
  std::size_t total = 0;
  std::size_t correct = 0;
  // confusion[truth][predicted]
  std::size_t confusion[2][2] = {{0, 0}, {0, 0}};
  double mean_loss = 0;

  double accuracy() const {
    return total == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(total);
  }
};

Evaluation evaluate(const TrainedModel& model,
                    std::span<const LabeledMessage> corpus,
                    const stylometry::FeatureExtractor& extractor);

}  // namespace sendgate::authmodel
