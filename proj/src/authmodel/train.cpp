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

#include "sendgate/authmodel/train.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "sendgate/error.hpp"

namespace sendgate::authmodel {
namespace {

Example make_example(const Message& message, Label label,
                     const Vocabulary& vocab,
                     const stylometry::Standardizer& standardizer,
                     const stylometry::FeatureExtractor& extractor,
                     std::size_t max_length) {
  const auto seg = segment(message.body);
  return {encode(seg.tokens, vocab, max_length),
          standardizer.apply(extractor.extract(seg, message.body)), label};
}

}  // namespace

Prediction TrainedModel::predict_body(
    std::string_view body, const stylometry::FeatureExtractor& extractor) const {
  const auto seg = segment(body);
  return forward(encode(seg.tokens, vocabulary, config.max_length),
                 standardizer.apply(extractor.extract(seg, body)), params);
}

Prediction TrainedModel::predict(
    const Message& message, const stylometry::FeatureExtractor& extractor) const {
  return predict_body(message.body, extractor);
}

std::vector<EpochMetrics> fit(ModelParams& params,
                              std::span<const Example> examples,
                              const TrainConfig& config) {
  std::vector<EpochMetrics> history;
  if (examples.empty()) return history;
  Gradients grads(params);
  std::vector<std::size_t> order(examples.size());
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(config.seed);

  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    // Fisher-Yates with our own index draw keeps the order identical across
    // standard library implementations.
    for (std::size_t i = order.size(); i > 1; --i)
      std::swap(order[i - 1], order[rng() % i]);

    double total_loss = 0;
    std::size_t correct = 0;
    for (auto idx : order) {
      const auto& ex = examples[idx];
      grads.clear();
      const auto r = backprop(ex.sequence, ex.styl, ex.label, params, grads);
      total_loss += r.loss;
      if (r.prediction.label == ex.label) ++correct;
      const double norm = std::sqrt(grads.squared_norm());
      if (config.clip_norm > 0 && norm > config.clip_norm)
        grads.scale(config.clip_norm / norm);
      if (config.learning_rate != 0.0)
        apply_gradients(params, grads, config.learning_rate);
    }
    const double n = static_cast<double>(examples.size());
    history.push_back({epoch, total_loss / n, static_cast<double>(correct) / n});
  }
  return history;
}

TrainResult train(std::span<const LabeledMessage> corpus,
                  const TrainConfig& config,
                  const stylometry::FeatureExtractor& extractor) {
  if (corpus.empty()) throw Error(ErrorCode::empty_corpus, "corpus is empty");
  const bool has_legit = std::any_of(corpus.begin(), corpus.end(), [](const auto& m) {
    return m.label == Label::legitimate;
  });
  const bool has_imp = std::any_of(corpus.begin(), corpus.end(), [](const auto& m) {
    return m.label == Label::impersonated;
  });
  if (!has_legit || !has_imp)
    throw Error(ErrorCode::single_class_corpus,
                "corpus needs both legitimate and impersonated messages");
  if (config.hidden_size == 0 || config.max_length == 0)
    throw Error(ErrorCode::invalid_argument,
                "hidden size and max length must be positive");

  std::vector<TextSegmentation> segs;
  std::vector<std::vector<std::string>> docs;
  std::vector<stylometry::StylometricVector> raw;
  segs.reserve(corpus.size());
  for (const auto& m : corpus) {
    segs.push_back(segment(m.message.body));
    raw.push_back(extractor.extract(segs.back(), m.message.body));
    const auto& toks = segs.back().tokens;
    docs.emplace_back(toks.begin(),
                      toks.begin() + static_cast<std::ptrdiff_t>(
                                         std::min(toks.size(), config.max_length)));
  }

  TrainResult result;
  auto& model = result.model;
  model.config = config;
  model.feature_manifest_hash = extractor.manifest_hash();
  model.vocabulary =
      Vocabulary::build(docs, config.min_token_frequency, config.max_vocabulary);
  model.standardizer = stylometry::Standardizer::fit(raw);
  model.params = ModelParams::initialize(model.vocabulary.size(),
                                         config.hidden_size, config.seed);

  std::vector<Example> examples;
  examples.reserve(corpus.size());
  for (std::size_t i = 0; i < corpus.size(); ++i)
    examples.push_back({encode(segs[i].tokens, model.vocabulary, config.max_length),
                        model.standardizer.apply(raw[i]), corpus[i].label});

  result.history = fit(model.params, examples, config);
  return result;
}

Evaluation evaluate(const TrainedModel& model,
                    std::span<const LabeledMessage> corpus,
                    const stylometry::FeatureExtractor& extractor) {
  Evaluation ev;
  double total_loss = 0;
  for (const auto& m : corpus) {
    const auto ex = make_example(m.message, m.label, model.vocabulary,
                                 model.standardizer, extractor,
                                 model.config.max_length);
    const auto p = forward(ex.sequence, ex.styl, model.params);
    total_loss += loss(ex.sequence, ex.styl, ex.label, model.params);
    const auto truth = static_cast<std::size_t>(m.label);
    const auto predicted = static_cast<std::size_t>(p.label);
    ++ev.confusion[truth][predicted];
    if (truth == predicted) ++ev.correct;
    ++ev.total;
  }
  ev.mean_loss = ev.total == 0 ? 0.0 : total_loss / static_cast<double>(ev.total);
  return ev;
}

}  // namespace sendgate::authmodel
