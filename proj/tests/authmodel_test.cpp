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

#include <cmath>
#include <functional>
#include <random>

#include "doctest.h"
#include "sendgate/authmodel/fusion.hpp"
#include "sendgate/authmodel/lstm.hpp"
#include "sendgate/authmodel/model_io.hpp"
#include "sendgate/authmodel/train.hpp"
#include "sendgate/authmodel/vocabulary.hpp"
#include "sendgate/error.hpp"
#include "sendgate/testkit/corpus.hpp"
#include "support/gradcheck.hpp"
#include "support/oracle.hpp"

using namespace sendgate;
using namespace sendgate::authmodel;

namespace {

ErrorCode error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::invalid_argument;
}

identity::LookalikeReport report(identity::AddressVerdict v) {
  identity::LookalikeReport r;
  r.address = "x@y.z";
  r.verdict = v;
  if (v == identity::AddressVerdict::lookalike_of) {
    r.lookalike_of = "x@yy.z";
    r.evidence.push_back({identity::Technique::edit_distance, "1"});
  }
  return r;
}

Prediction prediction(double p_legit) {
  Prediction p;
  p.probabilities = {p_legit, 1 - p_legit};
  p.label = p_legit >= 0.5 ? Label::legitimate : Label::impersonated;
  return p;
}

stylometry::StylometricVector random_styl(std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0, 1);
  stylometry::StylometricVector v;
  for (std::size_t j = 0; j < v.size(); ++j) v[j] = normal(rng);
  return v;
}

}  // namespace

TEST_CASE("vocabulary reserves padding and unknown") {
  const std::vector<std::vector<std::string>> docs = {
      {"a", "b", "a", "c"}, {"b", "a", "d"}, {"c", "e"}};
  const auto v = Vocabulary::build(docs, 2);
  CHECK(v.tokens() == std::vector<std::string>{"<pad>", "<unk>", "a", "b", "c"});
  CHECK(v.index_of("a") == 2);
  CHECK(v.index_of("zzz") == Vocabulary::kUnknown);
  CHECK(Vocabulary::build(docs, 1, 4).size() == 4);
  const std::vector<std::string> tokens = {"a", "x", "c", "b", "a"};
  const auto seq = encode(tokens, v, 3);
  CHECK(seq.indices == std::vector<std::size_t>{2, 1, 4});
  CHECK(decode(seq, v) == std::vector<std::string>{"a", "<unk>", "c"});
  CHECK(error_of([] { Vocabulary(std::vector<std::string>{"a", "b"}); }) == ErrorCode::invalid_argument);
}

TEST_CASE("softmax is stable and normalized") {
  const auto p = softmax({1000.0, 1000.0});
  CHECK(p[0] == doctest::Approx(0.5));
  const auto q = softmax({-800.0, 0.0});
  CHECK(q[0] >= 0);
  CHECK(q[0] + q[1] == doctest::Approx(1.0));
  CHECK(predict_from_logits({0.0, 1.0}).label == Label::impersonated);
}

TEST_CASE("initialization ranges") {
  const auto p = ModelParams::initialize(10, 6, 42);
  p.visit([&](std::string_view name, std::span<const double> values) {
    for (double v : values) {
      if (name == "b_f")
        CHECK(v == 1.0);
      else
        CHECK(std::abs(v) <= 0.08);
    }
  });
  CHECK(ModelParams::initialize(10, 6, 42) == p);
  CHECK_FALSE(ModelParams::initialize(10, 6, 43) == p);
  CHECK(p.W_h.rows() == 6 + 97);
  CHECK(p.W_h.cols() == 2);
}

TEST_CASE("forward pass equals the scalar oracle") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    const auto p = ModelParams::initialize(9, 5, static_cast<std::uint64_t>(trial));
    EncodedSequence seq;
    for (int t = 0; t < 1 + trial % 7; ++t) seq.indices.push_back(static_cast<std::size_t>(t % 9));
    const auto styl = random_styl(rng);
    const auto z = logits(seq, styl, p);
    const auto want = oracle::lstm_logits(seq, styl, p);
    CHECK(std::abs(z[0] - want[0]) < 1e-12);
    CHECK(std::abs(z[1] - want[1]) < 1e-12);
    CHECK(std::abs(loss(seq, styl, Label::impersonated, p) -
                   oracle::lstm_loss(seq, styl, Label::impersonated, p)) < 1e-12);
  }
}

TEST_CASE("one cell step by hand") {
  auto p = ModelParams::zeros(3, 1);
  std::vector<double> x(kEmbedDim, 0.0);
  x[0] = 1.0;
  p.W[kInput](0, 0) = 0.5;
  p.W[kCandidate](0, 0) = 0.25;
  p.b[kForget][0] = 1.0;
  p.b[kOutput][0] = -0.5;
  LstmState s{{0.2}, {0.3}};
  const auto next = lstm_step(x, s, p);
  const auto sig = [](double v) { return 1 / (1 + std::exp(-v)); };
  const double c = sig(1.0) * 0.3 + sig(0.5) * std::tanh(0.25);
  CHECK(next.c[0] == doctest::Approx(c).epsilon(1e-14));
  CHECK(next.h[0] == doctest::Approx(sig(-0.5) * std::tanh(c)).epsilon(1e-14));
  CHECK(error_of([&] { lstm_step(std::vector<double>(3), s, p); }) == ErrorCode::shape_mismatch);
}

TEST_CASE("backprop matches central differences") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto r = oracle::gradient_check(4, 5, seed);
    INFO(r.worst);
    CHECK(r.parameters > 2000);
    CHECK(r.max_relative_error < 1e-4);
  }
}

TEST_CASE("gradients only touch embedding rows that were used") {
  const auto p = ModelParams::initialize(8, 3, 5);
  Gradients g(p);
  std::mt19937_64 rng(1);
  backprop(EncodedSequence{{2, 5, 2}}, random_styl(rng), Label::legitimate, p, g);
  for (std::size_t r = 0; r < 8; ++r) {
    double norm = 0;
    for (double v : g.d.embedding.row(r)) norm += v * v;
    if (r == 2 || r == 5)
      CHECK(norm > 0);
    else
      CHECK(norm == 0);
  }
  const double before = g.squared_norm();
  g.scale(0.5);
  CHECK(g.squared_norm() == doctest::Approx(before / 4));
  g.clear();
  CHECK(g.squared_norm() == 0);
}

TEST_CASE("fuse truth table") {
  using identity::AddressVerdict;
  for (int mask = 0; mask < 8; ++mask) {
    const bool code_ok = mask & 1;
    const bool id_ok = mask & 2;
    const bool styl_ok = mask & 4;
    const auto v = fuse(code_ok, report(id_ok ? AddressVerdict::exact_known : AddressVerdict::lookalike_of),
                        prediction(styl_ok ? 0.9 : 0.1));
    std::vector<std::string> want;
    if (!code_ok) want.emplace_back("code");
    if (!id_ok) want.emplace_back("email_id");
    if (!styl_ok) want.emplace_back("stylometry");
    INFO("mask " << mask);
    CHECK(v.reasons == want);
    CHECK((v.decision == Decision::allow) == want.empty());
  }
  CHECK(fuse(true, report(AddressVerdict::unknown), prediction(0.5)).decision == Decision::allow);
  CHECK(fuse(true, report(AddressVerdict::exact_known), prediction(0.49)).decision == Decision::dangerous);
  CHECK(fuse(true, report(AddressVerdict::exact_known), prediction(0.7), 0.8).reasons ==
        std::vector<std::string>{"stylometry"});
}

TEST_CASE("most severe report") {
  using identity::AddressVerdict;
  const auto a = report(AddressVerdict::exact_known);
  auto b = report(AddressVerdict::lookalike_of);
  b.address = "second@y.z";
  const auto c = report(AddressVerdict::unknown);
  CHECK(most_severe({a, c, b}).address == "second@y.z");
  CHECK(most_severe({c, a}).verdict == AddressVerdict::unknown);
}

TEST_CASE("training errors") {
  CHECK(error_of([] { train({}, {}); }) == ErrorCode::empty_corpus);
  std::vector<LabeledMessage> one_class = {{testkit::legitimate_message(1), Label::legitimate}};
  CHECK(error_of([&] { train(one_class, {}); }) == ErrorCode::single_class_corpus);
}

TEST_CASE("a small model learns the two styles and survives serialization") {
  const auto corpus = testkit::generate_corpus(120, 5);
  const std::vector<LabeledMessage> train_set(corpus.begin(), corpus.begin() + 90);
  const std::vector<LabeledMessage> test_set(corpus.begin() + 90, corpus.end());
  TrainConfig cfg;
  cfg.epochs = 4;
  cfg.hidden_size = 8;
  cfg.max_length = 60;
  const stylometry::FeatureExtractor ex;
  const auto result = train(train_set, cfg, ex);
  REQUIRE(result.history.size() == 4);
  CHECK(result.history[1].loss < result.history[0].loss);
  CHECK(evaluate(result.model, test_set, ex).accuracy() >= 0.9);

  const auto doc = model_to_json(result.model);
  const auto back = model_from_json(nlohmann::json::parse(doc.dump()), ex.manifest_hash());
  CHECK(back.params == result.model.params);
  CHECK(back.vocabulary == result.model.vocabulary);
  CHECK(back.config == result.model.config);
  CHECK(back.standardizer.mean() == result.model.standardizer.mean());
  const auto body = test_set.front().message.body;
  CHECK(back.predict_body(body, ex).probabilities == result.model.predict_body(body, ex).probabilities);

  CHECK(error_of([&] { model_from_json(doc, "other"); }) == ErrorCode::manifest_mismatch);
  auto old = doc;
  old["version"] = 99;
  CHECK(error_of([&] { model_from_json(old, ex.manifest_hash()); }) == ErrorCode::version_mismatch);
  auto bent = doc;
  bent["tensors"]["U_i"]["shape"] = {3, 3};
  CHECK(error_of([&] { model_from_json(bent, ex.manifest_hash()); }) == ErrorCode::shape_mismatch);
  auto cut = doc;
  cut.erase("tensors");
  CHECK(error_of([&] { model_from_json(cut, ex.manifest_hash()); }) == ErrorCode::corrupt_record);

  const auto again = train(train_set, cfg, ex);
  CHECK(again.model.params == result.model.params);
}
