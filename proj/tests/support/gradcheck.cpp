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

#include "support/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <span>
#include <vector>

#include <fmt/format.h>

#include "sendgate/authmodel/lstm.hpp"
#include "support/oracle.hpp"

namespace oracle {

using namespace sendgate::authmodel;

GradCheckResult gradient_check(std::size_t hidden, std::size_t tokens, std::uint64_t seed,
                               double epsilon) {
  const std::size_t vocab = tokens + Vocabulary::kUnknown + 1;
  ModelParams params = ModelParams::initialize(vocab, hidden, seed);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> wide(-0.5, 0.5);
  params.visit([&](std::string_view, std::span<double> values) {
    for (double& v : values) v = wide(rng);
  });

  EncodedSequence seq;
  for (std::size_t t = 0; t < tokens; ++t) seq.indices.push_back(Vocabulary::kUnknown + 1 + t);
  sendgate::stylometry::StylometricVector styl;
  std::normal_distribution<double> normal(0.0, 1.0);
  for (std::size_t j = 0; j < styl.size(); ++j) styl[j] = normal(rng);

  GradCheckResult result;
  for (const Label label : {Label::legitimate, Label::impersonated}) {
    Gradients grads(params);
    backprop(seq, styl, label, params, grads);

    std::vector<std::pair<std::string, std::span<const double>>> analytic;
    grads.d.visit([&](std::string_view name, std::span<const double> values) {
      analytic.emplace_back(std::string(name), values);
    });
    std::size_t tensor = 0;
    params.visit([&](std::string_view name, std::span<double> values) {
      const auto& a = analytic[tensor++].second;
      for (std::size_t i = 0; i < values.size(); ++i) {
        const double saved = values[i];
        values[i] = saved + epsilon;
        const double up = lstm_loss(seq, styl, label, params);
        values[i] = saved - epsilon;
        const double down = lstm_loss(seq, styl, label, params);
        values[i] = saved;
        const double numeric = (up - down) / (2 * epsilon);
        const double err =
            std::abs(a[i] - numeric) / std::max({std::abs(a[i]), std::abs(numeric), 1e-6});
        ++result.parameters;
        if (err > result.max_relative_error) {
          result.max_relative_error = err;
          result.worst = fmt::format("{}[{}] analytic {:.6e} numeric {:.6e}", name, i, a[i], numeric);
        }
      }
    });
  }
  return result;
}

}  // namespace oracle
