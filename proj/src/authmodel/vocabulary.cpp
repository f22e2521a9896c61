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

#include "sendgate/authmodel/vocabulary.hpp"

#include <algorithm>
#include <map>

#include <fmt/format.h>

#include "sendgate/error.hpp"

namespace sendgate::authmodel {

Vocabulary::Vocabulary()
    : Vocabulary(std::vector<std::string>{std::string(kPadToken),
                                          std::string(kUnknownToken)}) {}

Vocabulary::Vocabulary(std::vector<std::string> tokens)
    : tokens_(std::move(tokens)) {
  if (tokens_.size() < 2 || tokens_[kPad] != kPadToken ||
      tokens_[kUnknown] != kUnknownToken)
    throw Error(ErrorCode::invalid_argument,
                "vocabulary must start with the reserved <pad>, <unk> entries");
  index_.reserve(tokens_.size());
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    if (!index_.emplace(tokens_[i], i).second)
      throw Error(ErrorCode::invalid_argument,
                  fmt::format("duplicate vocabulary token '{}'", tokens_[i]));
  }
}

Vocabulary Vocabulary::build(std::span<const std::vector<std::string>> documents,
                             std::size_t min_frequency, std::size_t max_size) {
  std::map<std::string, std::size_t> freq;
  for (const auto& doc : documents) {
    for (const auto& tok : doc) ++freq[tok];
  }
  std::vector<std::pair<std::string, std::size_t>> kept;
  for (auto& [tok, n] : freq) {
    if (n >= min_frequency && tok != kPadToken && tok != kUnknownToken)
      kept.emplace_back(tok, n);
  }
  std::stable_sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    return a.second > b.second;
  });
  std::vector<std::string> tokens{std::string(kPadToken),
                                  std::string(kUnknownToken)};
  for (auto& [tok, n] : kept) {
    if (tokens.size() >= max_size) break;
    tokens.push_back(tok);
  }
  return Vocabulary(std::move(tokens));
}

std::size_t Vocabulary::index_of(std::string_view token) const {
  const auto it = index_.find(std::string(token));
  return it == index_.end() ? kUnknown : it->second;
}

EncodedSequence encode(std::span<const std::string> tokens,
                       const Vocabulary& vocab, std::size_t max_length) {
  EncodedSequence seq;
  const std::size_t n = std::min(tokens.size(), max_length);
  seq.indices.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    seq.indices.push_back(vocab.index_of(tokens[i]));
  return seq;
}

std::vector<std::string> decode(const EncodedSequence& seq,
                                const Vocabulary& vocab) {
  std::vector<std::string> out;
  out.reserve(seq.length());
  for (auto i : seq.indices) out.push_back(vocab.token(i));
  return out;
}

}  // namespace sendgate::authmodel
