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
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace sendgate::authmodel {

// Token index map. Index 0 is padding and index 1 stands for every token
// that was not kept at build time.
class Vocabulary {
 public:
  static constexpr std::size_t kPad = 0;
  static constexpr std::size_t kUnknown = 1;
  static constexpr std::string_view kPadToken = "<pad>";
  static constexpr std::string_view kUnknownToken = "<unk>";

  Vocabulary();

  // Tokens in index order; the first two must be the reserved entries.
  explicit Vocabulary(std::vector<std::string> tokens);

  // Keeps tokens seen at least `min_frequency` times, most frequent first
  // (ties by token), up to `max_size` entries including the reserved two.
  static Vocabulary build(std::span<const std::vector<std::string>> documents,
                          std::size_t min_frequency = 2,
                          std::size_t max_size = 20000);

  std::size_t index_of(std::string_view token) const;
  const std::string& token(std::size_t index) const { return tokens_.at(index); }
  std::size_t size() const { return tokens_.size(); }
  const std::vector<std::string>& tokens() const { return tokens_; }

  bool operator==(const Vocabulary& other) const { return tokens_ == other.tokens_; }

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, std::size_t> index_;
};

struct EncodedSequence {
  std::vector<std::size_t> indices;

  std::size_t length() const { return indices.size(); }
};

// Unknown tokens map to kUnknown; sequences are cut at `max_length` and
// never padded.
EncodedSequence encode(std::span<const std::string> tokens,
                       const Vocabulary& vocab, std::size_t max_length);

std::vector<std::string> decode(const EncodedSequence& seq,
                                const Vocabulary& vocab);

}  // namespace sendgate::authmodel
