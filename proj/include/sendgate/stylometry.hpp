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

#include <array>
#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sendgate/message.hpp"

namespace sendgate::stylometry {

inline constexpr std::size_t kFeatureCount = 97;
inline constexpr std::size_t kFunctionWordCount = 25;
inline constexpr std::size_t kContentWordCount = 13;
inline constexpr std::size_t kPunctuationCount = 8;

// Counted punctuation marks, in feature order.
inline constexpr std::array<char, kPunctuationCount> kPunctuation = {
    '.', ',', '?', '!', ';', '*', ':', '\''};

// Feature positions. Blocks: token-based [0, 38), syntactic [38, 71),
// structural [71, 84), content-specific [84, 97).
namespace index {
inline constexpr std::size_t char_count = 0;
inline constexpr std::size_t digit_ratio = 1;
inline constexpr std::size_t letter_ratio = 2;
inline constexpr std::size_t upper_ratio = 3;
inline constexpr std::size_t space_ratio = 4;
inline constexpr std::size_t tab_ratio = 5;
inline constexpr std::size_t alpha_first = 6;  // a..z
inline constexpr std::size_t token_count = 32;
inline constexpr std::size_t avg_sentence_len_chars = 33;
inline constexpr std::size_t avg_token_len = 34;
inline constexpr std::size_t word_char_ratio = 35;
inline constexpr std::size_t type_token_ratio = 36;
inline constexpr std::size_t vocabulary_richness = 37;
inline constexpr std::size_t function_word_first = 38;
inline constexpr std::size_t punctuation_first = 63;
inline constexpr std::size_t line_count = 71;
inline constexpr std::size_t sentence_count = 72;
inline constexpr std::size_t paragraph_count = 73;
inline constexpr std::size_t has_greeting = 74;
inline constexpr std::size_t has_tab_separator = 75;
inline constexpr std::size_t has_blank_line_separator = 76;
inline constexpr std::size_t has_any_separator = 77;
inline constexpr std::size_t avg_para_len_chars = 78;
inline constexpr std::size_t avg_para_len_words = 79;
inline constexpr std::size_t avg_para_len_sentences = 80;
inline constexpr std::size_t sig_has_email = 81;
inline constexpr std::size_t sig_has_phone = 82;
inline constexpr std::size_t sig_has_url = 83;
inline constexpr std::size_t content_word_first = 84;
}  // namespace index

enum class Category { token_based, syntactic, structural, content_specific };

std::string_view to_string(Category category);

struct FeatureInfo {
  std::string name;
  std::size_t index = 0;
  Category category = Category::token_based;
};

// Word lists the extractor counts against. All entries are lowercase.
struct Lexicon {
  std::vector<std::string> function_words;  // exactly 25
  std::vector<std::string> content_words;   // exactly 13
  std::vector<std::string> stopwords;
  std::vector<std::string> greetings;

  static const Lexicon& standard();

  // Throws Error(invalid_argument) if a list has the wrong length or
  // contains duplicates or non-lowercase entries.
  void validate() const;
};

// Reads one word per line; blank lines and '#' comments are skipped.
std::vector<std::string> load_word_list(const std::filesystem::path& path);

class StylometricVector {
 public:
  StylometricVector() { values_.fill(0.0); }

  double& operator[](std::size_t i) { return values_[i]; }
  double operator[](std::size_t i) const { return values_[i]; }
  std::span<const double, kFeatureCount> values() const { return values_; }
  static constexpr std::size_t size() { return kFeatureCount; }

  bool operator==(const StylometricVector&) const = default;

 private:
  std::array<double, kFeatureCount> values_;
};

struct LinguisticAttributes {
  double message_length = 0;
  double word_count = 0;
  double sentence_count = 0;
  double avg_word_length = 0;
  double stopword_count = 0;
  double question_count = 0;
  double exclamation_count = 0;
  double capitalized_word_count = 0;

  bool operator==(const LinguisticAttributes&) const = default;
};

// Lowercases and strips leading/trailing ASCII punctuation. A token made of
// punctuation only keeps its lowercased form so it still has a type.
std::string normalize_word(std::string_view token);

class FeatureExtractor {
 public:
  explicit FeatureExtractor(Lexicon lexicon = Lexicon::standard());

  // `seg` must come from segment(body). Zero denominators give 0.
  StylometricVector extract(const TextSegmentation& seg,
                            std::string_view body) const;
  StylometricVector extract(std::string_view body) const;

  LinguisticAttributes attributes(const TextSegmentation& seg,
                                  const StylometricVector& v) const;

  const Lexicon& lexicon() const { return lexicon_; }
  std::vector<FeatureInfo> manifest() const;

  // SHA-256 over the canonical manifest JSON. Stored models pin this value.
  std::string manifest_hash() const;

 private:
  Lexicon lexicon_;
};

StylometricVector extract_features(const TextSegmentation& seg,
                                   std::string_view body);
LinguisticAttributes extract_attributes(const TextSegmentation& seg,
                                        const StylometricVector& v);

// Per-feature z-score transform fitted on a reference set. Population
// standard deviation; columns with zero variance map to 0.
class Standardizer {
 public:
  Standardizer() = default;
  Standardizer(std::vector<double> mean, std::vector<double> stddev);

  static Standardizer fit(std::span<const StylometricVector> vectors);

  StylometricVector apply(const StylometricVector& v) const;

  const std::vector<double>& mean() const { return mean_; }
  const std::vector<double>& stddev() const { return stddev_; }

 private:
  std::vector<double> mean_;
  std::vector<double> stddev_;
};

struct StandardizedSet {
  std::vector<StylometricVector> vectors;
  Standardizer standardizer;
};

// Throws Error(invalid_argument) on an empty list.
StandardizedSet standardize(std::span<const StylometricVector> vectors);

}  // namespace sendgate::stylometry
