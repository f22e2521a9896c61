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

#include "sendgate/stylometry.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <unordered_map>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "sendgate/crypto.hpp"
#include "sendgate/error.hpp"
#include "sendgate/text.hpp"

namespace sendgate::stylometry {
namespace {

using text::code_points;

constexpr std::array<std::string_view, kPunctuationCount> kPunctuationNames = {
    "period", "comma", "question", "exclamation",
    "semicolon", "asterisk", "colon", "apostrophe"};

double ratio(double num, double den) { return den == 0.0 ? 0.0 : num / den; }

bool starts_with_word(std::string_view haystack, std::string_view word) {
  if (haystack.size() < word.size()) return false;
  for (std::size_t i = 0; i < word.size(); ++i) {
    if (text::ascii_lower(haystack[i]) != word[i]) return false;
  }
  return haystack.size() == word.size() ||
         !text::is_ascii_alpha(haystack[word.size()]);
}

std::string_view strip_leading_punct(std::string_view token) {
  while (!token.empty() && static_cast<unsigned char>(token.front()) < 0x80 &&
         !text::is_ascii_alnum(token.front()))
    token.remove_prefix(1);
  return token;
}

bool looks_like_email(std::string_view token) {
  const auto at = token.find('@');
  return at != std::string_view::npos &&
         token.find('.', at + 1) != std::string_view::npos;
}

bool looks_like_url(std::string_view token) {
  const std::string lower = text::to_lower(strip_leading_punct(token));
  return lower.starts_with("http://") || lower.starts_with("https://") ||
         lower.starts_with("www.");
}

bool has_phone_number(std::string_view paragraph) {
  auto allowed = [](char c) {
    return text::is_ascii_digit(c) || c == ' ' || c == '-' || c == '.' ||
           c == '(' || c == ')' || c == '+';
  };
  int digits = 0;
  for (char c : paragraph) {
    if (!allowed(c)) {
      digits = 0;
      continue;
    }
    if (text::is_ascii_digit(c) && ++digits >= 7) return true;
  }
  return false;
}

void require_unique_lowercase(const std::vector<std::string>& words,
                              std::string_view what) {
  std::set<std::string> seen;
  for (const auto& w : words) {
    if (w.empty() || w != text::to_lower(w))
      throw Error(ErrorCode::invalid_argument,
                  fmt::format("{} entry '{}' must be non-empty lowercase",
                              what, w));
    if (!seen.insert(w).second)
      throw Error(ErrorCode::invalid_argument,
                  fmt::format("duplicate {} entry '{}'", what, w));
  }
}

}  // namespace

std::string_view to_string(Category category) {
  switch (category) {
    case Category::token_based: return "token_based";
    case Category::syntactic: return "syntactic";
    case Category::structural: return "structural";
    case Category::content_specific: return "content_specific";
  }
  return "unknown";
}

const Lexicon& Lexicon::standard() {
  static const Lexicon kStandard = [] {
    Lexicon l;
    l.function_words = {"the", "of",   "and",  "a",    "to",   "in",  "is",
                        "it",  "that", "for",  "was",  "on",   "are", "as",
                        "with", "his", "they", "at",   "be",   "this",
                        "have", "from", "or",  "had",  "by"};
    l.content_words = {"agreement", "team",  "section",   "good",     "parties",
                       "once",      "time",  "pick",      "draft",    "notice",
                       "questions", "contracts", "day"};
    l.stopwords = l.function_words;
    for (const char* w : {"i", "you", "we", "he", "she", "not", "but", "so",
                          "if", "an"})
      l.stopwords.emplace_back(w);
    l.greetings = {"hi", "hello", "dear", "hey", "good morning",
                   "good afternoon", "good evening"};
    return l;
  }();
  return kStandard;
}

void Lexicon::validate() const {
  if (function_words.size() != kFunctionWordCount)
    throw Error(ErrorCode::invalid_argument,
                fmt::format("function word list needs {} entries, got {}",
                            kFunctionWordCount, function_words.size()));
  if (content_words.size() != kContentWordCount)
    throw Error(ErrorCode::invalid_argument,
                fmt::format("content word list needs {} entries, got {}",
                            kContentWordCount, content_words.size()));
  require_unique_lowercase(function_words, "function word");
  require_unique_lowercase(content_words, "content word");
  require_unique_lowercase(stopwords, "stopword");
  require_unique_lowercase(greetings, "greeting");
}

std::vector<std::string> load_word_list(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in)
    throw Error(ErrorCode::io_failure,
                fmt::format("cannot read word list {}", path.string()));
  std::vector<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    const auto t = text::trim(line);
    if (t.empty() || t.front() == '#') continue;
    words.push_back(text::to_lower(t));
  }
  return words;
}

std::string normalize_word(std::string_view token) {
  std::string_view core = strip_leading_punct(token);
  while (!core.empty() && static_cast<unsigned char>(core.back()) < 0x80 &&
         !text::is_ascii_alnum(core.back()))
    core.remove_suffix(1);
  return text::to_lower(core.empty() ? token : core);
}

FeatureExtractor::FeatureExtractor(Lexicon lexicon)
    : lexicon_(std::move(lexicon)) {
  lexicon_.validate();
}

StylometricVector FeatureExtractor::extract(std::string_view body) const {
  return extract(segment(body), body);
}

StylometricVector FeatureExtractor::extract(const TextSegmentation& seg,
                                            std::string_view body) const {
  StylometricVector v;
  const double n = static_cast<double>(code_points(body));

  // Character-level counts.
  double digits = 0, letters = 0, upper = 0, spaces = 0, tabs = 0;
  std::array<double, 26> alpha{};
  std::array<double, kPunctuationCount> punct{};
  for (char c : body) {
    if (text::is_ascii_digit(c)) ++digits;
    if (text::is_ascii_alpha(c)) {
      ++letters;
      ++alpha[static_cast<std::size_t>(text::ascii_lower(c) - 'a')];
    }
    if (text::is_ascii_upper(c)) ++upper;
    if (c == ' ') ++spaces;
    if (c == '\t') ++tabs;
    for (std::size_t k = 0; k < kPunctuationCount; ++k) {
      if (c == kPunctuation[k]) ++punct[k];
    }
  }
  v[index::char_count] = n;
  v[index::digit_ratio] = ratio(digits, n);
  v[index::letter_ratio] = ratio(letters, n);
  v[index::upper_ratio] = ratio(upper, n);
  v[index::space_ratio] = ratio(spaces, n);
  v[index::tab_ratio] = ratio(tabs, n);
  for (std::size_t k = 0; k < 26; ++k) v[index::alpha_first + k] = alpha[k];

  // Token-level counts.
  const double t = static_cast<double>(seg.tokens.size());
  double token_chars = 0;
  std::unordered_map<std::string, int> types;
  for (const auto& tok : seg.tokens) {
    token_chars += static_cast<double>(code_points(tok));
    ++types[normalize_word(tok)];
  }
  double hapax = 0;
  for (const auto& [word, count] : types) {
    if (count == 1) ++hapax;
  }
  double sentence_chars = 0;
  for (const auto& s : seg.sentences)
    sentence_chars += static_cast<double>(code_points(s));

  v[index::token_count] = t;
  v[index::avg_sentence_len_chars] =
      ratio(sentence_chars, static_cast<double>(seg.sentences.size()));
  v[index::avg_token_len] = ratio(token_chars, t);
  v[index::word_char_ratio] = ratio(token_chars, n);
  v[index::type_token_ratio] = ratio(static_cast<double>(types.size()), t);
  v[index::vocabulary_richness] = ratio(hapax, t);

  auto occurrences = [&](const std::string& word) {
    const auto it = types.find(word);
    return it == types.end() ? 0.0 : static_cast<double>(it->second);
  };
  for (std::size_t k = 0; k < kFunctionWordCount; ++k)
    v[index::function_word_first + k] =
        occurrences(lexicon_.function_words[k]);
  for (std::size_t k = 0; k < kPunctuationCount; ++k)
    v[index::punctuation_first + k] = punct[k];
  for (std::size_t k = 0; k < kContentWordCount; ++k)
    v[index::content_word_first + k] = occurrences(lexicon_.content_words[k]);

  // Structure.
  const double paragraphs = static_cast<double>(seg.paragraphs.size());
  v[index::line_count] = static_cast<double>(seg.lines.size());
  v[index::sentence_count] = static_cast<double>(seg.sentences.size());
  v[index::paragraph_count] = paragraphs;

  if (!seg.paragraphs.empty()) {
    for (const auto& g : lexicon_.greetings) {
      if (starts_with_word(seg.paragraphs.front(), g)) {
        v[index::has_greeting] = 1;
        break;
      }
    }
  }
  for (std::size_t p = 1; p < seg.paragraphs.size(); ++p) {
    if (seg.paragraphs[p].front() == '\t') v[index::has_tab_separator] = 1;
  }
  bool seen_text = false;
  bool pending_blank = false;
  for (const auto& line : seg.lines) {
    if (text::trim(line).empty()) {
      pending_blank = seen_text;
    } else {
      if (pending_blank) v[index::has_blank_line_separator] = 1;
      seen_text = true;
      pending_blank = false;
    }
  }
  v[index::has_any_separator] =
      (v[index::has_tab_separator] != 0 || v[index::has_blank_line_separator] != 0)
          ? 1
          : 0;

  double para_chars = 0, para_words = 0, para_sentences = 0;
  for (const auto& p : seg.paragraphs) {
    para_chars += static_cast<double>(code_points(p));
    para_words += static_cast<double>(split_tokens(p).size());
    para_sentences += static_cast<double>(split_sentences(p).size());
  }
  v[index::avg_para_len_chars] = ratio(para_chars, paragraphs);
  v[index::avg_para_len_words] = ratio(para_words, paragraphs);
  v[index::avg_para_len_sentences] = ratio(para_sentences, paragraphs);

  if (!seg.paragraphs.empty()) {
    const auto& last = seg.paragraphs.back();
    for (const auto& tok : split_tokens(last)) {
      if (looks_like_email(tok)) v[index::sig_has_email] = 1;
      if (looks_like_url(tok)) v[index::sig_has_url] = 1;
    }
    if (has_phone_number(last)) v[index::sig_has_phone] = 1;
  }
  return v;
}

LinguisticAttributes FeatureExtractor::attributes(
    const TextSegmentation& seg, const StylometricVector& v) const {
  LinguisticAttributes a;
  a.message_length = v[index::char_count];
  a.word_count = v[index::token_count];
  a.sentence_count = v[index::sentence_count];
  a.avg_word_length = v[index::avg_token_len];
  a.question_count = v[index::punctuation_first + 2];
  a.exclamation_count = v[index::punctuation_first + 3];

  const std::set<std::string_view> stop(lexicon_.stopwords.begin(),
                                        lexicon_.stopwords.end());
  for (const auto& tok : seg.tokens) {
    if (stop.contains(normalize_word(tok))) ++a.stopword_count;
    const auto core = strip_leading_punct(tok);
    if (!core.empty() && text::is_ascii_upper(core.front()))
      ++a.capitalized_word_count;
  }
  return a;
}

std::vector<FeatureInfo> FeatureExtractor::manifest() const {
  std::vector<FeatureInfo> m;
  m.reserve(kFeatureCount);
  auto add = [&](std::string name, Category c) {
    m.push_back({std::move(name), m.size(), c});
  };
  const auto tok = Category::token_based;
  add("char_count", tok);
  add("digit_ratio", tok);
  add("letter_ratio", tok);
  add("upper_ratio", tok);
  add("space_ratio", tok);
  add("tab_ratio", tok);
  for (char c = 'a'; c <= 'z'; ++c) add(fmt::format("alpha_{}", c), tok);
  add("token_count", tok);
  add("avg_sentence_len_chars", tok);
  add("avg_token_len", tok);
  add("word_char_ratio", tok);
  add("type_token_ratio", tok);
  add("vocabulary_richness", tok);
  for (const auto& w : lexicon_.function_words)
    add("fw_" + w, Category::syntactic);
  for (auto name : kPunctuationNames)
    add(fmt::format("punct_{}", name), Category::syntactic);
  const auto st = Category::structural;
  for (const char* name :
       {"line_count", "sentence_count", "paragraph_count", "has_greeting",
        "has_tab_separator", "has_blank_line_separator", "has_any_separator",
        "avg_para_len_chars", "avg_para_len_words", "avg_para_len_sentences",
        "sig_has_email", "sig_has_phone", "sig_has_url"})
    add(name, st);
  for (const auto& w : lexicon_.content_words)
    add("cw_" + w, Category::content_specific);
  return m;
}

std::string FeatureExtractor::manifest_hash() const {
  nlohmann::json doc = nlohmann::json::array();
  for (const auto& f : manifest())
    doc.push_back({{"index", f.index},
                   {"name", f.name},
                   {"category", to_string(f.category)}});
  return crypto::sha256_hex(doc.dump());
}

StylometricVector extract_features(const TextSegmentation& seg,
                                   std::string_view body) {
  static const FeatureExtractor kDefault;
  return kDefault.extract(seg, body);
}

LinguisticAttributes extract_attributes(const TextSegmentation& seg,
                                        const StylometricVector& v) {
  static const FeatureExtractor kDefault;
  return kDefault.attributes(seg, v);
}

Standardizer::Standardizer(std::vector<double> mean, std::vector<double> stddev)
    : mean_(std::move(mean)), stddev_(std::move(stddev)) {
  if (mean_.size() != kFeatureCount || stddev_.size() != kFeatureCount)
    throw Error(ErrorCode::shape_mismatch,
                "standardizer needs one mean and stddev per feature");
}

Standardizer Standardizer::fit(std::span<const StylometricVector> vectors) {
  if (vectors.empty())
    throw Error(ErrorCode::invalid_argument, "cannot standardize empty set");
  const double count = static_cast<double>(vectors.size());
  std::vector<double> mean(kFeatureCount, 0.0);
  std::vector<double> stddev(kFeatureCount, 0.0);
  for (std::size_t j = 0; j < kFeatureCount; ++j) {
    double sum = 0;
    for (const auto& v : vectors) sum += v[j];
    mean[j] = sum / count;
    double sq = 0;
    for (const auto& v : vectors) sq += (v[j] - mean[j]) * (v[j] - mean[j]);
    stddev[j] = std::sqrt(sq / count);
  }
  return Standardizer(std::move(mean), std::move(stddev));
}

StylometricVector Standardizer::apply(const StylometricVector& v) const {
  StylometricVector out;
  for (std::size_t j = 0; j < kFeatureCount; ++j) {
    // Near-constant columns map to 0.
    const double scale = std::max(1.0, std::abs(mean_[j]));
    out[j] = stddev_[j] <= 1e-12 * scale ? 0.0 : (v[j] - mean_[j]) / stddev_[j];
  }
  return out;
}

StandardizedSet standardize(std::span<const StylometricVector> vectors) {
  StandardizedSet out{{}, Standardizer::fit(vectors)};
  out.vectors.reserve(vectors.size());
  for (const auto& v : vectors) out.vectors.push_back(out.standardizer.apply(v));
  return out;
}

}  // namespace sendgate::stylometry
