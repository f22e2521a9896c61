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

#include "support/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace oracle {
namespace {

using sendgate::authmodel::kGates;
using sendgate::authmodel::ModelParams;

bool ws(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\v' || c == '\f' || c == '\r';
}
bool ascii(char c) { return static_cast<unsigned char>(c) < 0x80; }
bool digit(char c) { return c >= '0' && c <= '9'; }
bool upper(char c) { return c >= 'A' && c <= 'Z'; }
bool lower(char c) { return c >= 'a' && c <= 'z'; }
bool letter(char c) { return upper(c) || lower(c); }
bool alnum(char c) { return letter(c) || digit(c); }
char fold(char c) { return upper(c) ? static_cast<char>(c + 32) : c; }

std::string folded(std::string_view s) {
  std::string out;
  for (char c : s) out += fold(c);
  return out;
}

double cps(std::string_view s) {
  double n = 0;
  for (char c : s) {
    if ((static_cast<unsigned char>(c) & 0xC0) != 0x80) n += 1;
  }
  return n;
}

double div0(double a, double b) { return b == 0 ? 0 : a / b; }

std::string trimmed(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && ws(s[b])) ++b;
  while (e > b && ws(s[e - 1])) --e;
  return s.substr(b, e - b);
}

bool blank(const std::string& line) {
  for (char c : line) {
    if (!ws(c)) return false;
  }
  return true;
}

std::vector<std::string> lines_of(std::string_view body) {
  std::vector<std::string> out;
  if (body.empty()) return out;
  std::string cur;
  for (char c : body) {
    if (c == '\n') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::vector<std::string> tokens_of(std::string_view s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (ws(c)) {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

std::vector<std::string> sentences_of(std::string_view s) {
  std::vector<std::string> out;
  std::string cur;
  for (std::size_t i = 0; i < s.size(); ++i) {
    cur += s[i];
    const bool term = s[i] == '.' || s[i] == '!' || s[i] == '?';
    if (term && (i + 1 == s.size() || ws(s[i + 1]))) {
      const std::string t = trimmed(cur);
      if (!t.empty()) out.push_back(t);
      cur.clear();
    }
  }
  const std::string t = trimmed(cur);
  if (!t.empty()) out.push_back(t);
  return out;
}

std::vector<std::string> paragraphs_of(const std::vector<std::string>& lines) {
  std::vector<std::string> out;
  std::string cur;
  bool open = false;
  for (const auto& line : lines) {
    if (blank(line)) {
      if (open) out.push_back(cur);
      open = false;
      cur.clear();
      continue;
    }
    if (open && line[0] == '\t') {
      out.push_back(cur);
      cur = line;
      continue;
    }
    cur = open ? cur + "\n" + line : line;
    open = true;
  }
  if (open) out.push_back(cur);
  return out;
}

std::string normalized(const std::string& token) {
  std::size_t b = 0, e = token.size();
  while (b < e && ascii(token[b]) && !alnum(token[b])) ++b;
  while (e > b && ascii(token[e - 1]) && !alnum(token[e - 1])) --e;
  return b == e ? folded(token) : folded(token.substr(b, e - b));
}

double count_word(const std::vector<std::string>& tokens, const std::string& word) {
  double n = 0;
  for (const auto& t : tokens) {
    if (normalized(t) == word) n += 1;
  }
  return n;
}

const std::vector<std::string> kFunctionWords = {
    "the", "of", "and", "a", "to", "in", "is", "it", "that", "for", "was", "on", "are",
    "as", "with", "his", "they", "at", "be", "this", "have", "from", "or", "had", "by"};
const std::vector<std::string> kContentWords = {
    "agreement", "team", "section", "good", "parties", "once", "time",
    "pick", "draft", "notice", "questions", "contracts", "day"};
const std::vector<std::string> kGreetings = {
    "hi", "hello", "dear", "hey", "good morning", "good afternoon", "good evening"};
const std::string kPunct = ".,?!;*:'";

bool greeting_start(const std::string& para) {
  for (const auto& g : kGreetings) {
    if (para.size() < g.size()) continue;
    if (folded(para.substr(0, g.size())) != g) continue;
    if (para.size() == g.size() || !letter(para[g.size()])) return true;
  }
  return false;
}

bool phone_in(const std::string& s) {
  const std::string allowed = "0123456789 -.()+";
  int run_digits = 0;
  for (char c : s) {
    if (allowed.find(c) == std::string::npos) {
      run_digits = 0;
    } else if (digit(c)) {
      if (++run_digits >= 7) return true;
    }
  }
  return false;
}

bool url_token(const std::string& tok) {
  std::size_t b = 0;
  while (b < tok.size() && ascii(tok[b]) && !alnum(tok[b])) ++b;
  const std::string s = folded(tok.substr(b));
  return s.rfind("http://", 0) == 0 || s.rfind("https://", 0) == 0 || s.rfind("www.", 0) == 0;
}

bool email_token(const std::string& tok) {
  bool seen_at = false;
  for (char c : tok) {
    if (c == '@') seen_at = true;
    if (c == '.' && seen_at) return true;
  }
  return false;
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

template <typename T>
const T& pick(std::mt19937_64& rng, const std::vector<T>& v) {
  return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)];
}

}  // namespace

SegmentCounts scan_segments(std::string_view body) {
  SegmentCounts c;
  bool in_token = false;
  bool sentence_content = false;
  bool line_blank = true;
  bool line_tab_led = false;
  bool para_open = false;
  std::size_t line_pos = 0;

  auto end_line = [&] {
    if (line_blank) {
      if (para_open) ++c.paragraphs;
      para_open = false;
    } else {
      if (para_open && line_tab_led) ++c.paragraphs;
      para_open = true;
    }
    line_blank = true;
    line_tab_led = false;
    line_pos = 0;
  };

  for (std::size_t i = 0; i < body.size(); ++i) {
    const char ch = body[i];
    if (!ws(ch)) {
      if (!in_token) ++c.tokens;
      in_token = true;
      sentence_content = true;
      line_blank = false;
    } else {
      in_token = false;
    }
    if ((ch == '.' || ch == '!' || ch == '?') && (i + 1 == body.size() || ws(body[i + 1]))) {
      ++c.sentences;
      sentence_content = false;
    }
    if (ch == '\n') {
      ++c.lines;
      end_line();
    } else {
      if (line_pos == 0 && ch == '\t') line_tab_led = true;
      ++line_pos;
    }
  }
  if (!body.empty()) {
    ++c.lines;
    end_line();
  }
  if (para_open) ++c.paragraphs;
  if (sentence_content) ++c.sentences;
  return c;
}

std::array<double, sendgate::stylometry::kFeatureCount> features(std::string_view body) {
  std::array<double, sendgate::stylometry::kFeatureCount> f{};
  const double n = cps(body);
  const auto lines = lines_of(body);
  const auto paras = paragraphs_of(lines);
  const auto tokens = tokens_of(body);
  const auto sentences = sentences_of(body);
  const double t = static_cast<double>(tokens.size());

  double digits = 0, letters = 0, uppers = 0, spaces = 0, tabs = 0;
  for (char c : body) {
    digits += digit(c);
    letters += letter(c);
    uppers += upper(c);
    spaces += c == ' ';
    tabs += c == '\t';
  }
  f[0] = n;
  f[1] = div0(digits, n);
  f[2] = div0(letters, n);
  f[3] = div0(uppers, n);
  f[4] = div0(spaces, n);
  f[5] = div0(tabs, n);
  for (int k = 0; k < 26; ++k) {
    double count = 0;
    for (char c : body) count += fold(c) == 'a' + k;
    f[6 + k] = count;
  }
  f[32] = t;
  double sentence_chars = 0;
  for (const auto& s : sentences) sentence_chars += cps(s);
  f[33] = div0(sentence_chars, static_cast<double>(sentences.size()));
  double token_chars = 0;
  for (const auto& tok : tokens) token_chars += cps(tok);
  f[34] = div0(token_chars, t);
  f[35] = div0(token_chars, n);
  std::set<std::string> distinct;
  double hapax = 0;
  for (const auto& tok : tokens) distinct.insert(normalized(tok));
  for (const auto& w : distinct) hapax += count_word(tokens, w) == 1;
  f[36] = div0(static_cast<double>(distinct.size()), t);
  f[37] = div0(hapax, t);

  for (std::size_t k = 0; k < 25; ++k) f[38 + k] = count_word(tokens, kFunctionWords[k]);
  for (std::size_t k = 0; k < 8; ++k) {
    double count = 0;
    for (char c : body) count += c == kPunct[k];
    f[63 + k] = count;
  }

  f[71] = static_cast<double>(lines.size());
  f[72] = static_cast<double>(sentences.size());
  f[73] = static_cast<double>(paras.size());
  f[74] = !paras.empty() && greeting_start(paras.front());

  bool seen_text = false;
  for (const auto& line : lines) {
    if (!blank(line) && line[0] == '\t' && seen_text) f[75] = 1;
    if (!blank(line)) seen_text = true;
  }
  std::ptrdiff_t first = -1, last = -1;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (blank(lines[i])) continue;
    if (first < 0) first = static_cast<std::ptrdiff_t>(i);
    last = static_cast<std::ptrdiff_t>(i);
  }
  for (std::ptrdiff_t i = first + 1; first >= 0 && i < last; ++i) {
    if (blank(lines[static_cast<std::size_t>(i)])) f[76] = 1;
  }
  f[77] = (f[75] == 1 || f[76] == 1) ? 1 : 0;

  double pc = 0, pw = 0, ps = 0;
  for (const auto& p : paras) {
    pc += cps(p);
    pw += static_cast<double>(tokens_of(p).size());
    ps += static_cast<double>(sentences_of(p).size());
  }
  const double np = static_cast<double>(paras.size());
  f[78] = div0(pc, np);
  f[79] = div0(pw, np);
  f[80] = div0(ps, np);

  if (!paras.empty()) {
    for (const auto& tok : tokens_of(paras.back())) {
      if (email_token(tok)) f[81] = 1;
      if (url_token(tok)) f[83] = 1;
    }
    f[82] = phone_in(paras.back());
  }
  for (std::size_t k = 0; k < 13; ++k) f[84 + k] = count_word(tokens, kContentWords[k]);
  return f;
}

std::size_t stopword_count(std::string_view body) {
  std::vector<std::string> stop = kFunctionWords;
  for (const char* w : {"i", "you", "we", "he", "she", "not", "but", "so", "if", "an"})
    stop.emplace_back(w);
  std::size_t n = 0;
  for (const auto& tok : tokens_of(body)) {
    if (std::find(stop.begin(), stop.end(), normalized(tok)) != stop.end()) ++n;
  }
  return n;
}

std::size_t edit_distance(const std::string& a, const std::string& b) {
  std::vector<std::vector<std::size_t>> d(a.size() + 1, std::vector<std::size_t>(b.size() + 1));
  for (std::size_t i = 0; i <= a.size(); ++i) d[i][0] = i;
  for (std::size_t j = 0; j <= b.size(); ++j) d[0][j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      std::size_t best = d[i - 1][j - 1] + (a[i - 1] != b[j - 1]);
      best = std::min(best, d[i - 1][j] + 1);
      best = std::min(best, d[i][j - 1] + 1);
      d[i][j] = best;
    }
  }
  return d[a.size()][b.size()];
}

std::string skeleton(const std::string& address) {
  const std::string lowered = folded(address);
  const std::size_t at = lowered.find('@');
  std::string s;
  for (std::size_t i = 0; i < at; ++i) {
    if (lowered[i] != '.') s += lowered[i];
  }
  s += lowered.substr(at);
  std::string out;
  for (std::size_t i = 0; i < s.size();) {
    const std::string two = s.substr(i, 2);
    if (two == "rn") {
      out += 'm';
      i += 2;
    } else if (two == "vv") {
      out += 'w';
      i += 2;
    } else {
      switch (s[i]) {
        case '0': out += 'o'; break;
        case '1': out += 'l'; break;
        case '3': out += 'e'; break;
        case '5': out += 's'; break;
        default: out += s[i];
      }
      ++i;
    }
  }
  return out;
}

std::array<double, 2> lstm_logits(const sendgate::authmodel::EncodedSequence& seq,
                                  const sendgate::stylometry::StylometricVector& styl,
                                  const ModelParams& p) {
  const std::size_t H = p.hidden_size;
  std::vector<double> h(H, 0.0), c(H, 0.0);
  for (std::size_t idx : seq.indices) {
    std::vector<std::vector<double>> pre(kGates, std::vector<double>(H, 0.0));
    for (std::size_t k = 0; k < kGates; ++k) {
      for (std::size_t r = 0; r < H; ++r) {
        double s = p.b[k][r];
        for (std::size_t j = 0; j < sendgate::authmodel::kEmbedDim; ++j)
          s += p.W[k](r, j) * p.embedding(idx, j);
        for (std::size_t j = 0; j < H; ++j) s += p.U[k](r, j) * h[j];
        pre[k][r] = s;
      }
    }
    for (std::size_t r = 0; r < H; ++r) {
      const double in = sigmoid(pre[0][r]);
      const double forget = sigmoid(pre[1][r]);
      const double out = sigmoid(pre[2][r]);
      const double cand = std::tanh(pre[3][r]);
      c[r] = forget * c[r] + in * cand;
      h[r] = out * std::tanh(c[r]);
    }
  }
  std::array<double, 2> z{};
  for (std::size_t k = 0; k < 2; ++k) {
    z[k] = p.b_out[k];
    for (std::size_t j = 0; j < H; ++j) z[k] += h[j] * p.W_h(j, k);
    for (std::size_t j = 0; j < sendgate::stylometry::kFeatureCount; ++j)
      z[k] += styl[j] * p.W_h(H + j, k);
  }
  return z;
}

double lstm_loss(const sendgate::authmodel::EncodedSequence& seq,
                 const sendgate::stylometry::StylometricVector& styl,
                 sendgate::authmodel::Label label, const ModelParams& p) {
  const auto z = lstm_logits(seq, styl, p);
  const double y = z[static_cast<std::size_t>(label)];
  return std::log(std::exp(z[0] - y) + std::exp(z[1] - y));
}

std::string random_body(std::mt19937_64& rng, bool ascii_only) {
  static const std::vector<std::string> kExtra = {
      "I", "you", "we", "he", "she", "not", "but", "so", "if", "an", "The", "AGREEMENT",
      "Team", "invoice", "payment", "Hiya", "OK", "x", "...", "!!", "?", "-", "'quoted'",
      "it's", "(see", "below)", "a@b", "bob@corp.example", "www.example.com", "https://x.io/a",
      "2026", "555-0142", "12", "*note*", "e.g.", "v2.0", "re:", "Q3;"};
  static const std::vector<std::string> kUnicode = {"café", "naïve", "—", "€5", "über",
                                                    "日本"};
  static const std::vector<std::string> kPrefix = {"", "", "", "\"", "(", "'", "*"};
  static const std::vector<std::string> kSuffix = {"", "",  "",  "",  ".", ",", "?",
                                                   "!", ";", ":", "'", ".", "...", "?!"};
  static const std::vector<std::string> kSeparators = {"\n\n", "\n\n\n", "\n\t", "\n \n",
                                                       "\n\t\n", "\n"};
  static const std::vector<std::string> kGaps = {" ", " ", " ", " ", "  ", "\t", " \t"};
  static const std::vector<std::string> kOpeners = {
      "Hi team,", "Dear Bob,", "Good morning all.", "hello", "Hey!", "Hiya folks",
      "GOOD EVENING,", "Good day,", "Dearest", "Thanks,"};
  static const std::vector<std::string> kSignatures = {
      "Alice Morgan\nalice@corp.example", "Call +1 (555) 014-2231", "See www.corp.example",
      "-- \nA. Morgan | https://corp.example", "Ph: 12 34", "tel 555.867.5309!", "Regards"};

  std::uniform_int_distribution<int> die(0, 99);
  std::vector<std::string> words;
  for (const auto& w : kFunctionWords) words.push_back(w);
  for (const auto& w : kContentWords) words.push_back(w);
  for (const auto& w : kExtra) words.push_back(w);
  if (!ascii_only) {
    for (const auto& w : kUnicode) words.push_back(w);
  }

  const int roll = die(rng);
  if (roll < 3) return "";
  if (roll < 5) return pick(rng, kGaps) + "\n" + pick(rng, kGaps);

  std::string body;
  if (die(rng) < 40) body += pick(rng, kOpeners) + pick(rng, kSeparators);
  const int paragraphs = std::uniform_int_distribution<int>(1, 4)(rng);
  for (int p = 0; p < paragraphs; ++p) {
    if (p > 0) body += pick(rng, kSeparators);
    const int lines = std::uniform_int_distribution<int>(1, 3)(rng);
    for (int l = 0; l < lines; ++l) {
      if (l > 0) body += "\n";
      const int count = std::uniform_int_distribution<int>(1, 12)(rng);
      for (int w = 0; w < count; ++w) {
        if (w > 0) body += pick(rng, kGaps);
        std::string word = pick(rng, words);
        if (die(rng) < 15 && !word.empty() && lower(word[0])) word[0] = static_cast<char>(word[0] - 32);
        body += pick(rng, kPrefix) + word + pick(rng, kSuffix);
      }
    }
  }
  if (die(rng) < 40) body += pick(rng, kSeparators) + pick(rng, kSignatures);
  if (die(rng) < 10) body += "\n";
  if (die(rng) < 5) body += " ";
  return body;
}

std::string random_address(std::mt19937_64& rng) {
  static const std::vector<std::string> kPieces = {"a", "b", "e", "g", "i", "l", "m", "n",
                                                   "o", "r", "s", "v", "w", "0", "1", "3",
                                                   "5", ".", "rn", "vv", "A", "M"};
  static const std::vector<std::string> kDomains = {"gmail.com", "gmai1.com", "corp.example",
                                                    "rnail.com", "vvork.org", "EXAMPLE.com",
                                                    "examp1e.com", "b.c"};
  std::string local = pick(rng, std::vector<std::string>{"a", "m", "r", "v", "s", "G"});
  const int n = std::uniform_int_distribution<int>(0, 8)(rng);
  for (int i = 0; i < n; ++i) local += pick(rng, kPieces);
  return local + "@" + pick(rng, kDomains);
}

}  // namespace oracle
