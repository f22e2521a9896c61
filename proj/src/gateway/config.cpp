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

#include "sendgate/gateway/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "sendgate/error.hpp"
#include "sendgate/text.hpp"

extern char** environ;

namespace sendgate::gateway {
namespace {

[[noreturn]] void bad(std::size_t line, const std::string& what) {
  throw Error(ErrorCode::invalid_argument, fmt::format("config line {}: {}", line, what));
}

std::string unquote(std::string_view v, std::size_t line) {
  if (v.empty() || v.front() != '"') {
    // Bare value; a trailing comment ends it.
    const auto hash = v.find('#');
    return std::string(text::trim(v.substr(0, hash)));
  }
  std::string out;
  std::size_t i = 1;
  for (; i < v.size() && v[i] != '"'; ++i) {
    if (v[i] == '\\') {
      if (++i >= v.size()) break;
      switch (v[i]) {
        case 'n': out += '\n'; break;
        case 't': out += '\t'; break;
        case '"': out += '"'; break;
        case '\\': out += '\\'; break;
        default: bad(line, fmt::format("unknown escape \\{}", v[i]));
      }
    } else {
      out += v[i];
    }
  }
  if (i >= v.size()) bad(line, "unterminated string");
  const auto rest = text::trim(v.substr(i + 1));
  if (!rest.empty() && rest.front() != '#') bad(line, "trailing characters after string");
  return out;
}

template <typename T>
T parse_number(const std::string& v, std::size_t line, std::string_view key) {
  T out{};
  const auto* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end)
    bad(line, fmt::format("'{}' expects a number, got '{}'", key, v));
  return out;
}

void set_key(Config& c, std::string_view key, const std::string& v, std::size_t line) {
  if (key == "host") {
    c.host = v;
  } else if (key == "port") {
    c.port = parse_number<int>(v, line, key);
    if (c.port < 0 || c.port > 65535) bad(line, "port out of range");
  } else if (key == "store_root") {
    c.store_root = v;
  } else if (key == "threads") {
    c.threads = parse_number<std::size_t>(v, line, key);
    if (c.threads == 0) bad(line, "threads must be positive");
  } else if (key == "styl_threshold") {
    c.styl_threshold = parse_number<double>(v, line, key);
    if (!(c.styl_threshold >= 0.0 && c.styl_threshold <= 1.0))
      bad(line, "styl_threshold must lie in [0, 1]");
  } else if (key == "lookalike_max_distance") {
    c.lookalike_max_distance = parse_number<std::size_t>(v, line, key);
  } else if (key == "session_idle_minutes") {
    c.session_idle_timeout = std::chrono::minutes(parse_number<long>(v, line, key));
  } else if (key == "function_words") {
    c.function_words = v;
  } else if (key == "content_words") {
    c.content_words = v;
  } else if (key == "stopwords") {
    c.stopwords = v;
  } else if (key == "greetings") {
    c.greetings = v;
  } else if (key == "homoglyphs") {
    c.homoglyphs = v;
  } else {
    bad(line, fmt::format("unknown key '{}'", key));
  }
}

}  // namespace

stylometry::Lexicon Config::lexicon() const {
  stylometry::Lexicon lex = stylometry::Lexicon::standard();
  if (function_words) lex.function_words = stylometry::load_word_list(*function_words);
  if (content_words) lex.content_words = stylometry::load_word_list(*content_words);
  if (stopwords) lex.stopwords = stylometry::load_word_list(*stopwords);
  if (greetings) lex.greetings = stylometry::load_word_list(*greetings);
  lex.validate();
  return lex;
}

identity::HomoglyphTable Config::homoglyph_table() const {
  if (homoglyphs) return identity::HomoglyphTable::load(*homoglyphs);
  return identity::HomoglyphTable::standard();
}

Config parse_config(std::string_view text_in, Config c) {
  std::string section;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text_in)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = text::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    if (line.front() == '[') {
      if (line.back() != ']') bad(line_no, "unterminated table header");
      section = std::string(text::trim(line.substr(1, line.size() - 2)));
      if (section != "tokens" && section != "recovery_secrets")
        bad(line_no, fmt::format("unknown table [{}]", section));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) bad(line_no, "expected key = value");
    const auto key = text::trim(line.substr(0, eq));
    if (key.empty()) bad(line_no, "empty key");
    const std::string value = unquote(text::trim(line.substr(eq + 1)), line_no);
    if (section == "tokens") {
      c.tokens[std::string(key)] = value;
    } else if (section == "recovery_secrets") {
      c.recovery_secrets[std::string(key)] = value;
    } else {
      set_key(c, key, value, line_no);
    }
  }
  return c;
}

void apply_env(Config& c, const Environment& env) {
  static constexpr std::string_view kPrefix = "SENDGATE_";
  static constexpr std::string_view kToken = "SENDGATE_TOKEN_";
  static constexpr std::string_view kSecret = "SENDGATE_RECOVERY_SECRET_";
  for (const auto& [name, value] : env) {
    if (!name.starts_with(kPrefix)) continue;
    if (name.starts_with(kToken)) {
      c.tokens[name.substr(kToken.size())] = value;
    } else if (name.starts_with(kSecret)) {
      c.recovery_secrets[name.substr(kSecret.size())] = value;
    } else {
      try {
        set_key(c, text::to_lower(name.substr(kPrefix.size())), value, 0);
      } catch (const Error& e) {
        throw Error(ErrorCode::invalid_argument,
                    fmt::format("environment {}: {}", name, e.what()));
      }
    }
  }
}

Environment process_env() {
  Environment env;
  for (char** e = environ; e != nullptr && *e != nullptr; ++e) {
    const std::string_view kv(*e);
    const auto eq = kv.find('=');
    if (eq == std::string_view::npos) continue;
    env.emplace(std::string(kv.substr(0, eq)), std::string(kv.substr(eq + 1)));
  }
  return env;
}

Config load_config(const std::optional<fs::path>& path, const Environment& env) {
  Config c;
  if (path) {
    std::ifstream in(*path);
    if (!in)
      throw Error(ErrorCode::io_failure,
                  fmt::format("cannot read config '{}'", path->string()));
    std::stringstream buf;
    buf << in.rdbuf();
    c = parse_config(buf.str());
  }
  apply_env(c, env);
  return c;
}

}  // namespace sendgate::gateway
