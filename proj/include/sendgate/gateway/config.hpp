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

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "sendgate/identity.hpp"
#include "sendgate/stylometry.hpp"

namespace sendgate::gateway {

namespace fs = std::filesystem;

struct Config {
  std::string host = "127.0.0.1";
  int port = 8080;
  fs::path store_root = "sendgate-data";
  std::size_t threads = 8;
  double styl_threshold = 0.5;
  std::size_t lookalike_max_distance = 1;
  std::chrono::seconds session_idle_timeout = std::chrono::minutes(15);

  // Optional overrides of the built-in word lists and homoglyph map.
  std::optional<fs::path> function_words;
  std::optional<fs::path> content_words;
  std::optional<fs::path> stopwords;
  std::optional<fs::path> greetings;
  std::optional<fs::path> homoglyphs;

  std::map<std::string, std::string> tokens;            // user -> bearer token
  std::map<std::string, std::string> recovery_secrets;  // user -> secret

  stylometry::Lexicon lexicon() const;
  identity::HomoglyphTable homoglyph_table() const;
};

// TOML-style subset: `key = value` lines, '#' comments, double-quoted or
// bare values, and [tokens] / [recovery_secrets] tables of user = value.
// Throws Error(invalid_argument) naming the offending line.
Config parse_config(std::string_view text, Config base = {});

using Environment = std::map<std::string, std::string>;

// Applies SENDGATE_<KEY> overrides (SENDGATE_PORT, SENDGATE_STORE_ROOT, ...)
// plus SENDGATE_TOKEN_<user> and SENDGATE_RECOVERY_SECRET_<user>.
void apply_env(Config& config, const Environment& env);

// Snapshot of the process environment.
Environment process_env();

// Defaults, then the file if given, then the environment.
Config load_config(const std::optional<fs::path>& path, const Environment& env = process_env());

}  // namespace sendgate::gateway
