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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sendgate {

// A parsed plain-text draft: header block, blank line, body.
struct Message {
  std::string sender;
  std::vector<std::string> recipients;
  std::string subject;
  std::optional<std::string> date;
  std::string body;
  std::size_t raw_size = 0;

  bool operator==(const Message&) const = default;
};

// local@domain with non-empty parts, a single '@', no whitespace and none of
// the RFC 5322 specials that would need quoting.
bool is_valid_address(std::string_view address);

// Throws Error(missing_header | malformed_header | malformed_address).
// Invalid UTF-8 is replaced, never rejected.
Message parse_message(std::string_view raw);

// Inverse of parse_message on the supported header subset.
std::string serialize_message(const Message& message);

struct TextSegmentation {
  std::vector<std::string> lines;
  std::vector<std::string> sentences;
  std::vector<std::string> paragraphs;
  std::vector<std::string> tokens;
};

// Total over any input. Lines split on LF; paragraphs on blank lines or a
// tab-led line; sentences end at . ! ? followed by whitespace or end of
// text; tokens are maximal non-whitespace runs.
TextSegmentation segment(std::string_view body);

std::vector<std::string> split_sentences(std::string_view text);
std::vector<std::string> split_tokens(std::string_view text);

}  // namespace sendgate
