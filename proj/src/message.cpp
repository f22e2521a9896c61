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

#include "sendgate/message.hpp"

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "sendgate/error.hpp"
#include "sendgate/text.hpp"

namespace sendgate {
namespace {

using text::is_ascii_space;
using text::trim;

bool is_special(char c) {
  switch (c) {
    case '<': case '>': case '(': case ')': case '[': case ']':
    case ',': case ';': case ':': case '"': case '\\':
      return true;
    default:
      return false;
  }
}

std::vector<std::string> split_lines(std::string_view s) {
  std::vector<std::string> out;
  if (s.empty()) return out;
  std::size_t start = 0;
  while (true) {
    const auto nl = s.find('\n', start);
    if (nl == std::string_view::npos) {
      out.emplace_back(s.substr(start));
      break;
    }
    out.emplace_back(s.substr(start, nl - start));
    start = nl + 1;
  }
  return out;
}

bool is_blank(std::string_view line) { return trim(line).empty(); }

}  // namespace

bool is_valid_address(std::string_view address) {
  const auto at = address.find('@');
  if (at == std::string_view::npos || at == 0 || at + 1 == address.size())
    return false;
  if (address.find('@', at + 1) != std::string_view::npos) return false;
  for (char c : address) {
    if (is_ascii_space(c) || is_special(c) ||
        static_cast<unsigned char>(c) < 0x20 || c == 0x7f)
      return false;
  }
  const auto domain = address.substr(at + 1);
  if (domain.front() == '.' || domain.back() == '.' ||
      domain.find("..") != std::string_view::npos)
    return false;
  return true;
}

Message parse_message(std::string_view raw) {
  const std::string normalized =
      text::normalize_newlines(text::decode_lossy(raw));
  std::string_view rest = normalized;

  Message msg;
  msg.raw_size = raw.size();

  struct Field {
    std::string name;
    std::string value;
  };
  std::vector<Field> fields;

  while (!rest.empty()) {
    const auto nl = rest.find('\n');
    const std::string_view line =
        nl == std::string_view::npos ? rest : rest.substr(0, nl);
    rest = nl == std::string_view::npos ? std::string_view{}
                                        : rest.substr(nl + 1);
    if (line.empty()) {
      msg.body = std::string(rest);
      break;
    }
    if (is_ascii_space(line.front())) {
      if (fields.empty())
        throw Error(ErrorCode::malformed_header,
                    "continuation line before any header");
      auto& value = fields.back().value;
      const auto folded = trim(line);
      if (!folded.empty()) {
        if (!value.empty()) value.push_back(' ');
        value.append(folded);
      }
      continue;
    }
    const auto colon = line.find(':');
    if (colon == std::string_view::npos || colon == 0)
      throw Error(ErrorCode::malformed_header,
                  fmt::format("header line without name: '{}'", line));
    const auto name = line.substr(0, colon);
    for (char c : name) {
      if (is_ascii_space(c))
        throw Error(ErrorCode::malformed_header,
                    fmt::format("bad header name: '{}'", name));
    }
    fields.push_back({text::to_lower(name),
                      std::string(trim(line.substr(colon + 1)))});
  }

  bool have_from = false;
  bool have_to = false;
  bool have_subject = false;
  for (const auto& f : fields) {
    if (f.name == "from" && !have_from) {
      have_from = true;
      msg.sender = f.value;
    } else if (f.name == "to") {
      have_to = true;
      std::string_view list = f.value;
      while (true) {
        const auto comma = list.find(',');
        const auto item = trim(list.substr(0, comma));
        if (!item.empty()) msg.recipients.emplace_back(item);
        if (comma == std::string_view::npos) break;
        list.remove_prefix(comma + 1);
      }
    } else if (f.name == "subject" && !have_subject) {
      have_subject = true;
      msg.subject = f.value;
    } else if (f.name == "date" && !msg.date) {
      msg.date = f.value;
    }
  }

  if (!have_from || msg.sender.empty())
    throw Error(ErrorCode::missing_header, "missing header: from");
  if (!have_to || msg.recipients.empty())
    throw Error(ErrorCode::missing_header, "missing header: to");
  if (!is_valid_address(msg.sender))
    throw Error(ErrorCode::malformed_address,
                fmt::format("malformed sender address '{}'", msg.sender));
  for (const auto& r : msg.recipients) {
    if (!is_valid_address(r))
      throw Error(ErrorCode::malformed_address,
                  fmt::format("malformed recipient address '{}'", r));
  }
  return msg;
}

std::string serialize_message(const Message& message) {
  std::string out = fmt::format("From: {}\nTo: {}\nSubject: {}\n",
                                message.sender,
                                fmt::join(message.recipients, ", "),
                                message.subject);
  if (message.date) out += fmt::format("Date: {}\n", *message.date);
  out += '\n';
  out += message.body;
  return out;
}

std::vector<std::string> split_tokens(std::string_view text) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_ascii_space(text[i])) ++i;
    const std::size_t start = i;
    while (i < text.size() && !is_ascii_space(text[i])) ++i;
    if (i > start) tokens.emplace_back(text.substr(start, i - start));
  }
  return tokens;
}

std::vector<std::string> split_sentences(std::string_view text) {
  std::vector<std::string> sentences;
  auto flush = [&](std::string_view piece) {
    const auto t = trim(piece);
    if (!t.empty()) sentences.emplace_back(t);
  };
  std::size_t start = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c != '.' && c != '!' && c != '?') continue;
    if (i + 1 == text.size() || is_ascii_space(text[i + 1])) {
      flush(text.substr(start, i + 1 - start));
      start = i + 1;
    }
  }
  if (start < text.size()) flush(text.substr(start));
  return sentences;
}

TextSegmentation segment(std::string_view body) {
  TextSegmentation seg;
  seg.lines = split_lines(body);
  seg.tokens = split_tokens(body);
  seg.sentences = split_sentences(body);

  std::string current;
  bool open = false;
  for (const auto& line : seg.lines) {
    if (is_blank(line)) {
      if (open) seg.paragraphs.push_back(std::move(current));
      current.clear();
      open = false;
      continue;
    }
    if (open && line.front() == '\t') {
      seg.paragraphs.push_back(std::move(current));
      current.clear();
      open = false;
    }
    if (open) current.push_back('\n');
    current += line;
    open = true;
  }
  if (open) seg.paragraphs.push_back(std::move(current));
  return seg;
}

}  // namespace sendgate
