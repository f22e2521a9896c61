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

#include <random>

#include "doctest.h"
#include "sendgate/error.hpp"
#include "sendgate/message.hpp"
#include "sendgate/text.hpp"
#include "support/oracle.hpp"

using namespace sendgate;

namespace {

ErrorCode parse_error(std::string_view raw) {
  try {
    parse_message(raw);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("parse_message accepted " << raw);
  return ErrorCode::invalid_argument;
}

}  // namespace

TEST_CASE("parse maps headers onto fields") {
  const auto m = parse_message("From: a@b.c\nTo: d@e.f\nSubject: Hi\n\nBody");
  CHECK(m.sender == "a@b.c");
  CHECK(m.recipients == std::vector<std::string>{"d@e.f"});
  CHECK(m.subject == "Hi");
  CHECK(m.body == "Body");
  CHECK(m.raw_size == 39);
}

TEST_CASE("missing and malformed headers") {
  CHECK(parse_error("To: d@e.f\n\nBody") == ErrorCode::missing_header);
  CHECK(parse_error("From: a@b.c\n\nBody") == ErrorCode::missing_header);
  CHECK(parse_error("From: a@b.c\nTo:\n\nBody") == ErrorCode::missing_header);
  CHECK(parse_error("From: ab.c\nTo: d@e.f\n\nx") == ErrorCode::malformed_address);
  CHECK(parse_error("From: a@b.c\nTo: d@e.f, @x\n\nx") == ErrorCode::malformed_address);
  CHECK(parse_error("From: a@b.c\nTo: d@\n\nx") == ErrorCode::malformed_address);
}

TEST_CASE("line endings are normalized") {
  const auto m = parse_message("From: a@b.c\r\nTo: d@e.f\r\nSubject: S\r\n\r\nL1\r\nL2");
  CHECK(m.body == "L1\nL2");
  CHECK(parse_message("From: a@b.c\rTo: d@e.f\r\rA\rB").body == "A\nB");
}

TEST_CASE("headers are case-insensitive and unknown ones are ignored") {
  const auto m = parse_message(
      "FROM: a@b.c\nto: d@e.f, g@h.i\nX-Mailer: test\nsubject: Re: hi\nDate: today\n\n\nbody");
  CHECK(m.recipients == std::vector<std::string>{"d@e.f", "g@h.i"});
  CHECK(m.subject == "Re: hi");
  CHECK(m.date == std::optional<std::string>("today"));
  CHECK(m.body == "\nbody");
}

TEST_CASE("invalid UTF-8 is replaced, not rejected") {
  const auto m = parse_message("From: a@b.c\nTo: d@e.f\n\nbad \xff\xfe byte");
  CHECK(m.body == "bad \xEF\xBF\xBD\xEF\xBF\xBD byte");
  CHECK(text::decode_lossy("ok \xC3\xA9") == "ok \xC3\xA9");
  CHECK(text::decode_lossy("\xC3") == "\xEF\xBF\xBD");
}

TEST_CASE("serialize then parse round-trips") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 200; ++i) {
    Message m;
    m.sender = oracle::random_address(rng);
    m.recipients = {oracle::random_address(rng)};
    if (i % 3 == 0) m.recipients.push_back(oracle::random_address(rng));
    m.subject = i % 5 == 0 ? "" : "Subject " + std::to_string(i);
    if (i % 4 == 0) m.date = "Thu, 15 Oct 2026 10:00:00 +0000";
    m.body = text::normalize_newlines(oracle::random_body(rng));
    const auto once = parse_message(serialize_message(m));
    const auto twice = parse_message(serialize_message(once));
    CHECK(twice == once);
    CHECK(once.body == m.body);
    CHECK(once.recipients == m.recipients);
  }
}

TEST_CASE("segment examples") {
  const auto a = segment("Hello world.");
  CHECK(a.tokens == std::vector<std::string>{"Hello", "world."});
  CHECK(a.sentences == std::vector<std::string>{"Hello world."});
  CHECK(a.paragraphs.size() == 1);

  const auto b = segment("A.\n\nB.");
  CHECK(b.paragraphs == std::vector<std::string>{"A.", "B."});
  CHECK(b.sentences.size() == 2);
  CHECK(b.lines.size() == 3);

  const auto c = segment("first line\n\tindented starts another\nstill second");
  CHECK(c.paragraphs.size() == 2);
  CHECK(c.paragraphs[1] == "\tindented starts another\nstill second");

  const auto e = segment("");
  CHECK(e.lines.empty());
  CHECK(e.tokens.empty());
  CHECK(e.paragraphs.empty());
  CHECK(e.sentences.empty());

  CHECK(segment("v2.0 is out! Really? yes").sentences ==
        std::vector<std::string>{"v2.0 is out!", "Really?", "yes"});
}

TEST_CASE("segmentation counts match a character-scan oracle") {
  std::mt19937_64 rng(2026);
  for (int i = 0; i < 500; ++i) {
    const std::string body = oracle::random_body(rng, /*ascii_only=*/true);
    const auto seg = segment(body);
    const auto want = oracle::scan_segments(body);
    INFO(body);
    CHECK(seg.tokens.size() == want.tokens);
    CHECK(seg.lines.size() == want.lines);
    CHECK(seg.sentences.size() == want.sentences);
    CHECK(seg.paragraphs.size() == want.paragraphs);
  }
}

TEST_CASE("tokens are non-empty maximal non-whitespace runs") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 200; ++i) {
    const std::string body = oracle::random_body(rng);
    const auto seg = segment(body);
    std::string rebuilt;
    for (const auto& t : seg.tokens) {
      REQUIRE_FALSE(t.empty());
      for (char c : t) CHECK_FALSE(text::is_ascii_space(c));
      rebuilt += t;
    }
    std::string stripped;
    for (char c : body) {
      if (!text::is_ascii_space(c)) stripped += c;
    }
    CHECK(rebuilt == stripped);
  }
}

TEST_CASE("paragraphs cover every non-blank line in order") {
  std::mt19937_64 rng(6);
  for (int i = 0; i < 200; ++i) {
    const std::string body = oracle::random_body(rng);
    const auto seg = segment(body);
    std::string from_paragraphs, from_lines;
    for (const auto& p : seg.paragraphs) from_paragraphs += p + "\n";
    for (const auto& l : seg.lines) {
      if (!text::trim(l).empty()) from_lines += l + "\n";
    }
    CHECK(from_paragraphs == from_lines);
  }
}

TEST_CASE("segment is total on arbitrary bytes") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> byte(0, 255);
  for (int i = 0; i < 300; ++i) {
    std::string junk(static_cast<std::size_t>(byte(rng)), '\0');
    for (auto& c : junk) c = static_cast<char>(byte(rng));
    CHECK_NOTHROW(segment(junk));
    CHECK(segment(junk).tokens == segment(junk).tokens);
  }
}

TEST_CASE("address syntax") {
  CHECK(is_valid_address("a@b"));
  CHECK(is_valid_address("aga.ga@gmail.com"));
  CHECK_FALSE(is_valid_address("a@b@c"));
  CHECK_FALSE(is_valid_address("@b.c"));
  CHECK_FALSE(is_valid_address("a@"));
  CHECK_FALSE(is_valid_address("a b@c.d"));
  CHECK_FALSE(is_valid_address("<a@b.c>"));
}
