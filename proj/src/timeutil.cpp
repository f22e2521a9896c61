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

#include "sendgate/timeutil.hpp"

#include <ctime>

#include <fmt/format.h>

#include "sendgate/error.hpp"
#include "sendgate/text.hpp"

namespace sendgate {
namespace {

struct Broken {
  std::tm tm{};
  long long nanos = 0;
};

Broken split(TimePoint tp) {
  const auto ns = std::chrono::duration_cast<std::chrono::nanoseconds>(
                      tp.time_since_epoch())
                      .count();
  long long secs = ns / 1'000'000'000;
  long long frac = ns % 1'000'000'000;
  if (frac < 0) {
    frac += 1'000'000'000;
    --secs;
  }
  Broken b;
  const std::time_t t = static_cast<std::time_t>(secs);
  gmtime_r(&t, &b.tm);
  b.nanos = frac;
  return b;
}

[[noreturn]] void bad(std::string_view s) {
  throw Error(ErrorCode::invalid_argument,
              fmt::format("not an RFC 3339 timestamp: '{}'", s));
}

int digits(std::string_view s, std::size_t pos, std::size_t n) {
  if (pos + n > s.size()) bad(s);
  int v = 0;
  for (std::size_t i = pos; i < pos + n; ++i) {
    if (!text::is_ascii_digit(s[i])) bad(s);
    v = v * 10 + (s[i] - '0');
  }
  return v;
}

}  // namespace

std::string format_rfc3339(TimePoint tp) {
  const auto b = split(tp);
  return fmt::format("{:04}-{:02}-{:02}T{:02}:{:02}:{:02}.{:09}Z",
                     b.tm.tm_year + 1900, b.tm.tm_mon + 1, b.tm.tm_mday,
                     b.tm.tm_hour, b.tm.tm_min, b.tm.tm_sec, b.nanos);
}

std::string format_compact(TimePoint tp) {
  const auto b = split(tp);
  return fmt::format("{:04}{:02}{:02}T{:02}{:02}{:02}{:09}Z",
                     b.tm.tm_year + 1900, b.tm.tm_mon + 1, b.tm.tm_mday,
                     b.tm.tm_hour, b.tm.tm_min, b.tm.tm_sec, b.nanos);
}

TimePoint parse_rfc3339(std::string_view s) {
  std::tm tm{};
  tm.tm_year = digits(s, 0, 4) - 1900;
  if (s.size() < 19 || s[4] != '-' || s[7] != '-' ||
      (s[10] != 'T' && s[10] != 't') || s[13] != ':' || s[16] != ':')
    bad(s);
  tm.tm_mon = digits(s, 5, 2) - 1;
  tm.tm_mday = digits(s, 8, 2);
  tm.tm_hour = digits(s, 11, 2);
  tm.tm_min = digits(s, 14, 2);
  tm.tm_sec = digits(s, 17, 2);
  std::size_t pos = 19;
  long long nanos = 0;
  if (pos < s.size() && s[pos] == '.') {
    ++pos;
    int n = 0;
    while (pos < s.size() && text::is_ascii_digit(s[pos])) {
      if (n < 9) nanos = nanos * 10 + (s[pos] - '0');
      ++n;
      ++pos;
    }
    if (n == 0) bad(s);
    for (int k = n; k < 9; ++k) nanos *= 10;
  }
  long long offset = 0;
  if (pos < s.size() && (s[pos] == 'Z' || s[pos] == 'z')) {
    ++pos;
  } else if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) {
    const int sign = s[pos] == '+' ? 1 : -1;
    const int hh = digits(s, pos + 1, 2);
    if (pos + 3 >= s.size() || s[pos + 3] != ':') bad(s);
    const int mm = digits(s, pos + 4, 2);
    offset = sign * (hh * 3600LL + mm * 60LL);
    pos += 6;
  } else {
    bad(s);
  }
  if (pos != s.size()) bad(s);
  const long long secs = static_cast<long long>(timegm(&tm)) - offset;
  return TimePoint(std::chrono::duration_cast<Clock::duration>(
      std::chrono::seconds(secs) + std::chrono::nanoseconds(nanos)));
}

}  // namespace sendgate
