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
#include <string>
#include <string_view>

namespace sendgate {

using Clock = std::chrono::system_clock;
using TimePoint = Clock::time_point;

// RFC 3339 in UTC with nanosecond fraction, e.g. 2026-10-15T21:52:00.000000000Z.
std::string format_rfc3339(TimePoint tp);

// Accepts the format above, any fraction length, 'Z' or a numeric offset.
// Throws Error(invalid_argument).
TimePoint parse_rfc3339(std::string_view s);

// 20261015T215200123456789Z; safe inside file names.
std::string format_compact(TimePoint tp);

}  // namespace sendgate
