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

#include "sendgate/gate/code.hpp"

#include <fmt/format.h>

#include "sendgate/error.hpp"
#include "sendgate/text.hpp"

namespace sendgate::gate {

bool is_valid_code(std::string_view code) {
  if (code.size() != 4) return false;
  for (char c : code) {
    if (!text::is_ascii_digit(c)) return false;
  }
  return true;
}

Pbkdf2CodeHasher::Pbkdf2CodeHasher(std::uint32_t iterations)
    : iterations_(iterations) {
  if (iterations_ < kMinHashIterations)
    throw Error(ErrorCode::invalid_argument,
                fmt::format("code hashing needs at least {} iterations",
                            kMinHashIterations));
}

CodeRecord Pbkdf2CodeHasher::hash(std::string_view code) const {
  if (!is_valid_code(code))
    throw Error(ErrorCode::invalid_code_format, "code must be exactly 4 digits");
  CodeRecord r;
  r.algorithm = std::string(kPbkdf2Algorithm);
  r.salt = crypto::random_bytes(kSaltBytes);
  r.iterations = iterations_;
  r.digest = crypto::pbkdf2_sha256(code, r.salt, r.iterations, kDigestBytes);
  return r;
}

bool Pbkdf2CodeHasher::verify(const CodeRecord& record,
                              std::string_view code) const {
  if (record.algorithm != kPbkdf2Algorithm || record.iterations == 0)
    throw Error(ErrorCode::corrupt_record,
                fmt::format("unsupported code algorithm '{}'", record.algorithm));
  // Derive even for malformed input so timing does not reveal the format
  // check; the result is discarded.
  const auto derived = crypto::pbkdf2_sha256(code, record.salt, record.iterations,
                                             record.digest.size());
  const bool match = crypto::constant_time_equal(derived, record.digest);
  return match && is_valid_code(code);
}

}  // namespace sendgate::gate
