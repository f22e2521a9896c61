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

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace sendgate {

// Every failure surfaced by the library carries one of these codes. The
// gateway maps each code to exactly one HTTP status and machine string.
enum class ErrorCode {
  missing_header,
  malformed_header,
  malformed_address,
  shape_mismatch,
  empty_corpus,
  single_class_corpus,
  invalid_code_format,
  auth_rejected,
  invalid_state,
  user_locked,
  code_mismatch,
  invalid_forwarding_address,
  session_expired,
  not_found,
  corrupt_record,
  version_mismatch,
  io_failure,
  store_locked,
  manifest_mismatch,
  invalid_argument,
  unauthorized,
  port_in_use,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::optional<int> remaining_attempts = std::nullopt)
      : std::runtime_error(message),
        code_(code),
        remaining_(remaining_attempts) {}

  ErrorCode code() const noexcept { return code_; }

  // Only set for code_mismatch.
  std::optional<int> remaining_attempts() const noexcept { return remaining_; }

 private:
  ErrorCode code_;
  std::optional<int> remaining_;
};

}  // namespace sendgate
