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

#include "sendgate/error.hpp"

namespace sendgate {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::missing_header: return "missing_header";
    case ErrorCode::malformed_header: return "malformed_header";
    case ErrorCode::malformed_address: return "malformed_address";
    case ErrorCode::shape_mismatch: return "shape_mismatch";
    case ErrorCode::empty_corpus: return "empty_corpus";
    case ErrorCode::single_class_corpus: return "single_class_corpus";
    case ErrorCode::invalid_code_format: return "invalid_code_format";
    case ErrorCode::auth_rejected: return "auth_rejected";
    case ErrorCode::invalid_state: return "invalid_state";
    case ErrorCode::user_locked: return "user_locked";
    case ErrorCode::code_mismatch: return "code_mismatch";
    case ErrorCode::invalid_forwarding_address: return "invalid_forwarding_address";
    case ErrorCode::session_expired: return "session_expired";
    case ErrorCode::not_found: return "not_found";
    case ErrorCode::corrupt_record: return "corrupt_record";
    case ErrorCode::version_mismatch: return "version_mismatch";
    case ErrorCode::io_failure: return "io_failure";
    case ErrorCode::store_locked: return "store_locked";
    case ErrorCode::manifest_mismatch: return "manifest_mismatch";
    case ErrorCode::invalid_argument: return "invalid_argument";
    case ErrorCode::unauthorized: return "unauthorized";
    case ErrorCode::port_in_use: return "port_in_use";
  }
  return "unknown";
}

}  // namespace sendgate
