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
#include <string>
#include <string_view>
#include <vector>

namespace sendgate::testkit {

// Operations an attacker or owner can issue against one profile with one
// draft session. Correct code is "0990".
enum class Op {
  request_send,
  submit_correct,
  submit_wrong,
  settings_fwd_correct,
  settings_fwd_wrong,
  register_valid,
  register_replayed,
};
inline constexpr std::size_t kOpCount = 7;

std::string_view to_string(Op op);

struct ModelCheckReport {
  std::size_t max_depth = 0;
  std::size_t sequences = 0;  // every sequence of length 0..max_depth
  std::size_t sent_paths = 0;
  std::size_t locked_paths = 0;
  std::size_t safety_violations = 0;      // sent without a logged verification
  std::size_t lockout_violations = 0;     // 3 failures without lock, or a lock bypass
  std::size_t forwarding_violations = 0;  // forwarding changed on a failing op
  std::size_t oracle_mismatches = 0;      // gate disagrees with the reference model
  std::vector<Op> first_counterexample;
  std::string first_problem;

  std::size_t violations() const {
    return safety_violations + lockout_violations + forwarding_violations + oracle_mismatches;
  }
};

// Enumerates every operation sequence up to `max_depth` from a fresh
// composing session, rewinding the gate between siblings, and checks each
// reached state against a reference model of the protocol.
ModelCheckReport check_send_gate(std::size_t max_depth);

}  // namespace sendgate::testkit
