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

#include <map>
#include <mutex>
#include <set>
#include <string>
#include <vector>

#include "sendgate/gate/code.hpp"
#include "sendgate/gate/types.hpp"

namespace sendgate::testkit {

// Real PBKDF2 records, computed once per distinct code, with verify results
// memoized per (record, code). Keeps exhaustive searches fast.
class CachingHasher final : public gate::CodeHasher {
 public:
  gate::CodeRecord hash(std::string_view code) const override;
  bool verify(const gate::CodeRecord& record, std::string_view code) const override;

  std::size_t real_hashes() const;

 private:
  gate::Pbkdf2CodeHasher inner_;
  mutable std::mutex mu_;
  mutable std::map<std::string, gate::CodeRecord> records_;
  mutable std::map<std::string, bool> verdicts_;
  mutable std::size_t real_hashes_ = 0;
};

// Accepts evidence whose token is "valid"; everything else, including the
// token "replayed", is rejected. Stateless so a search can rewind freely.
class StubAuthenticator final : public gate::StrongAuthenticator {
 public:
  bool redeem(const std::string& user_id, const gate::AuthEvidence& evidence) override;
};

// Returns a fixed assessment for every draft.
class FixedAssessor final : public gate::MessageAssessor {
 public:
  // Exact-known address and a fully legitimate style score.
  FixedAssessor();
  explicit FixedAssessor(gate::Assessment assessment) : assessment_(std::move(assessment)) {}

  gate::Assessment assess(const gate::UserProfile& profile,
                          const Message& draft) const override;

 private:
  gate::Assessment assessment_;
};

// Number of message_sent events whose session has no earlier code_verified
// event. Zero for every valid log.
std::size_t unverified_sends(const std::vector<gate::AuditEvent>& log);

}  // namespace sendgate::testkit
