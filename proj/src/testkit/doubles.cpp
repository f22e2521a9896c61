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

#include "sendgate/testkit/doubles.hpp"

#include "sendgate/gate/events.hpp"

namespace sendgate::testkit {

gate::CodeRecord CachingHasher::hash(std::string_view code) const {
  std::lock_guard lock(mu_);
  const std::string key(code);
  if (auto it = records_.find(key); it != records_.end()) return it->second;
  ++real_hashes_;
  return records_.emplace(key, inner_.hash(code)).first->second;
}

bool CachingHasher::verify(const gate::CodeRecord& record, std::string_view code) const {
  const std::string key = crypto::hex_encode(record.salt) + ":" +
                          crypto::hex_encode(record.digest) + ":" + std::string(code);
  std::lock_guard lock(mu_);
  if (auto it = verdicts_.find(key); it != verdicts_.end()) return it->second;
  ++real_hashes_;
  return verdicts_.emplace(key, inner_.verify(record, code)).first->second;
}

std::size_t CachingHasher::real_hashes() const {
  std::lock_guard lock(mu_);
  return real_hashes_;
}

bool StubAuthenticator::redeem(const std::string&, const gate::AuthEvidence& evidence) {
  return evidence.token == "valid";
}

FixedAssessor::FixedAssessor() {
  assessment_.id_report.verdict = identity::AddressVerdict::exact_known;
  assessment_.id_report.distance = 0;
  assessment_.prediction.probabilities = {1.0, 0.0};
  assessment_.prediction.label = authmodel::Label::legitimate;
}

gate::Assessment FixedAssessor::assess(const gate::UserProfile&, const Message& draft) const {
  gate::Assessment a = assessment_;
  if (a.id_report.address.empty() && !draft.recipients.empty())
    a.id_report.address = draft.recipients.front();
  return a;
}

std::size_t unverified_sends(const std::vector<gate::AuditEvent>& log) {
  std::set<std::string> verified;
  std::size_t bad = 0;
  for (const auto& e : log) {
    if (e.event == gate::events::kCodeVerified && !e.session_id.empty())
      verified.insert(e.session_id);
    else if (e.event == gate::events::kMessageSent && !verified.contains(e.session_id))
      ++bad;
  }
  return bad;
}

}  // namespace sendgate::testkit
