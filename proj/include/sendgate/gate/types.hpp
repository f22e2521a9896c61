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

#include <algorithm>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "sendgate/authmodel/fusion.hpp"
#include "sendgate/gate/code.hpp"
#include "sendgate/identity.hpp"
#include "sendgate/message.hpp"
#include "sendgate/timeutil.hpp"

namespace sendgate::gate {

inline constexpr int kMaxAttempts = 3;

struct Settings {
  std::optional<std::string> forwarding_address;
  std::string signature;

  bool operator==(const Settings&) const = default;
};

// Absent members are left alone. forwarding_address holding an empty
// optional clears forwarding.
struct SettingsChange {
  std::optional<std::optional<std::string>> forwarding_address;
  std::optional<std::string> signature;
};

struct UserProfile {
  std::string user_id;
  std::string address;
  std::set<std::string> contacts;
  std::optional<CodeRecord> code;
  bool locked = false;
  // Failed verifications since the last code registration, across sends
  // and settings changes.
  int failed_attempts = 0;
  Settings settings;
  std::string model_ref;

  int remaining_attempts() const { return std::max(0, kMaxAttempts - failed_attempts); }

  bool operator==(const UserProfile&) const = default;
};

enum class SessionState { composing, awaiting_code, sent, failed_locked };

std::string_view to_string(SessionState s);
SessionState session_state_from(std::string_view s);

struct SendSession {
  std::string session_id;
  std::string user_id;
  std::optional<Message> draft;
  SessionState state = SessionState::composing;
  int attempts_used = 0;
  TimePoint created_at;
  TimePoint updated_at;
  std::optional<authmodel::Verdict> verdict;

  bool operator==(const SendSession&) const = default;
};

// Out-of-band identity proof required to set or reset a code.
struct AuthEvidence {
  std::string method;
  std::string token;
  TimePoint issued_at;
};

// Stable digest of a piece of evidence, safe to log.
std::string evidence_id(const AuthEvidence& e);

class StrongAuthenticator {
 public:
  virtual ~StrongAuthenticator() = default;
  // Returns true at most once per piece of evidence.
  virtual bool redeem(const std::string& user_id, const AuthEvidence& evidence) = 0;
};

// Issues single-use random tokens. Stands in for the biometric or
// recovery-secret enrollment step.
class OneTimeTokenAuthenticator final : public StrongAuthenticator {
 public:
  AuthEvidence issue(const std::string& user_id, std::string method = "biometric-stub");
  bool redeem(const std::string& user_id, const AuthEvidence& evidence) override;

 private:
  std::mutex mu_;
  // user -> sha256(method:token)
  std::map<std::string, std::set<std::string>> pending_;
};

struct AuditEvent {
  TimePoint ts;
  std::string user_id;
  std::string session_id;  // empty for profile-level events
  std::string event;
  nlohmann::json detail = nlohmann::json::object();

  bool operator==(const AuditEvent&) const = default;
};

nlohmann::json audit_to_json(const AuditEvent& e);
AuditEvent audit_from_json(const nlohmann::json& j);

class AuditSink {
 public:
  virtual ~AuditSink() = default;
  // Must be durable before returning.
  virtual void append(const AuditEvent& event) = 0;
};

class MemoryAuditSink final : public AuditSink {
 public:
  void append(const AuditEvent& event) override;
  std::vector<AuditEvent> events() const;
  std::vector<AuditEvent> events_from(std::size_t first) const;
  std::size_t size() const;
  void truncate(std::size_t n);

 private:
  mutable std::mutex mu_;
  std::vector<AuditEvent> events_;
};

class DeliverySink {
 public:
  virtual ~DeliverySink() = default;
  virtual void deliver(const SendSession& session, const Message& message) = 0;
};

class MemoryDeliverySink final : public DeliverySink {
 public:
  void deliver(const SendSession& session, const Message& message) override;
  std::vector<std::pair<std::string, Message>> delivered() const;
  std::size_t size() const;
  void truncate(std::size_t n);

 private:
  mutable std::mutex mu_;
  std::vector<std::pair<std::string, Message>> delivered_;
};

// Identity and style findings for a draft, computed once the code matched.
struct Assessment {
  identity::LookalikeReport id_report;
  authmodel::Prediction prediction;
};

class MessageAssessor {
 public:
  virtual ~MessageAssessor() = default;
  virtual Assessment assess(const UserProfile& profile, const Message& draft) const = 0;
};

// Everything the gate knows. Rebuilt exactly by replaying the audit log.
struct GateState {
  std::map<std::string, UserProfile> profiles;
  std::map<std::string, SendSession> sessions;

  bool operator==(const GateState&) const = default;
};

// Applies one audit event. Throws Error(corrupt_record) for events that do
// not fit the current state.
void apply(GateState& state, const AuditEvent& event);

GateState replay(const std::vector<AuditEvent>& events);

nlohmann::json code_record_to_json(const CodeRecord& r);
CodeRecord code_record_from_json(const nlohmann::json& j);
nlohmann::json profile_to_json(const UserProfile& p);
UserProfile profile_from_json(const nlohmann::json& j);
nlohmann::json session_to_json(const SendSession& s);
SendSession session_from_json(const nlohmann::json& j);

}  // namespace sendgate::gate
