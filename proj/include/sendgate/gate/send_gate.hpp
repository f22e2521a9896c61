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
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "sendgate/gate/types.hpp"

namespace sendgate::gate {

struct GateOptions {
  std::chrono::seconds session_idle_timeout = std::chrono::minutes(15);
  double styl_threshold = authmodel::kDefaultStylThreshold;
};

// Receives every state change after it has been logged. Used to mirror
// profiles and sessions into a store.
class GateObserver {
 public:
  virtual ~GateObserver() = default;
  virtual void profile_changed(const UserProfile& profile) = 0;
  virtual void session_changed(const SendSession& session) = 0;
  virtual void session_removed(const std::string& session_id) = 0;
};

struct Challenge {
  int remaining = 0;
};

enum class SubmitStatus { sent, retry, locked, dangerous };

std::string_view to_string(SubmitStatus s);

struct SubmitOutcome {
  SubmitStatus status = SubmitStatus::retry;
  int remaining = 0;
  std::optional<authmodel::Verdict> verdict;
};

// The send-gate protocol. Every transition is appended to the audit sink
// first and then applied through gate::apply, so replaying the log
// reproduces the state exactly.
//
// Thread safety: operations on one profile are serialized by a per-profile
// mutex held across code verification; distinct profiles run in parallel.
// A session accepts one submit at a time; a concurrent second submit fails
// with invalid_state without consuming an attempt.
class SendGate {
 public:
  using ClockFn = std::function<TimePoint()>;

  SendGate(const CodeHasher& hasher, StrongAuthenticator& authenticator,
           const MessageAssessor& assessor, AuditSink& audit,
           DeliverySink& delivery, ClockFn clock = [] { return Clock::now(); },
           GateOptions options = {});

  void set_observer(GateObserver* observer) { observer_ = observer; }

  // Replaces the in-memory state without logging, e.g. after loading a
  // store or when rewinding in a model checker.
  void restore(GateState state);
  GateState snapshot() const;

  UserProfile create_profile(const std::string& user_id, const std::string& address,
                             std::set<std::string> contacts,
                             std::string model_ref = {});
  UserProfile update_profile(const std::string& user_id, const std::string& address,
                             std::set<std::string> contacts, std::string model_ref);

  // Errors: invalid_code_format, auth_rejected, not_found.
  UserProfile register_code(const std::string& user_id, const std::string& new_code,
                            const AuthEvidence& evidence);

  std::string create_session(const std::string& user_id);

  // Allowed while composing. The sender is always the profile's address.
  SendSession update_draft(const std::string& session_id,
                           const std::vector<std::string>& to,
                           const std::string& subject, const std::string& body);

  // Errors: invalid_state, user_locked, not_found, session_expired.
  Challenge request_send(const std::string& session_id);

  // Errors: invalid_state, user_locked, invalid_code_format, not_found,
  // session_expired.
  SubmitOutcome submit_code(const std::string& session_id, const std::string& code);

  // Errors: code_mismatch (with remaining), user_locked,
  // invalid_forwarding_address, invalid_code_format, not_found.
  UserProfile update_settings(const std::string& user_id,
                              const SettingsChange& change, const std::string& code);

  UserProfile profile(const std::string& user_id) const;
  SendSession session(const std::string& session_id) const;

  // Drops sessions idle for longer than the timeout. Returns how many.
  std::size_t expire_idle_sessions();

 private:
  struct InFlight;

  std::mutex& profile_mutex(const std::string& user_id);
  AuditEvent make_event(std::string user_id, std::string session_id,
                        std::string_view name, nlohmann::json detail = nlohmann::json::object());
  void commit(std::vector<AuditEvent> events);
  // Requires state_mu_. Throws not_found or session_expired.
  SendSession& live_session(const std::string& session_id,
                            std::unique_lock<std::mutex>& lock);
  UserProfile& live_profile(const std::string& user_id);
  // Records one failed verification; adds a lock when the profile budget
  // or the session's own three attempts run out.
  std::vector<AuditEvent> failure_events(const UserProfile& profile,
                                         const std::string& session_id,
                                         std::string_view context,
                                         int session_attempts = 0);

  const CodeHasher& hasher_;
  StrongAuthenticator& authenticator_;
  const MessageAssessor& assessor_;
  AuditSink& audit_;
  DeliverySink& delivery_;
  ClockFn clock_;
  GateOptions options_;
  GateObserver* observer_ = nullptr;

  mutable std::mutex state_mu_;
  GateState state_;
  std::set<std::string> in_flight_;
  std::map<std::string, std::unique_ptr<std::mutex>> profile_mu_;
};

}  // namespace sendgate::gate
