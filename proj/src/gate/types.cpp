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

#include "sendgate/gate/types.hpp"

#include <fmt/format.h>

#include "sendgate/codec.hpp"
#include "sendgate/error.hpp"
#include "sendgate/gate/events.hpp"

namespace sendgate::gate {
namespace {

using nlohmann::json;

[[noreturn]] void corrupt(const AuditEvent& e, std::string_view why) {
  throw Error(ErrorCode::corrupt_record,
              fmt::format("cannot apply audit event '{}' for user '{}': {}",
                          e.event, e.user_id, why));
}

UserProfile& profile_of(GateState& s, const AuditEvent& e) {
  const auto it = s.profiles.find(e.user_id);
  if (it == s.profiles.end()) corrupt(e, "unknown user");
  return it->second;
}

SendSession& session_of(GateState& s, const AuditEvent& e) {
  const auto it = s.sessions.find(e.session_id);
  if (it == s.sessions.end()) corrupt(e, "unknown session");
  return it->second;
}

json optional_string(const std::optional<std::string>& s) {
  return s ? json(*s) : json(nullptr);
}

}  // namespace

std::string_view to_string(SessionState s) {
  switch (s) {
    case SessionState::composing: return "composing";
    case SessionState::awaiting_code: return "awaiting_code";
    case SessionState::sent: return "sent";
    case SessionState::failed_locked: return "failed_locked";
  }
  return "unknown";
}

SessionState session_state_from(std::string_view s) {
  for (auto st : {SessionState::composing, SessionState::awaiting_code,
                  SessionState::sent, SessionState::failed_locked}) {
    if (to_string(st) == s) return st;
  }
  throw Error(ErrorCode::corrupt_record, fmt::format("unknown session state '{}'", s));
}

std::string evidence_id(const AuthEvidence& e) {
  // Digit-free so audit lines never carry a run of decimal digits.
  std::string id = crypto::sha256_hex(e.method + ":" + e.token);
  for (char& c : id) c = "cbdefghijklnrtuv"[c <= '9' ? c - '0' : c - 'a' + 10];
  return id;
}

AuthEvidence OneTimeTokenAuthenticator::issue(const std::string& user_id,
                                              std::string method) {
  AuthEvidence e{std::move(method), crypto::hex_encode(crypto::random_bytes(16)),
                 Clock::now()};
  std::lock_guard lock(mu_);
  pending_[user_id].insert(evidence_id(e));
  return e;
}

bool OneTimeTokenAuthenticator::redeem(const std::string& user_id,
                                       const AuthEvidence& evidence) {
  std::lock_guard lock(mu_);
  const auto it = pending_.find(user_id);
  if (it == pending_.end()) return false;
  return it->second.erase(evidence_id(evidence)) == 1;
}

json audit_to_json(const AuditEvent& e) {
  return {{"ts", format_rfc3339(e.ts)},
          {"user_id", e.user_id},
          {"session_id", e.session_id},
          {"event", e.event},
          {"detail", e.detail}};
}

AuditEvent audit_from_json(const json& j) {
  return {parse_rfc3339(j.at("ts").get<std::string>()),
          j.at("user_id").get<std::string>(), j.at("session_id").get<std::string>(),
          j.at("event").get<std::string>(), j.at("detail")};
}

void MemoryAuditSink::append(const AuditEvent& event) {
  std::lock_guard lock(mu_);
  events_.push_back(event);
}

std::vector<AuditEvent> MemoryAuditSink::events() const {
  std::lock_guard lock(mu_);
  return events_;
}

std::vector<AuditEvent> MemoryAuditSink::events_from(std::size_t first) const {
  std::lock_guard lock(mu_);
  if (first >= events_.size()) return {};
  return {events_.begin() + static_cast<std::ptrdiff_t>(first), events_.end()};
}

std::size_t MemoryAuditSink::size() const {
  std::lock_guard lock(mu_);
  return events_.size();
}

void MemoryAuditSink::truncate(std::size_t n) {
  std::lock_guard lock(mu_);
  if (n < events_.size()) events_.resize(n);
}

void MemoryDeliverySink::deliver(const SendSession& session, const Message& message) {
  std::lock_guard lock(mu_);
  delivered_.emplace_back(session.session_id, message);
}

std::vector<std::pair<std::string, Message>> MemoryDeliverySink::delivered() const {
  std::lock_guard lock(mu_);
  return delivered_;
}

std::size_t MemoryDeliverySink::size() const {
  std::lock_guard lock(mu_);
  return delivered_.size();
}

void MemoryDeliverySink::truncate(std::size_t n) {
  std::lock_guard lock(mu_);
  if (n < delivered_.size()) delivered_.resize(n);
}

void apply(GateState& s, const AuditEvent& e) {
  namespace ev = events;
  const auto& d = e.detail;
  try {
    if (e.event == ev::kProfileCreated || e.event == ev::kProfileUpdated) {
      const bool exists = s.profiles.contains(e.user_id);
      if (e.event == ev::kProfileCreated && exists) corrupt(e, "user exists");
      if (e.event == ev::kProfileUpdated && !exists) corrupt(e, "unknown user");
      auto& p = s.profiles[e.user_id];
      p.user_id = e.user_id;
      p.address = d.at("address").get<std::string>();
      p.contacts = d.at("contacts").get<std::set<std::string>>();
      p.model_ref = d.at("model_ref").get<std::string>();
    } else if (e.event == ev::kCodeRegistered) {
      auto& p = profile_of(s, e);
      p.code = code_record_from_json(d.at("code"));
      p.locked = false;
      p.failed_attempts = 0;
    } else if (e.event == ev::kAuthRejected || e.event == ev::kForwardingChanged) {
      // Informational.
    } else if (e.event == ev::kSessionCreated) {
      if (!s.profiles.contains(e.user_id)) corrupt(e, "unknown user");
      if (s.sessions.contains(e.session_id)) corrupt(e, "session exists");
      SendSession ss;
      ss.session_id = e.session_id;
      ss.user_id = e.user_id;
      ss.created_at = ss.updated_at = e.ts;
      s.sessions.emplace(e.session_id, std::move(ss));
    } else if (e.event == ev::kDraftUpdated) {
      auto& ss = session_of(s, e);
      ss.draft = codec::message_from_json(d.at("draft"));
      ss.updated_at = e.ts;
    } else if (e.event == ev::kSendRequested) {
      auto& ss = session_of(s, e);
      ss.state = SessionState::awaiting_code;
      ss.updated_at = e.ts;
    } else if (e.event == ev::kCodeVerified) {
      if (!e.session_id.empty()) session_of(s, e).updated_at = e.ts;
    } else if (e.event == ev::kCodeFailed) {
      auto& p = profile_of(s, e);
      p.failed_attempts = d.at("failed_attempts").get<int>();
      if (!e.session_id.empty()) {
        auto& ss = session_of(s, e);
        ++ss.attempts_used;
        ss.updated_at = e.ts;
      }
    } else if (e.event == ev::kProfileLocked) {
      profile_of(s, e).locked = true;
      if (!e.session_id.empty()) {
        auto& ss = session_of(s, e);
        ss.state = SessionState::failed_locked;
        ss.updated_at = e.ts;
      }
    } else if (e.event == ev::kMessageSent || e.event == ev::kMessageBlocked) {
      auto& ss = session_of(s, e);
      ss.state = e.event == ev::kMessageSent ? SessionState::sent
                                             : SessionState::failed_locked;
      ss.verdict = codec::verdict_from_json(d.at("verdict"));
      ss.updated_at = e.ts;
    } else if (e.event == ev::kSettingsUpdated) {
      auto& p = profile_of(s, e);
      if (d.contains("forwarding_address")) {
        const auto& f = d.at("forwarding_address");
        p.settings.forwarding_address =
            f.is_null() ? std::nullopt : std::optional(f.get<std::string>());
      }
      if (d.contains("signature"))
        p.settings.signature = d.at("signature").get<std::string>();
    } else if (e.event == ev::kSessionExpired) {
      session_of(s, e);
      s.sessions.erase(e.session_id);
    } else {
      corrupt(e, "unknown event");
    }
  } catch (const nlohmann::json::exception& ex) {
    corrupt(e, ex.what());
  }
}

GateState replay(const std::vector<AuditEvent>& events) {
  GateState s;
  for (const auto& e : events) apply(s, e);
  return s;
}

json code_record_to_json(const CodeRecord& r) {
  return {{"algorithm", r.algorithm},
          {"salt", crypto::modhex_encode(r.salt)},
          {"digest", crypto::modhex_encode(r.digest)},
          {"iterations", r.iterations}};
}

CodeRecord code_record_from_json(const json& j) {
  return {j.at("algorithm").get<std::string>(),
          crypto::modhex_decode(j.at("salt").get<std::string>()),
          crypto::modhex_decode(j.at("digest").get<std::string>()),
          j.at("iterations").get<std::uint32_t>()};
}

json profile_to_json(const UserProfile& p) {
  return {{"user_id", p.user_id},
          {"address", p.address},
          {"contacts", p.contacts},
          {"code", p.code ? code_record_to_json(*p.code) : json(nullptr)},
          {"locked", p.locked},
          {"failed_attempts", p.failed_attempts},
          {"settings",
           {{"forwarding_address", optional_string(p.settings.forwarding_address)},
            {"signature", p.settings.signature}}},
          {"model_ref", p.model_ref}};
}

UserProfile profile_from_json(const json& j) {
  UserProfile p;
  p.user_id = j.at("user_id").get<std::string>();
  p.address = j.at("address").get<std::string>();
  p.contacts = j.at("contacts").get<std::set<std::string>>();
  if (!j.at("code").is_null()) p.code = code_record_from_json(j.at("code"));
  p.locked = j.at("locked").get<bool>();
  p.failed_attempts = j.at("failed_attempts").get<int>();
  const auto& st = j.at("settings");
  if (!st.at("forwarding_address").is_null())
    p.settings.forwarding_address = st.at("forwarding_address").get<std::string>();
  p.settings.signature = st.at("signature").get<std::string>();
  p.model_ref = j.at("model_ref").get<std::string>();
  return p;
}

json session_to_json(const SendSession& s) {
  return {{"session_id", s.session_id},
          {"user_id", s.user_id},
          {"draft", s.draft ? codec::message_to_json(*s.draft) : json(nullptr)},
          {"state", to_string(s.state)},
          {"attempts_used", s.attempts_used},
          {"created_at", format_rfc3339(s.created_at)},
          {"updated_at", format_rfc3339(s.updated_at)},
          {"verdict", s.verdict ? codec::verdict_to_json(*s.verdict) : json(nullptr)}};
}

SendSession session_from_json(const json& j) {
  SendSession s;
  s.session_id = j.at("session_id").get<std::string>();
  s.user_id = j.at("user_id").get<std::string>();
  if (!j.at("draft").is_null()) s.draft = codec::message_from_json(j.at("draft"));
  s.state = session_state_from(j.at("state").get<std::string>());
  s.attempts_used = j.at("attempts_used").get<int>();
  s.created_at = parse_rfc3339(j.at("created_at").get<std::string>());
  s.updated_at = parse_rfc3339(j.at("updated_at").get<std::string>());
  if (!j.at("verdict").is_null()) s.verdict = codec::verdict_from_json(j.at("verdict"));
  return s;
}

}  // namespace sendgate::gate
