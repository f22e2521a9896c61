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

#include "sendgate/gate/send_gate.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "sendgate/codec.hpp"
#include "sendgate/error.hpp"
#include "sendgate/gate/events.hpp"
#include "sendgate/text.hpp"

namespace sendgate::gate {
namespace {

using nlohmann::json;

void require_user_id(const std::string& id) {
  bool ok = !id.empty() && id.size() <= 64 && id.front() != '.';
  for (char c : id) {
    if (!(text::is_ascii_alnum(c) || c == '.' || c == '_' || c == '-')) ok = false;
  }
  if (!ok)
    throw Error(ErrorCode::invalid_argument,
                fmt::format("invalid user id '{}'", id));
}

void require_addresses(const std::string& address,
                       const std::set<std::string>& contacts) {
  if (!is_valid_address(address))
    throw Error(ErrorCode::malformed_address,
                fmt::format("malformed address '{}'", address));
  for (const auto& c : contacts) {
    if (!is_valid_address(c))
      throw Error(ErrorCode::malformed_address,
                  fmt::format("malformed contact '{}'", c));
  }
}

json profile_detail(const std::string& address, const std::set<std::string>& contacts,
                    const std::string& model_ref) {
  return {{"address", address}, {"contacts", contacts}, {"model_ref", model_ref}};
}

}  // namespace

std::string_view to_string(SubmitStatus s) {
  switch (s) {
    case SubmitStatus::sent: return "sent";
    case SubmitStatus::retry: return "retry";
    case SubmitStatus::locked: return "locked";
    case SubmitStatus::dangerous: return "dangerous";
  }
  return "unknown";
}

// Marks a session busy for the duration of one submit.
struct SendGate::InFlight {
  SendGate& gate;
  std::string session_id;

  ~InFlight() {
    std::lock_guard lock(gate.state_mu_);
    gate.in_flight_.erase(session_id);
  }
};

SendGate::SendGate(const CodeHasher& hasher, StrongAuthenticator& authenticator,
                   const MessageAssessor& assessor, AuditSink& audit,
                   DeliverySink& delivery, ClockFn clock, GateOptions options)
    : hasher_(hasher),
      authenticator_(authenticator),
      assessor_(assessor),
      audit_(audit),
      delivery_(delivery),
      clock_(std::move(clock)),
      options_(options) {}

void SendGate::restore(GateState state) {
  std::lock_guard lock(state_mu_);
  state_ = std::move(state);
  in_flight_.clear();
}

GateState SendGate::snapshot() const {
  std::lock_guard lock(state_mu_);
  return state_;
}

std::mutex& SendGate::profile_mutex(const std::string& user_id) {
  std::lock_guard lock(state_mu_);
  auto& slot = profile_mu_[user_id];
  if (!slot) slot = std::make_unique<std::mutex>();
  return *slot;
}

AuditEvent SendGate::make_event(std::string user_id, std::string session_id,
                                std::string_view name, json detail) {
  return {clock_(), std::move(user_id), std::move(session_id), std::string(name),
          std::move(detail)};
}

void SendGate::commit(std::vector<AuditEvent> events) {
  for (const auto& e : events) {
    audit_.append(e);
    std::optional<UserProfile> profile;
    std::optional<SendSession> session;
    {
      std::lock_guard lock(state_mu_);
      apply(state_, e);
      if (auto it = state_.profiles.find(e.user_id); it != state_.profiles.end())
        profile = it->second;
      if (auto it = state_.sessions.find(e.session_id); it != state_.sessions.end())
        session = it->second;
    }
    if (observer_ == nullptr) continue;
    if (profile) observer_->profile_changed(*profile);
    if (session)
      observer_->session_changed(*session);
    else if (!e.session_id.empty())
      observer_->session_removed(e.session_id);
  }
}

SendSession& SendGate::live_session(const std::string& session_id,
                                    std::unique_lock<std::mutex>& lock) {
  auto it = state_.sessions.find(session_id);
  if (it == state_.sessions.end())
    throw Error(ErrorCode::not_found, "unknown session");
  const auto now = clock_();
  if (!in_flight_.contains(session_id) &&
      now - it->second.updated_at > options_.session_idle_timeout) {
    const auto event = make_event(it->second.user_id, session_id, events::kSessionExpired);
    lock.unlock();
    commit({event});
    throw Error(ErrorCode::session_expired, "session expired after idling");
  }
  return it->second;
}

UserProfile& SendGate::live_profile(const std::string& user_id) {
  const auto it = state_.profiles.find(user_id);
  if (it == state_.profiles.end())
    throw Error(ErrorCode::not_found, fmt::format("unknown user '{}'", user_id));
  return it->second;
}

UserProfile SendGate::create_profile(const std::string& user_id,
                                     const std::string& address,
                                     std::set<std::string> contacts,
                                     std::string model_ref) {
  require_user_id(user_id);
  require_addresses(address, contacts);
  std::lock_guard guard(profile_mutex(user_id));
  {
    std::lock_guard lock(state_mu_);
    if (state_.profiles.contains(user_id))
      throw Error(ErrorCode::invalid_argument,
                  fmt::format("user '{}' already exists", user_id));
  }
  commit({make_event(user_id, {}, events::kProfileCreated,
                     profile_detail(address, contacts, model_ref))});
  return profile(user_id);
}

UserProfile SendGate::update_profile(const std::string& user_id,
                                     const std::string& address,
                                     std::set<std::string> contacts,
                                     std::string model_ref) {
  require_addresses(address, contacts);
  std::lock_guard guard(profile_mutex(user_id));
  {
    std::lock_guard lock(state_mu_);
    live_profile(user_id);
  }
  commit({make_event(user_id, {}, events::kProfileUpdated,
                     profile_detail(address, contacts, model_ref))});
  return profile(user_id);
}

UserProfile SendGate::register_code(const std::string& user_id,
                                    const std::string& new_code,
                                    const AuthEvidence& evidence) {
  if (!is_valid_code(new_code))
    throw Error(ErrorCode::invalid_code_format, "code must be exactly 4 digits");
  std::lock_guard guard(profile_mutex(user_id));
  {
    std::lock_guard lock(state_mu_);
    live_profile(user_id);
  }
  if (!authenticator_.redeem(user_id, evidence)) {
    commit({make_event(user_id, {}, events::kAuthRejected,
                       {{"method", evidence.method},
                        {"evidence_id", evidence_id(evidence)}})});
    throw Error(ErrorCode::auth_rejected, "strong authentication evidence rejected");
  }
  const CodeRecord record = hasher_.hash(new_code);
  commit({make_event(user_id, {}, events::kCodeRegistered,
                     {{"code", code_record_to_json(record)},
                      {"method", evidence.method},
                      {"evidence_id", evidence_id(evidence)}})});
  return profile(user_id);
}

std::string SendGate::create_session(const std::string& user_id) {
  std::lock_guard guard(profile_mutex(user_id));
  {
    std::lock_guard lock(state_mu_);
    live_profile(user_id);
  }
  const std::string id = crypto::modhex_encode(crypto::random_bytes(16));
  commit({make_event(user_id, id, events::kSessionCreated)});
  return id;
}

SendSession SendGate::update_draft(const std::string& session_id,
                                   const std::vector<std::string>& to,
                                   const std::string& subject,
                                   const std::string& body) {
  std::string user_id;
  {
    std::unique_lock lock(state_mu_);
    user_id = live_session(session_id, lock).user_id;
  }
  std::lock_guard guard(profile_mutex(user_id));
  Message draft;
  {
    std::unique_lock lock(state_mu_);
    const auto& session = live_session(session_id, lock);
    if (session.state != SessionState::composing)
      throw Error(ErrorCode::invalid_state, "draft can only change while composing");
    draft.sender = live_profile(user_id).address;
  }
  if (to.empty()) throw Error(ErrorCode::missing_header, "missing header: to");
  for (const auto& r : to) {
    if (!is_valid_address(r))
      throw Error(ErrorCode::malformed_address,
                  fmt::format("malformed recipient address '{}'", r));
  }
  draft.recipients = to;
  draft.subject = std::string(text::trim(subject));
  draft.body = text::normalize_newlines(text::decode_lossy(body));
  draft.raw_size = serialize_message(draft).size();
  commit({make_event(user_id, session_id, events::kDraftUpdated,
                     {{"draft", codec::message_to_json(draft)}})});
  return session(session_id);
}

Challenge SendGate::request_send(const std::string& session_id) {
  std::string user_id;
  {
    std::unique_lock lock(state_mu_);
    user_id = live_session(session_id, lock).user_id;
  }
  std::lock_guard guard(profile_mutex(user_id));
  int remaining = 0;
  {
    std::unique_lock lock(state_mu_);
    const auto& session = live_session(session_id, lock);
    const auto& profile = live_profile(user_id);
    if (profile.locked) throw Error(ErrorCode::user_locked, "account is locked");
    if (session.state != SessionState::composing)
      throw Error(ErrorCode::invalid_state,
                  fmt::format("cannot send from state {}", to_string(session.state)));
    if (!session.draft) throw Error(ErrorCode::invalid_state, "no draft to send");
    if (!profile.code) throw Error(ErrorCode::invalid_state, "no send code registered");
    remaining = profile.remaining_attempts();
  }
  commit({make_event(user_id, session_id, events::kSendRequested)});
  return {remaining};
}

std::vector<AuditEvent> SendGate::failure_events(const UserProfile& profile,
                                                 const std::string& session_id,
                                                 std::string_view context,
                                                 int session_attempts) {
  const int failed = profile.failed_attempts + 1;
  std::vector<AuditEvent> out;
  out.push_back(make_event(profile.user_id, session_id, events::kCodeFailed,
                           {{"context", context}, {"failed_attempts", failed}}));
  if (failed >= kMaxAttempts || session_attempts + 1 >= kMaxAttempts)
    out.push_back(make_event(profile.user_id, session_id, events::kProfileLocked,
                             {{"context", context}}));
  return out;
}

SubmitOutcome SendGate::submit_code(const std::string& session_id,
                                    const std::string& code) {
  std::string user_id;
  {
    std::unique_lock lock(state_mu_);
    const auto& session = live_session(session_id, lock);
    if (in_flight_.contains(session_id))
      throw Error(ErrorCode::invalid_state, "a code submission is already in progress");
    if (live_profile(session.user_id).locked)
      throw Error(ErrorCode::user_locked, "account is locked");
    if (session.state != SessionState::awaiting_code)
      throw Error(ErrorCode::invalid_state,
                  fmt::format("no code expected in state {}", to_string(session.state)));
    in_flight_.insert(session_id);
    user_id = session.user_id;
  }
  InFlight busy{*this, session_id};
  std::lock_guard guard(profile_mutex(user_id));

  UserProfile profile;
  SendSession session;
  {
    std::lock_guard lock(state_mu_);
    profile = live_profile(user_id);
    session = state_.sessions.at(session_id);
  }
  if (profile.locked) throw Error(ErrorCode::user_locked, "account is locked");
  if (!is_valid_code(code))
    throw Error(ErrorCode::invalid_code_format, "code must be exactly 4 digits");
  if (!profile.code) throw Error(ErrorCode::invalid_state, "no send code registered");

  if (!hasher_.verify(*profile.code, code)) {
    auto evs = failure_events(profile, session_id, "send", session.attempts_used);
    const bool locks = evs.size() > 1;
    commit(std::move(evs));
    if (locks) return {SubmitStatus::locked, 0, std::nullopt};
    const int remaining = std::min(this->profile(user_id).remaining_attempts(),
                                   kMaxAttempts - (session.attempts_used + 1));
    return {SubmitStatus::retry, remaining, std::nullopt};
  }

  commit({make_event(user_id, session_id, events::kCodeVerified, {{"context", "send"}})});
  const Assessment a = assessor_.assess(profile, *session.draft);
  const auto verdict = authmodel::fuse(true, a.id_report, a.prediction,
                                       options_.styl_threshold);
  const json detail = {{"verdict", codec::verdict_to_json(verdict)}};
  if (verdict.decision == authmodel::Decision::dangerous) {
    commit({make_event(user_id, session_id, events::kMessageBlocked, detail)});
    return {SubmitStatus::dangerous, profile.remaining_attempts(), verdict};
  }
  delivery_.deliver(session, *session.draft);
  commit({make_event(user_id, session_id, events::kMessageSent, detail)});
  return {SubmitStatus::sent, profile.remaining_attempts(), verdict};
}

UserProfile SendGate::update_settings(const std::string& user_id,
                                      const SettingsChange& change,
                                      const std::string& code) {
  std::lock_guard guard(profile_mutex(user_id));
  UserProfile profile;
  {
    std::lock_guard lock(state_mu_);
    profile = live_profile(user_id);
  }
  if (profile.locked) throw Error(ErrorCode::user_locked, "account is locked");
  if (change.forwarding_address && *change.forwarding_address) {
    const auto& fwd = **change.forwarding_address;
    if (!is_valid_address(fwd) || text::to_lower(fwd) == text::to_lower(profile.address))
      throw Error(ErrorCode::invalid_forwarding_address,
                  fmt::format("cannot forward to '{}'", fwd));
  }
  if (!is_valid_code(code))
    throw Error(ErrorCode::invalid_code_format, "code must be exactly 4 digits");
  if (!profile.code) throw Error(ErrorCode::invalid_state, "no send code registered");

  if (!hasher_.verify(*profile.code, code)) {
    auto evs = failure_events(profile, {}, "settings");
    const bool locks = evs.size() > 1;
    commit(std::move(evs));
    if (locks) throw Error(ErrorCode::user_locked, "too many failed attempts; account locked");
    const int remaining = kMaxAttempts - (profile.failed_attempts + 1);
    throw Error(ErrorCode::code_mismatch,
                fmt::format("code mismatch, {} attempt(s) left", remaining), remaining);
  }

  std::vector<AuditEvent> evs;
  evs.push_back(make_event(user_id, {}, events::kCodeVerified, {{"context", "settings"}}));
  json detail = json::object();
  if (change.forwarding_address) {
    const auto& fwd = *change.forwarding_address;
    detail["forwarding_address"] = fwd ? json(*fwd) : json(nullptr);
  }
  if (change.signature) detail["signature"] = *change.signature;
  evs.push_back(make_event(user_id, {}, events::kSettingsUpdated, detail));
  if (change.forwarding_address &&
      *change.forwarding_address != profile.settings.forwarding_address) {
    const auto& from = profile.settings.forwarding_address;
    const auto& to = *change.forwarding_address;
    evs.push_back(make_event(user_id, {}, events::kForwardingChanged,
                             {{"from", from ? json(*from) : json(nullptr)},
                              {"to", to ? json(*to) : json(nullptr)}}));
  }
  commit(std::move(evs));
  return this->profile(user_id);
}

UserProfile SendGate::profile(const std::string& user_id) const {
  std::lock_guard lock(state_mu_);
  const auto it = state_.profiles.find(user_id);
  if (it == state_.profiles.end())
    throw Error(ErrorCode::not_found, fmt::format("unknown user '{}'", user_id));
  return it->second;
}

SendSession SendGate::session(const std::string& session_id) const {
  std::lock_guard lock(state_mu_);
  const auto it = state_.sessions.find(session_id);
  if (it == state_.sessions.end()) throw Error(ErrorCode::not_found, "unknown session");
  return it->second;
}

std::size_t SendGate::expire_idle_sessions() {
  std::vector<AuditEvent> expired;
  {
    std::lock_guard lock(state_mu_);
    const auto now = clock_();
    for (const auto& [id, s] : state_.sessions) {
      if (!in_flight_.contains(id) && now - s.updated_at > options_.session_idle_timeout)
        expired.push_back(make_event(s.user_id, id, events::kSessionExpired));
    }
  }
  std::size_t n = 0;
  for (auto& e : expired) {
    std::lock_guard guard(profile_mutex(e.user_id));
    {
      std::lock_guard lock(state_mu_);
      // Re-check under the profile lock; another request may have touched
      // or removed the session meanwhile.
      const auto it = state_.sessions.find(e.session_id);
      if (it == state_.sessions.end() || in_flight_.contains(e.session_id) ||
          clock_() - it->second.updated_at <= options_.session_idle_timeout)
        continue;
    }
    commit({e});
    ++n;
  }
  return n;
}

}  // namespace sendgate::gate
