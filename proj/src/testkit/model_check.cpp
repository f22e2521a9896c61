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

#include "sendgate/testkit/model_check.hpp"

#include <optional>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "sendgate/error.hpp"
#include "sendgate/gate/events.hpp"
#include "sendgate/gate/send_gate.hpp"
#include "sendgate/testkit/doubles.hpp"

namespace sendgate::testkit {
namespace {

using gate::SessionState;

constexpr std::string_view kUser = "alice";
constexpr std::string_view kCorrect = "0990";
constexpr std::string_view kWrong = "1111";
constexpr std::string_view kOwnForward = "archive@corp.example";
constexpr std::string_view kAttackerForward = "attacker@evil.example";

// What the caller observes from one operation.
struct Observed {
  std::optional<ErrorCode> error;
  std::optional<gate::SubmitStatus> status;

  bool operator==(const Observed&) const = default;
};

// Reference model of the protocol, written from the rules rather than from
// the gate's code.
struct Oracle {
  bool locked = false;
  int failures = 0;
  int session_attempts = 0;
  SessionState state = SessionState::composing;
  std::optional<std::string> forwarding;

  Observed step(Op op) {
    const auto fail = [](ErrorCode c) { return Observed{c, std::nullopt}; };
    const auto status = [](gate::SubmitStatus s) { return Observed{std::nullopt, s}; };
    switch (op) {
      case Op::request_send:
        if (locked) return fail(ErrorCode::user_locked);
        if (state != SessionState::composing) return fail(ErrorCode::invalid_state);
        state = SessionState::awaiting_code;
        return {};
      case Op::submit_correct:
        if (locked) return fail(ErrorCode::user_locked);
        if (state != SessionState::awaiting_code) return fail(ErrorCode::invalid_state);
        state = SessionState::sent;
        return status(gate::SubmitStatus::sent);
      case Op::submit_wrong:
        if (locked) return fail(ErrorCode::user_locked);
        if (state != SessionState::awaiting_code) return fail(ErrorCode::invalid_state);
        ++failures;
        ++session_attempts;
        if (failures >= 3 || session_attempts >= 3) {
          locked = true;
          state = SessionState::failed_locked;
          return status(gate::SubmitStatus::locked);
        }
        return status(gate::SubmitStatus::retry);
      case Op::settings_fwd_correct:
        if (locked) return fail(ErrorCode::user_locked);
        forwarding = std::string(kOwnForward);
        return {};
      case Op::settings_fwd_wrong:
        if (locked) return fail(ErrorCode::user_locked);
        if (++failures >= 3) {
          locked = true;
          return fail(ErrorCode::user_locked);
        }
        return fail(ErrorCode::code_mismatch);
      case Op::register_valid:
        locked = false;
        failures = 0;
        return {};
      case Op::register_replayed:
        return fail(ErrorCode::auth_rejected);
    }
    return {};
  }
};

class Checker {
 public:
  explicit Checker(std::size_t max_depth)
      : gate_(hasher_, auth_, assessor_, audit_, delivery_, [] { return TimePoint{}; }) {
    report_.max_depth = max_depth;
    gate_.create_profile(std::string(kUser), "alice@corp.example", {"bob@corp.example"});
    gate_.register_code(std::string(kUser), std::string(kCorrect), {"biometric-stub", "valid", {}});
    session_ = gate_.create_session(std::string(kUser));
    gate_.update_draft(session_, {"bob@corp.example"}, "numbers", "See the attached figures.");
  }

  ModelCheckReport run() {
    Oracle oracle;
    visit(oracle, false);
    return report_;
  }

 private:
  Observed apply(Op op) {
    Observed o;
    try {
      switch (op) {
        case Op::request_send:
          gate_.request_send(session_);
          break;
        case Op::submit_correct:
          o.status = gate_.submit_code(session_, std::string(kCorrect)).status;
          break;
        case Op::submit_wrong:
          o.status = gate_.submit_code(session_, std::string(kWrong)).status;
          break;
        case Op::settings_fwd_correct:
        case Op::settings_fwd_wrong: {
          gate::SettingsChange change;
          const bool good = op == Op::settings_fwd_correct;
          change.forwarding_address =
              std::optional<std::string>(std::string(good ? kOwnForward : kAttackerForward));
          gate_.update_settings(std::string(kUser), change,
                                std::string(good ? kCorrect : kWrong));
          break;
        }
        case Op::register_valid:
          gate_.register_code(std::string(kUser), std::string(kCorrect),
                              {"biometric-stub", "valid", {}});
          break;
        case Op::register_replayed:
          gate_.register_code(std::string(kUser), std::string(kCorrect),
                              {"biometric-stub", "replayed", {}});
          break;
      }
    } catch (const Error& e) {
      o.error = e.code();
    }
    return o;
  }

  void problem(std::size_t& counter, std::string what) {
    ++counter;
    if (report_.first_problem.empty()) {
      report_.first_counterexample = path_;
      report_.first_problem = std::move(what);
    }
  }

  // `verified` records whether the log on this path already holds a
  // successful send verification for the session.
  void visit(const Oracle& oracle, bool verified) {
    ++report_.sequences;
    if (path_.size() == report_.max_depth) return;

    const gate::GateState saved = gate_.snapshot();
    const std::size_t audit_mark = audit_.size();
    const std::size_t delivery_mark = delivery_.size();

    for (std::size_t k = 0; k < kOpCount; ++k) {
      const Op op = static_cast<Op>(k);
      path_.push_back(op);
      const auto& before = saved.profiles.at(std::string(kUser));
      const int attempts_before = saved.sessions.at(session_).attempts_used;

      Oracle next = oracle;
      const Observed expected = next.step(op);
      const Observed got = apply(op);

      bool now_verified = verified;
      for (const auto& e : audit_.events_from(audit_mark)) {
        if (e.event == gate::events::kCodeVerified && e.session_id == session_)
          now_verified = true;
        if (e.event == gate::events::kMessageSent && !now_verified)
          problem(report_.safety_violations, "message_sent logged before any verification");
      }

      const auto state = gate_.snapshot();
      const auto& profile = state.profiles.at(std::string(kUser));
      const auto& session = state.sessions.at(session_);

      if (session.state == SessionState::sent) {
        ++report_.sent_paths;
        if (!now_verified) problem(report_.safety_violations, "sent without verification");
        if (delivery_.size() != 1) problem(report_.safety_violations, "sent but not delivered");
      } else if (delivery_.size() != 0) {
        problem(report_.safety_violations, "delivered while not sent");
      }

      if (profile.locked) ++report_.locked_paths;
      if (profile.failed_attempts >= gate::kMaxAttempts && !profile.locked)
        problem(report_.lockout_violations, "three failures without lock");
      const bool verifying = op != Op::register_valid && op != Op::register_replayed;
      if (before.locked && verifying && got.error != ErrorCode::user_locked)
        problem(report_.lockout_violations, "locked profile accepted a verification");
      if (session.attempts_used < attempts_before || session.attempts_used > gate::kMaxAttempts)
        problem(report_.lockout_violations, "session attempt counter out of range");

      const bool failed = got.error.has_value() ||
                          (got.status && *got.status != gate::SubmitStatus::sent);
      if (failed && profile.settings.forwarding_address != before.settings.forwarding_address)
        problem(report_.forwarding_violations, "forwarding changed on a failing path");
      if (profile.settings.forwarding_address == std::optional<std::string>(kAttackerForward))
        problem(report_.forwarding_violations, "attacker forwarding installed");

      if (got != expected || profile.locked != next.locked ||
          profile.failed_attempts != next.failures || session.state != next.state ||
          session.attempts_used != next.session_attempts ||
          profile.settings.forwarding_address != next.forwarding)
        problem(report_.oracle_mismatches, fmt::format("gate disagrees with reference after {}",
                                                       to_string(op)));

      visit(next, now_verified);

      gate_.restore(saved);
      audit_.truncate(audit_mark);
      delivery_.truncate(delivery_mark);
      path_.pop_back();
    }
  }

  CachingHasher hasher_;
  StubAuthenticator auth_;
  FixedAssessor assessor_;
  gate::MemoryAuditSink audit_;
  gate::MemoryDeliverySink delivery_;
  gate::SendGate gate_;
  std::string session_;
  std::vector<Op> path_;
  ModelCheckReport report_;
};

}  // namespace

std::string_view to_string(Op op) {
  switch (op) {
    case Op::request_send: return "request_send";
    case Op::submit_correct: return "submit_correct";
    case Op::submit_wrong: return "submit_wrong";
    case Op::settings_fwd_correct: return "settings_fwd_correct";
    case Op::settings_fwd_wrong: return "settings_fwd_wrong";
    case Op::register_valid: return "register_valid";
    case Op::register_replayed: return "register_replayed";
  }
  return "unknown";
}

ModelCheckReport check_send_gate(std::size_t max_depth) {
  return Checker(max_depth).run();
}

}  // namespace sendgate::testkit
