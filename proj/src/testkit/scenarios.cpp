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

#include "sendgate/testkit/scenarios.hpp"

#include <condition_variable>
#include <functional>
#include <mutex>
#include <thread>

#include <fmt/format.h>

#include "sendgate/error.hpp"
#include "sendgate/gate/send_gate.hpp"
#include "sendgate/gateway/pipeline.hpp"
#include "sendgate/testkit/doubles.hpp"

namespace sendgate::testkit {
namespace {

constexpr const char* kUser = "alice";
constexpr const char* kAddress = "alice@corp.example";
constexpr const char* kCode = "0990";

// Holds each verify() until released, so a test can overlap two submits.
class GatedHasher final : public gate::CodeHasher {
 public:
  gate::CodeRecord hash(std::string_view code) const override { return inner_.hash(code); }

  bool verify(const gate::CodeRecord& record, std::string_view code) const override {
    const bool result = inner_.verify(record, code);
    std::unique_lock lock(mu_);
    ++entered_;
    cv_.notify_all();
    cv_.wait(lock, [this] { return released_; });
    return result;
  }

  void wait_entered(int n) const {
    std::unique_lock lock(mu_);
    cv_.wait(lock, [&] { return entered_ >= n; });
  }
  void release() const {
    std::lock_guard lock(mu_);
    released_ = true;
    cv_.notify_all();
  }

 private:
  gate::Pbkdf2CodeHasher inner_;
  mutable std::mutex mu_;
  mutable std::condition_variable cv_;
  mutable int entered_ = 0;
  mutable bool released_ = false;
};

// A gate with one registered user and real code hashing.
struct Rig {
  explicit Rig(const gate::CodeHasher& h, std::set<std::string> contacts = {"bob@corp.example"})
      : hasher(h),
        assessor(stylometry::FeatureExtractor(), identity::HomoglyphTable::standard(), 1, models),
        gate(hasher, auth, assessor, audit, delivery) {
    gate.create_profile(kUser, kAddress, std::move(contacts));
    gate.register_code(kUser, kCode, auth.issue(kUser));
  }

  std::string draft_session(const std::string& to) {
    const std::string id = gate.create_session(kUser);
    gate.update_draft(id, {to}, "Invoice", "Please settle the attached invoice today.");
    return id;
  }

  void finish(ScenarioReport& r) {
    const auto log = audit.events();
    r.sends_without_code = unverified_sends(log);
    r.messages_delivered = delivery.size();
    r.profile_locked = gate.profile(kUser).locked;
    r.code_attempts = 0;
    for (const auto& e : log) {
      if (e.event == "code_failed" || e.event == "code_verified") ++r.code_attempts;
    }
  }

  const gate::CodeHasher& hasher;
  gate::OneTimeTokenAuthenticator auth;
  gateway::ModelRegistry models;
  gateway::PipelineAssessor assessor;
  gate::MemoryAuditSink audit;
  gate::MemoryDeliverySink delivery;
  gate::SendGate gate;
};

ScenarioReport named(std::string name, std::string description) {
  ScenarioReport r;
  r.name = std::move(name);
  r.description = std::move(description);
  return r;
}

// Runs `f`, recording its outcome as a step line.
void step(ScenarioReport& r, const std::string& what, const std::function<std::string()>& f) {
  try {
    r.steps.push_back(fmt::format("{} -> {}", what, f()));
  } catch (const Error& e) {
    r.steps.push_back(fmt::format("{} -> {}", what, to_string(e.code())));
  }
}

std::string submit(gate::SendGate& g, const std::string& session, const std::string& code) {
  const auto out = g.submit_code(session, code);
  return fmt::format("{} (remaining {})", gate::to_string(out.status), out.remaining);
}

ScenarioReport hijacked_session() {
  ScenarioReport r = named("hijacked-session",
                              "attacker holds a logged-in webmail session but not the send code");
  const gate::Pbkdf2CodeHasher hasher;
  Rig rig(hasher);
  auto& g = rig.gate;
  const std::string s = rig.draft_session("finance@corp.example");
  step(r, "submit before send", [&] { return submit(g, s, "0000"); });
  step(r, "request send", [&] {
    return fmt::format("code_required (remaining {})", g.request_send(s).remaining);
  });
  for (const char* guess : {"1234", "0000", "1111"})
    step(r, fmt::format("guess {}", guess), [&] { return submit(g, s, guess); });
  step(r, "submit after lock", [&] { return submit(g, s, kCode); });
  const std::string s2 = rig.draft_session("finance@corp.example");
  step(r, "fresh session send", [&] {
    return fmt::format("code_required (remaining {})", g.request_send(s2).remaining);
  });
  rig.finish(r);
  r.passed = r.sends_without_code == 0 && r.messages_delivered == 0 && r.profile_locked;
  return r;
}

ScenarioReport forwarding_hijack() {
  ScenarioReport r = named("forwarding-hijack",
                              "attacker tries to install a forwarding rule without the code");
  const gate::Pbkdf2CodeHasher hasher;
  Rig rig(hasher);
  auto& g = rig.gate;
  const auto before = g.profile(kUser).settings.forwarding_address;
  gate::SettingsChange change;
  change.forwarding_address = std::optional<std::string>("collector@evil.example");
  for (const char* guess : {"1234", "4321", "0000", "9999"}) {
    step(r, fmt::format("set forwarding with {}", guess), [&] {
      g.update_settings(kUser, change, guess);
      return std::string("applied");
    });
  }
  rig.finish(r);
  r.forwarding_changed = g.profile(kUser).settings.forwarding_address != before;
  r.passed = !r.forwarding_changed && r.profile_locked;
  return r;
}

ScenarioReport lookalike_recipient() {
  ScenarioReport r = named("lookalike-recipient",
                              "owner is lured into replying to a dot-inserted lookalike of a contact");
  const gate::Pbkdf2CodeHasher hasher;
  Rig rig(hasher, {"agaga@gmail.com"});
  auto& g = rig.gate;
  const std::string s = rig.draft_session("aga.ga@gmail.com");
  step(r, "request send", [&] {
    return fmt::format("code_required (remaining {})", g.request_send(s).remaining);
  });
  std::vector<std::string> reasons;
  step(r, "submit correct code", [&] {
    const auto out = g.submit_code(s, kCode);
    if (out.verdict) reasons = out.verdict->reasons;
    return fmt::format("{} reasons=[{}]", gate::to_string(out.status), fmt::join(reasons, ","));
  });
  rig.finish(r);
  r.passed = r.messages_delivered == 0 && reasons == std::vector<std::string>{"email_id"} &&
             !r.profile_locked;
  return r;
}

ScenarioReport brute_force() {
  ScenarioReport r = named("brute-force",
                              "attacker walks the 10,000-code space across sessions");
  const gate::Pbkdf2CodeHasher hasher;
  Rig rig(hasher);
  auto& g = rig.gate;
  std::size_t refused = 0;
  for (int guess = 0; guess < 10000; ++guess) {
    const std::string code = fmt::format("{:04d}", guess);
    if (code == kCode) continue;
    try {
      const std::string s = rig.draft_session("finance@corp.example");
      g.request_send(s);
      g.submit_code(s, code);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::user_locked) throw;
      ++refused;
    }
  }
  r.steps.push_back(fmt::format("{} guesses refused as user_locked", refused));
  rig.finish(r);
  r.passed = r.code_attempts == 3 && r.sends_without_code == 0 && r.messages_delivered == 0 &&
             r.profile_locked;
  return r;
}

ScenarioReport concurrent_submit() {
  ScenarioReport r = named("concurrent-submit",
                              "two code submissions race on one session; only one may count");
  const GatedHasher hasher;
  Rig rig(hasher);
  auto& g = rig.gate;
  const std::string s = rig.draft_session("finance@corp.example");
  g.request_send(s);
  std::string first;
  std::thread t([&] {
    try {
      first = submit(g, s, "1234");
    } catch (const Error& e) {
      first = std::string(to_string(e.code()));
    }
  });
  hasher.wait_entered(1);
  std::string second;
  try {
    second = submit(g, s, "4321");
  } catch (const Error& e) {
    second = std::string(to_string(e.code()));
  }
  hasher.release();
  t.join();
  r.steps.push_back("first submit -> " + first);
  r.steps.push_back("racing submit -> " + second);
  rig.finish(r);
  r.passed = r.code_attempts == 1 && second == "invalid_state" &&
             g.profile(kUser).failed_attempts == 1;
  return r;
}

}  // namespace

nlohmann::json ScenarioReport::to_json() const {
  return {{"scenario", name},
          {"description", description},
          {"steps", steps},
          {"code_attempts", code_attempts},
          {"sends_without_code", sends_without_code},
          {"messages_delivered", messages_delivered},
          {"profile_locked", profile_locked},
          {"forwarding_changed", forwarding_changed},
          {"passed", passed}};
}

std::vector<std::string_view> scenario_names() {
  return {"hijacked-session", "forwarding-hijack", "lookalike-recipient", "brute-force",
          "concurrent-submit"};
}

ScenarioReport run_scenario(std::string_view name) {
  if (name == "hijacked-session") return hijacked_session();
  if (name == "forwarding-hijack") return forwarding_hijack();
  if (name == "lookalike-recipient") return lookalike_recipient();
  if (name == "brute-force") return brute_force();
  if (name == "concurrent-submit") return concurrent_submit();
  throw Error(ErrorCode::invalid_argument, fmt::format("unknown scenario '{}'", name));
}

}  // namespace sendgate::testkit
