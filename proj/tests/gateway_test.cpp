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

#include <fstream>
#include <functional>
#include <thread>

#include <fmt/format.h>
#include <httplib.h>

#include "doctest.h"
#include "sendgate/error.hpp"
#include "sendgate/gateway/api.hpp"
#include "sendgate/gateway/config.hpp"
#include "sendgate/gateway/pipeline.hpp"
#include "sendgate/testkit/corpus.hpp"
#include "support/tempdir.hpp"

using namespace sendgate;
using namespace sendgate::gateway;
using nlohmann::json;

namespace {

constexpr const char* kCode = "0990";
constexpr const char* kToken = "alice-token";
constexpr const char* kSecret = "alice-recovery";

ErrorCode error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::invalid_argument;
}

Config test_config(const fs::path& root) {
  Config c;
  c.store_root = root;
  c.tokens = {{"alice", kToken}, {"bob", "bob-token"}};
  c.recovery_secrets = {{"alice", kSecret}};
  return c;
}

Request call(std::string method, std::string path, json body = nullptr,
             std::string token = kToken) {
  Request r;
  r.method = std::move(method);
  r.path = std::move(path);
  if (!body.is_null()) r.body = body.dump();
  if (!token.empty()) r.headers["authorization"] = "Bearer " + token;
  return r;
}

json evidence_json(const gate::AuthEvidence& e) {
  return {{"method", e.method}, {"token", e.token}};
}

void write_file(const fs::path& p, const std::string& text) {
  fs::create_directories(p.parent_path());
  std::ofstream(p, std::ios::binary) << text;
}

// alice with contact bob and a registered code.
void enroll(Gateway& gw) {
  gw.gate().create_profile("alice", "alice@corp.example", {"bob@corp.example"});
  const auto r = gw.handle(call("POST", "/v1/users/alice/code",
                                {{"new_code", kCode},
                                 {"auth_evidence", evidence_json(RecoverySecretAuthenticator::mint(
                                                       "alice", kSecret))}}));
  REQUIRE(r.status == 200);
  CHECK(r.body.at("status") == "registered");
}

std::string open_draft(Gateway& gw, const std::string& to = "bob@corp.example") {
  const auto s = gw.handle(call("POST", "/v1/session", {{"user_id", "alice"}}));
  REQUIRE(s.status == 200);
  const std::string id = s.body.at("session_id");
  const auto d = gw.handle(call("PUT", "/v1/session/" + id + "/draft",
                                {{"to", {to}}, {"subject", "Status"},
                                 {"body", testkit::legitimate_message(3).body}}));
  REQUIRE(d.status == 200);
  CHECK(d.body.at("state") == "composing");
  return id;
}

}  // namespace

TEST_CASE("config file and environment") {
  const auto c = parse_config(R"(# gateway
host = "0.0.0.0"
port = 9090   # trailing comment
store_root = "/var/lib/sendgate"
threads = 2
styl_threshold = 0.7
lookalike_max_distance = 2
session_idle_minutes = 5

[tokens]
alice = "t-a"

[recovery_secrets]
alice = "s \"q\""
)");
  CHECK(c.host == "0.0.0.0");
  CHECK(c.port == 9090);
  CHECK(c.store_root == fs::path("/var/lib/sendgate"));
  CHECK(c.threads == 2);
  CHECK(c.styl_threshold == 0.7);
  CHECK(c.lookalike_max_distance == 2);
  CHECK(c.session_idle_timeout == std::chrono::minutes(5));
  CHECK(c.tokens.at("alice") == "t-a");
  CHECK(c.recovery_secrets.at("alice") == "s \"q\"");

  for (const char* bad : {"port = x", "port = 70000", "nope = 1", "[other]", "host = \"open",
                          "threads = 0", "styl_threshold = 1.5", "just words"})
    CHECK(error_of([&] { parse_config(bad); }) == ErrorCode::invalid_argument);

  Config e = c;
  apply_env(e, {{"SENDGATE_PORT", "7000"}, {"SENDGATE_TOKEN_bob", "t-b"},
                {"SENDGATE_RECOVERY_SECRET_bob", "s-b"}, {"HOME", "/root"}});
  CHECK(e.port == 7000);
  CHECK(e.tokens.at("bob") == "t-b");
  CHECK(e.recovery_secrets.at("bob") == "s-b");
  CHECK(error_of([&] { apply_env(e, {{"SENDGATE_PORT", "-"}}); }) == ErrorCode::invalid_argument);

  testing::TempDir dir;
  write_file(dir / "gw.toml", "port = 1234\n");
  CHECK(load_config(dir / "gw.toml", {{"SENDGATE_THREADS", "3"}}).port == 1234);
  CHECK(load_config(dir / "gw.toml", {{"SENDGATE_THREADS", "3"}}).threads == 3);
  CHECK(error_of([&] { load_config(dir / "missing.toml", {}); }) == ErrorCode::io_failure);
}

TEST_CASE("corpus ingestion") {
  testing::TempDir dir;
  CHECK(error_of([&] { ingest_corpus(dir.path()); }) == ErrorCode::empty_corpus);
  for (int i = 0; i < 2; ++i) {
    write_file(dir / "legitimate" / fmt::format("{}.eml", i),
               serialize_message(testkit::legitimate_message(static_cast<std::uint64_t>(i))));
    write_file(dir / "impersonated" / fmt::format("{}.eml", i),
               serialize_message(testkit::impersonated_message(static_cast<std::uint64_t>(i))));
  }
  write_file(dir / "legitimate" / "notes.txt", "ignored");
  auto corpus = ingest_corpus(dir.path());
  CHECK(corpus.messages.size() == 4);
  CHECK(corpus.files.size() == 4);
  CHECK(corpus.skipped.empty());
  CHECK(corpus.messages[0].label == authmodel::Label::legitimate);
  CHECK(corpus.messages[3].label == authmodel::Label::impersonated);

  write_file(dir / "impersonated" / "2.eml", "Subject: no sender\n\nbody\n");
  corpus = ingest_corpus(dir.path());
  CHECK(corpus.messages.size() == 4);
  REQUIRE(corpus.skipped.size() == 1);
  CHECK(corpus.skipped[0].path.filename() == "2.eml");
}

TEST_CASE("recovery secret evidence") {
  RecoverySecretAuthenticator auth(std::map<std::string, std::string>{{"alice", kSecret}});
  const auto e = RecoverySecretAuthenticator::mint("alice", kSecret, "abc");
  CHECK(e.method == "recovery-secret");
  CHECK(e.token.starts_with("abc."));
  CHECK_FALSE(auth.redeem("bob", e));
  CHECK(auth.redeem("alice", e));
  CHECK_FALSE(auth.redeem("alice", e));
  CHECK_FALSE(auth.redeem("alice", RecoverySecretAuthenticator::mint("alice", "wrong")));
  auto other = RecoverySecretAuthenticator::mint("alice", kSecret, "n2");
  other.method = "biometric-stub";
  CHECK_FALSE(auth.redeem("alice", other));
  const auto pre = RecoverySecretAuthenticator::mint("alice", kSecret, "n3");
  auth.mark_used(gate::evidence_id(pre));
  CHECK_FALSE(auth.redeem("alice", pre));
}

TEST_CASE("health and unknown routes") {
  testing::TempDir dir;
  Gateway gw(test_config(dir.path()));
  for (const char* path : {"/health", "/v1/health"}) {
    const auto r = gw.handle(call("GET", path, nullptr, ""));
    CHECK(r.status == 200);
    CHECK(r.body.at("status") == "ok");
    CHECK(r.body.at("version") == std::string(kVersion));
  }
  const auto missing = gw.handle(call("GET", "/v1/nothing"));
  CHECK(missing.status == 404);
  CHECK(missing.body.at("error") == "not_found");
  CHECK(missing.body.contains("message"));
  CHECK(gw.handle(call("DELETE", "/v1/session")).status == 404);
}

TEST_CASE("bearer tokens guard every user endpoint") {
  testing::TempDir dir;
  Gateway gw(test_config(dir.path()));
  gw.gate().create_profile("alice", "alice@corp.example", {});
  CHECK(gw.handle(call("POST", "/v1/session", {{"user_id", "alice"}}, "")).status == 401);
  CHECK(gw.handle(call("POST", "/v1/session", {{"user_id", "alice"}}, "bob-token")).status == 401);
  CHECK(gw.handle(call("GET", "/v1/users/alice/settings", nullptr, "alice-tokenx")).status == 401);
  const auto r = gw.handle(call("GET", "/v1/users/alice/settings"));
  CHECK(r.status == 200);
  CHECK(r.body.at("remaining") == 3);
  CHECK(r.body.at("forwarding_address").is_null());
  CHECK(gw.handle(call("POST", "/v1/session", json::array())).status == 400);
  auto raw = call("POST", "/v1/session");
  raw.body = "{not json";
  CHECK(gw.handle(raw).status == 400);
}

TEST_CASE("a verified send goes out") {
  testing::TempDir dir;
  Gateway gw(test_config(dir.path()));
  enroll(gw);
  const auto id = open_draft(gw);
  const auto challenge = gw.handle(call("POST", "/v1/session/" + id + "/send"));
  CHECK(challenge.status == 200);
  CHECK(challenge.body == json{{"status", "code_required"}, {"remaining", 3}});
  const auto sent = gw.handle(call("POST", "/v1/session/" + id + "/code", {{"code", kCode}}));
  CHECK(sent.status == 200);
  CHECK(sent.body.at("status") == "sent");
  std::size_t files = 0;
  for (const auto& e : fs::directory_iterator(dir / "outbox")) files += e.path().extension() == ".eml";
  CHECK(files == 1);
  const auto again = gw.handle(call("POST", "/v1/session/" + id + "/code", {{"code", kCode}}));
  CHECK(again.status == 409);
}

TEST_CASE("three wrong codes lock the account") {
  testing::TempDir dir;
  Gateway gw(test_config(dir.path()));
  enroll(gw);
  const auto id = open_draft(gw);
  gw.handle(call("POST", "/v1/session/" + id + "/send"));
  CHECK(gw.handle(call("POST", "/v1/session/" + id + "/code", {{"code", "12"}})).status == 400);
  for (int remaining : {2, 1}) {
    const auto r = gw.handle(call("POST", "/v1/session/" + id + "/code", {{"code", "1111"}}));
    CHECK(r.status == 401);
    CHECK(r.body.at("status") == "retry");
    CHECK(r.body.at("remaining") == remaining);
  }
  const auto locked = gw.handle(call("POST", "/v1/session/" + id + "/code", {{"code", "1111"}}));
  CHECK(locked.status == 423);
  CHECK(locked.body.at("status") == "locked");
  CHECK(locked.body.at("remaining") == 0);

  const auto next = gw.handle(call("POST", "/v1/session", {{"user_id", "alice"}}));
  if (next.status == 200) {
    const std::string id2 = next.body.at("session_id");
    CHECK(gw.handle(call("POST", "/v1/session/" + id2 + "/send")).status == 423);
  } else {
    CHECK(next.status == 423);
  }
  CHECK(gw.handle(call("GET", "/v1/users/alice/settings")).body.at("locked") == true);

  const auto reset = gw.handle(call("POST", "/v1/users/alice/code",
                                    {{"new_code", "4321"},
                                     {"auth_evidence", evidence_json(RecoverySecretAuthenticator::mint(
                                                           "alice", kSecret))}}));
  CHECK(reset.status == 200);
  CHECK(reset.body.at("remaining") == 3);
}

TEST_CASE("lookalike recipients are reported dangerous") {
  testing::TempDir dir;
  Gateway gw(test_config(dir.path()));
  enroll(gw);
  const auto id = open_draft(gw, "b0b@corp.example");
  gw.handle(call("POST", "/v1/session/" + id + "/send"));
  const auto r = gw.handle(call("POST", "/v1/session/" + id + "/code", {{"code", kCode}}));
  CHECK(r.status == 200);
  CHECK(r.body.at("status") == "dangerous");
  CHECK(r.body.at("reasons") == json{"email_id"});
  CHECK(r.body.at("verdict").is_object());
}

TEST_CASE("settings changes need the code") {
  testing::TempDir dir;
  Gateway gw(test_config(dir.path()));
  enroll(gw);
  const json change = {{"forwarding_address", "drop@evil.example"}};
  const auto refused = gw.handle(call("PUT", "/v1/users/alice/settings", change));
  CHECK(refused.status == 400);
  auto wrong = call("PUT", "/v1/users/alice/settings", change);
  wrong.headers["x-send-code"] = "1111";
  const auto w = gw.handle(wrong);
  CHECK(w.status == 401);
  CHECK(w.body.at("remaining") == 2);
  CHECK(gw.handle(call("GET", "/v1/users/alice/settings")).body.at("forwarding_address").is_null());

  auto right = call("PUT", "/v1/users/alice/settings", {{"forwarding_address", "me@home.example"}});
  right.headers["x-send-code"] = kCode;
  const auto ok = gw.handle(right);
  CHECK(ok.status == 200);
  CHECK(ok.body.at("forwarding_address") == "me@home.example");

  auto clear = call("PUT", "/v1/users/alice/settings", {{"forwarding_address", nullptr}});
  clear.headers["x-send-code"] = kCode;
  CHECK(gw.handle(clear).body.at("forwarding_address").is_null());
}

TEST_CASE("registration evidence is checked") {
  testing::TempDir dir;
  Gateway gw(test_config(dir.path()));
  gw.gate().create_profile("alice", "alice@corp.example", {});
  const auto ev = evidence_json(RecoverySecretAuthenticator::mint("alice", kSecret));
  CHECK(gw.handle(call("POST", "/v1/users/alice/code", {{"new_code", kCode}})).status == 401);
  CHECK(gw.handle(call("POST", "/v1/users/alice/code",
                       {{"new_code", kCode},
                        {"auth_evidence", evidence_json(RecoverySecretAuthenticator::mint(
                                              "alice", "guess"))}}))
            .status == 401);
  CHECK(gw.handle(call("POST", "/v1/users/alice/code", {{"new_code", "12a4"}, {"auth_evidence", ev}}))
            .status == 400);
  CHECK(gw.handle(call("POST", "/v1/users/alice/code", {{"new_code", kCode}, {"auth_evidence", ev}}))
            .status == 200);
  CHECK(gw.handle(call("POST", "/v1/users/alice/code", {{"new_code", kCode}, {"auth_evidence", ev}}))
            .status == 401);
}

TEST_CASE("state survives a restart") {
  testing::TempDir dir;
  json ev;
  std::string id;
  {
    Gateway gw(test_config(dir.path()));
    CHECK(error_of([&] { Gateway second(test_config(dir.path())); }) == ErrorCode::store_locked);
    enroll(gw);
    id = open_draft(gw);
    gw.handle(call("POST", "/v1/session/" + id + "/send"));
    CHECK(gw.handle(call("POST", "/v1/session/" + id + "/code", {{"code", "1111"}})).status == 401);
    ev = evidence_json(RecoverySecretAuthenticator::mint("alice", kSecret, "fixed"));
    CHECK(gw.handle(call("POST", "/v1/users/alice/code", {{"new_code", kCode}, {"auth_evidence", ev}}))
              .status == 200);
  }
  Gateway gw(test_config(dir.path()));
  CHECK(gw.gate().profile("alice").address == "alice@corp.example");
  CHECK(gw.handle(call("POST", "/v1/users/alice/code", {{"new_code", kCode}, {"auth_evidence", ev}}))
            .status == 401);
  const auto fresh = open_draft(gw);
  gw.handle(call("POST", "/v1/session/" + fresh + "/send"));
  CHECK(gw.handle(call("POST", "/v1/session/" + fresh + "/code", {{"code", kCode}})).body.at("status") ==
        "sent");
}

TEST_CASE("responses never echo the code") {
  testing::TempDir dir;
  Gateway gw(test_config(dir.path()));
  enroll(gw);
  const auto id = open_draft(gw);
  std::vector<Response> seen;
  seen.push_back(gw.handle(call("POST", "/v1/session/" + id + "/send")));
  seen.push_back(gw.handle(call("POST", "/v1/session/" + id + "/code", {{"code", "0991"}})));
  seen.push_back(gw.handle(call("POST", "/v1/session/" + id + "/code", {{"code", kCode}})));
  seen.push_back(gw.handle(call("GET", "/v1/users/alice/settings")));
  for (const auto& r : seen) {
    INFO(r.body.dump());
    CHECK(r.body.dump().find(kCode) == std::string::npos);
    CHECK(r.body.dump().find("0991") == std::string::npos);
  }
}

TEST_CASE("HTTP server on an ephemeral port") {
  testing::TempDir dir;
  Gateway gw(test_config(dir.path()));
  enroll(gw);
  HttpServer server(gw, "127.0.0.1", 0, 2);
  REQUIRE(server.port() > 0);
  std::thread loop([&] { server.run(); });

  httplib::Client client("127.0.0.1", server.port());
  client.set_connection_timeout(5);
  httplib::Result health;
  for (int i = 0; i < 100 && !health; ++i) {
    health = client.Get("/health");
    if (!health) std::this_thread::sleep_for(std::chrono::milliseconds(20));
  }
  REQUIRE(health);
  CHECK(health->status == 200);
  CHECK(health->get_header_value("Content-Type").starts_with("application/json"));

  const httplib::Headers auth = {{"Authorization", std::string("Bearer ") + kToken}};
  const auto s = client.Post("/v1/session", auth, json{{"user_id", "alice"}}.dump(), "application/json");
  REQUIRE(s);
  CHECK(s->status == 200);
  const std::string id = json::parse(s->body).at("session_id");
  const auto d = client.Put("/v1/session/" + id + "/draft", auth,
                            json{{"to", {"bob@corp.example"}}, {"subject", "x"},
                                 {"body", testkit::legitimate_message(9).body}}
                                .dump(),
                            "application/json");
  REQUIRE(d);
  CHECK(d->status == 200);
  CHECK(client.Post("/v1/session/" + id + "/send", auth, "", "application/json")->status == 200);
  const auto c = client.Post("/v1/session/" + id + "/code", auth, json{{"code", kCode}}.dump(),
                             "application/json");
  REQUIRE(c);
  CHECK(json::parse(c->body).at("status") == "sent");
  CHECK(client.Get("/v1/users/alice/settings")->status == 401);

  CHECK(error_of([&] { HttpServer clash(gw, "127.0.0.1", server.port(), 1); }) ==
        ErrorCode::port_in_use);
  server.stop();
  loop.join();
}
