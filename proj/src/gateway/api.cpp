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

#include "sendgate/gateway/api.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>

#include <fmt/format.h>
#include <httplib.h>

#include "sendgate/authmodel/model_io.hpp"
#include "sendgate/codec.hpp"
#include "sendgate/gate/events.hpp"
#include "sendgate/text.hpp"
#include "sendgate/timeutil.hpp"

namespace sendgate::gateway {
namespace {

using nlohmann::json;

std::vector<std::string_view> split_path(std::string_view path) {
  std::vector<std::string_view> parts;
  while (!path.empty()) {
    if (path.front() == '/') {
      path.remove_prefix(1);
      continue;
    }
    const auto slash = path.find('/');
    parts.push_back(path.substr(0, slash));
    if (slash == std::string_view::npos) break;
    path.remove_prefix(slash);
  }
  return parts;
}

json parse_body(const Request& req) {
  if (text::trim(req.body).empty()) return json::object();
  try {
    json j = json::parse(req.body);
    if (!j.is_object()) throw Error(ErrorCode::invalid_argument, "request body must be a JSON object");
    return j;
  } catch (const json::exception&) {
    throw Error(ErrorCode::invalid_argument, "request body is not valid JSON");
  }
}

std::string string_field(const json& body, const char* key, bool required = true) {
  if (!body.contains(key)) {
    if (required) throw Error(ErrorCode::invalid_argument, fmt::format("missing field '{}'", key));
    return {};
  }
  if (!body[key].is_string())
    throw Error(ErrorCode::invalid_argument, fmt::format("field '{}' must be a string", key));
  return body[key].get<std::string>();
}

json session_view(const gate::SendSession& s) {
  json j = {{"session_id", s.session_id},
            {"user_id", s.user_id},
            {"state", gate::to_string(s.state)},
            {"attempts_used", s.attempts_used},
            {"created_at", format_rfc3339(s.created_at)},
            {"updated_at", format_rfc3339(s.updated_at)}};
  if (s.draft) j["draft"] = codec::message_to_json(*s.draft);
  return j;
}

json settings_view(const gate::UserProfile& p) {
  return {{"user_id", p.user_id},
          {"address", p.address},
          {"forwarding_address", p.settings.forwarding_address
                                     ? json(*p.settings.forwarding_address)
                                     : json(nullptr)},
          {"signature", p.settings.signature},
          {"locked", p.locked},
          {"remaining", p.remaining_attempts()}};
}

Response not_found_route(const Request& req) {
  return {404, error_body({404, std::string(to_string(ErrorCode::not_found)),
                           fmt::format("no endpoint {} {}", req.method, req.path),
                           std::nullopt})};
}

bool same_secret(const std::string& a, const std::string& b) {
  const auto bytes = [](const std::string& s) {
    return std::span<const std::uint8_t>(reinterpret_cast<const std::uint8_t*>(s.data()),
                                         s.size());
  };
  return crypto::constant_time_equal(bytes(a), bytes(b));
}

}  // namespace

int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::missing_header:
    case ErrorCode::malformed_header:
    case ErrorCode::malformed_address:
    case ErrorCode::shape_mismatch:
    case ErrorCode::empty_corpus:
    case ErrorCode::single_class_corpus:
    case ErrorCode::invalid_code_format:
    case ErrorCode::invalid_forwarding_address:
    case ErrorCode::manifest_mismatch:
    case ErrorCode::invalid_argument:
      return 400;
    case ErrorCode::auth_rejected:
    case ErrorCode::code_mismatch:
    case ErrorCode::unauthorized:
      return 401;
    case ErrorCode::not_found:
    case ErrorCode::session_expired:
      return 404;
    case ErrorCode::invalid_state:
      return 409;
    case ErrorCode::user_locked:
      return 423;
    case ErrorCode::corrupt_record:
    case ErrorCode::version_mismatch:
    case ErrorCode::io_failure:
    case ErrorCode::store_locked:
    case ErrorCode::port_in_use:
      return 500;
  }
  return 500;
}

ApiError to_api_error(const Error& e) {
  ApiError out{http_status(e.code()), std::string(to_string(e.code())), e.what(),
               e.remaining_attempts()};
  if (e.code() == ErrorCode::user_locked) out.remaining = 0;
  // Storage details stay in the server log.
  if (out.http_status == 500) out.message = "internal storage error";
  return out;
}

json error_body(const ApiError& e) {
  json j = {{"error", e.code}, {"message", e.message}};
  if (e.remaining) j["remaining"] = *e.remaining;
  if (e.code == to_string(ErrorCode::user_locked)) j["status"] = "locked";
  if (e.code == to_string(ErrorCode::code_mismatch)) j["status"] = "retry";
  return j;
}

Gateway::Gateway(Config config)
    : config_(std::move(config)), store_(store::Store::open(config_.store_root, true)) {
  authenticator_ = std::make_unique<RecoverySecretAuthenticator>(config_.recovery_secrets);
  for (const auto& e : store::read_audit(store_.audit_path())) {
    if (e.event == gate::events::kCodeRegistered && e.detail.contains("evidence_id"))
      authenticator_->mark_used(e.detail["evidence_id"].get<std::string>());
  }
  audit_ = std::make_unique<store::FileAuditSink>(store_.audit_path());
  outbox_ = std::make_unique<store::OutboxSink>(store_.outbox_dir());
  assessor_ = std::make_unique<PipelineAssessor>(
      stylometry::FeatureExtractor(config_.lexicon()), config_.homoglyph_table(),
      config_.lookalike_max_distance, models_);
  gate::GateOptions options;
  options.session_idle_timeout = config_.session_idle_timeout;
  options.styl_threshold = config_.styl_threshold;
  gate_ = std::make_unique<gate::SendGate>(hasher_, *authenticator_, *assessor_, *audit_,
                                           *outbox_, [] { return Clock::now(); }, options);
  gate_->restore(store_.load_state());
  observer_ = std::make_unique<store::StoreObserver>(store_);
  gate_->set_observer(observer_.get());

  std::error_code ec;
  for (const auto& entry : fs::directory_iterator(store_.root() / "models", ec)) {
    if (entry.path().extension() != ".json") continue;
    const std::string user = entry.path().stem().string();
    try {
      reload_model(user);
    } catch (const Error& e) {
      fmt::print(stderr, "sendgate: skipping model for '{}': {}\n", user, e.what());
    }
  }
}

Gateway::~Gateway() = default;

void Gateway::reload_model(const std::string& user_id) {
  auto model = std::make_shared<const authmodel::TrainedModel>(authmodel::model_from_json(
      store_.load_model(user_id), assessor_->extractor().manifest_hash()));
  models_.put(user_id, std::move(model));
}

void Gateway::authorize(const Request& req, const std::string& user_id) const {
  const auto it = req.headers.find("authorization");
  const auto token = config_.tokens.find(user_id);
  if (it != req.headers.end() && token != config_.tokens.end() && !token->second.empty()) {
    constexpr std::string_view kBearer = "Bearer ";
    if (it->second.starts_with(kBearer) &&
        same_secret(it->second.substr(kBearer.size()), token->second))
      return;
  }
  throw Error(ErrorCode::unauthorized, "missing or invalid bearer token");
}

Response Gateway::handle(const Request& req) {
  try {
    return route(req);
  } catch (const Error& e) {
    const ApiError api = to_api_error(e);
    if (api.http_status == 500)
      fmt::print(stderr, "sendgate: {} {}: {}\n", req.method, req.path, e.what());
    return {api.http_status, error_body(api)};
  } catch (const json::exception&) {
    return {400, error_body({400, std::string(to_string(ErrorCode::invalid_argument)),
                             "request body has the wrong shape", std::nullopt})};
  } catch (const std::exception& e) {
    fmt::print(stderr, "sendgate: {} {}: {}\n", req.method, req.path, e.what());
    return {500, error_body({500, "internal_error", "internal error", std::nullopt})};
  }
}

Response Gateway::route(const Request& req) {
  const auto parts = split_path(req.path);
  const std::string& m = req.method;
  const auto n = parts.size();

  if (m == "GET" && ((n == 1 && parts[0] == "health") ||
                     (n == 2 && parts[0] == "v1" && parts[1] == "health")))
    return {200, {{"status", "ok"}, {"version", kVersion}}};
  if (n < 2 || parts[0] != "v1") return not_found_route(req);

  if (parts[1] == "session") {
    if (n == 2 && m == "POST") return post_session(req);
    if (n == 4) {
      const std::string id(parts[2]);
      if (parts[3] == "draft" && m == "PUT") return put_draft(req, id);
      if (parts[3] == "send" && m == "POST") return post_send(req, id);
      if (parts[3] == "code" && m == "POST") return post_code(req, id);
    }
  } else if (parts[1] == "users" && n == 4) {
    const std::string id(parts[2]);
    if (parts[3] == "settings" && m == "GET") return get_settings(req, id);
    if (parts[3] == "settings" && m == "PUT") return put_settings(req, id);
    if (parts[3] == "code" && m == "POST") return post_user_code(req, id);
  }
  return not_found_route(req);
}

Response Gateway::post_session(const Request& req) {
  const json body = parse_body(req);
  const std::string user = string_field(body, "user_id");
  authorize(req, user);
  return {200, {{"session_id", gate_->create_session(user)}}};
}

Response Gateway::put_draft(const Request& req, const std::string& session_id) {
  authorize(req, gate_->session(session_id).user_id);
  const json body = parse_body(req);
  if (!body.contains("to") || !body["to"].is_array())
    throw Error(ErrorCode::invalid_argument, "field 'to' must be an array of addresses");
  std::vector<std::string> to;
  for (const auto& r : body["to"]) {
    if (!r.is_string()) throw Error(ErrorCode::invalid_argument, "recipients must be strings");
    to.push_back(std::string(text::trim(r.get<std::string>())));
  }
  const auto session = gate_->update_draft(session_id, to, string_field(body, "subject", false),
                                           string_field(body, "body", false));
  return {200, session_view(session)};
}

Response Gateway::post_send(const Request& req, const std::string& session_id) {
  authorize(req, gate_->session(session_id).user_id);
  const auto challenge = gate_->request_send(session_id);
  return {200, {{"status", "code_required"}, {"remaining", challenge.remaining}}};
}

Response Gateway::post_code(const Request& req, const std::string& session_id) {
  authorize(req, gate_->session(session_id).user_id);
  const json body = parse_body(req);
  if (!body.contains("code") || !body["code"].is_string())
    throw Error(ErrorCode::invalid_code_format, "field 'code' must be a 4-digit string");
  const auto outcome = gate_->submit_code(session_id, body["code"].get<std::string>());
  switch (outcome.status) {
    case gate::SubmitStatus::sent:
      return {200, {{"status", "sent"}, {"remaining", outcome.remaining}}};
    case gate::SubmitStatus::retry:
      return {401,
              {{"status", "retry"},
               {"error", to_string(ErrorCode::code_mismatch)},
               {"message", fmt::format("code mismatch, {} attempt(s) left", outcome.remaining)},
               {"remaining", outcome.remaining}}};
    case gate::SubmitStatus::locked:
      return {423,
              {{"status", "locked"},
               {"error", to_string(ErrorCode::user_locked)},
               {"message", "too many failed attempts; account locked"},
               {"remaining", 0}}};
    case gate::SubmitStatus::dangerous:
      return {200,
              {{"status", "dangerous"},
               {"reasons", outcome.verdict->reasons},
               {"verdict", codec::verdict_to_json(*outcome.verdict)}}};
  }
  throw Error(ErrorCode::invalid_state, "unknown submit outcome");
}

Response Gateway::get_settings(const Request& req, const std::string& user_id) {
  authorize(req, user_id);
  return {200, settings_view(gate_->profile(user_id))};
}

Response Gateway::put_settings(const Request& req, const std::string& user_id) {
  authorize(req, user_id);
  const json body = parse_body(req);
  gate::SettingsChange change;
  if (body.contains("forwarding_address")) {
    const auto& f = body["forwarding_address"];
    if (f.is_null())
      change.forwarding_address = std::optional<std::string>();
    else if (f.is_string())
      change.forwarding_address = std::optional<std::string>(f.get<std::string>());
    else
      throw Error(ErrorCode::invalid_forwarding_address,
                  "forwarding_address must be a string or null");
  }
  if (body.contains("signature")) change.signature = string_field(body, "signature");
  const auto it = req.headers.find("x-send-code");
  const std::string code = it == req.headers.end() ? std::string() : it->second;
  return {200, settings_view(gate_->update_settings(user_id, change, code))};
}

Response Gateway::post_user_code(const Request& req, const std::string& user_id) {
  authorize(req, user_id);
  const json body = parse_body(req);
  if (!body.contains("new_code") || !body["new_code"].is_string())
    throw Error(ErrorCode::invalid_code_format, "field 'new_code' must be a 4-digit string");
  if (!body.contains("auth_evidence") || !body["auth_evidence"].is_object())
    throw Error(ErrorCode::auth_rejected, "auth_evidence is required");
  const json& ev = body["auth_evidence"];
  gate::AuthEvidence evidence{string_field(ev, "method"), string_field(ev, "token"),
                              Clock::now()};
  if (ev.contains("issued_at")) evidence.issued_at = parse_rfc3339(string_field(ev, "issued_at"));
  const auto profile = gate_->register_code(user_id, body["new_code"].get<std::string>(), evidence);
  return {200,
          {{"status", "registered"},
           {"user_id", profile.user_id},
           {"remaining", profile.remaining_attempts()}}};
}

HttpServer::HttpServer(Gateway& gateway, const std::string& host, int port, std::size_t threads)
    : gateway_(gateway), server_(std::make_unique<httplib::Server>()) {
  server_->new_task_queue = [threads] { return new httplib::ThreadPool(threads); };
  server_->set_socket_options([](socket_t sock) {
    int yes = 1;
    ::setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
  });
  const auto handler = [this](const httplib::Request& hreq, httplib::Response& hres) {
    Request req;
    req.method = hreq.method;
    req.path = hreq.path;
    req.body = hreq.body;
    for (const auto& [name, value] : hreq.headers) req.headers[text::to_lower(name)] = value;
    const Response res = gateway_.handle(req);
    hres.status = res.status;
    hres.set_content(res.body.dump(), "application/json; charset=utf-8");
  };
  server_->Get(".*", handler);
  server_->Post(".*", handler);
  server_->Put(".*", handler);
  server_->Delete(".*", handler);
  server_->Patch(".*", handler);
  server_->Options(".*", handler);

  if (port == 0) {
    port_ = server_->bind_to_any_port(host);
  } else {
    port_ = server_->bind_to_port(host, port) ? port : -1;
  }
  if (port_ <= 0)
    throw Error(ErrorCode::port_in_use, fmt::format("cannot bind {}:{}", host, port));
}

HttpServer::~HttpServer() { stop(); }

void HttpServer::run() {
  std::thread sweeper([this] {
    std::unique_lock lock(mu_);
    while (!cv_.wait_for(lock, std::chrono::minutes(1), [this] { return stopping_; })) {
      lock.unlock();
      try {
        gateway_.gate().expire_idle_sessions();
      } catch (const std::exception& e) {
        fmt::print(stderr, "sendgate: session sweep failed: {}\n", e.what());
      }
      lock.lock();
    }
  });
  server_->listen_after_bind();
  {
    std::lock_guard lock(mu_);
    stopping_ = true;
  }
  cv_.notify_all();
  sweeper.join();
}

void HttpServer::stop() {
  {
    std::lock_guard lock(mu_);
    stopping_ = true;
  }
  cv_.notify_all();
  if (server_) server_->stop();
}

}  // namespace sendgate::gateway
