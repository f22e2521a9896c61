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

#include <atomic>
#include <condition_variable>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>

#include <nlohmann/json.hpp>

#include "sendgate/error.hpp"
#include "sendgate/gate/code.hpp"
#include "sendgate/gate/send_gate.hpp"
#include "sendgate/gateway/config.hpp"
#include "sendgate/gateway/pipeline.hpp"
#include "sendgate/store.hpp"

namespace httplib {
class Server;
}

namespace sendgate::gateway {

inline constexpr std::string_view kVersion = "0.1.0";

struct ApiError {
  int http_status = 500;
  std::string code;  // machine string, see to_string(ErrorCode)
  std::string message;
  std::optional<int> remaining;
};

int http_status(ErrorCode code);
ApiError to_api_error(const Error& e);
// {error, message[, remaining][, status: "locked"]}
nlohmann::json error_body(const ApiError& e);

struct Request {
  std::string method;
  std::string path;
  std::map<std::string, std::string> headers;  // lowercase names
  std::string body;
};

struct Response {
  int status = 200;
  nlohmann::json body;
};

// Everything behind the HTTP endpoints: store, audit log, outbox, gate and
// the identity/style pipeline. Thread safe.
class Gateway {
 public:
  // Opens the store as its single writer and restores profiles and
  // sessions. Throws store_locked.
  explicit Gateway(Config config);
  ~Gateway();

  Response handle(const Request& request);

  gate::SendGate& gate() { return *gate_; }
  store::Store& store() { return store_; }
  ModelRegistry& models() { return models_; }
  const PipelineAssessor& assessor() const { return *assessor_; }
  const Config& config() const { return config_; }

  // Loads models/<user>.json into the registry, replacing any earlier one.
  void reload_model(const std::string& user_id);

 private:
  Response route(const Request& request);
  void authorize(const Request& request, const std::string& user_id) const;

  Response post_session(const Request& request);
  Response put_draft(const Request& request, const std::string& session_id);
  Response post_send(const Request& request, const std::string& session_id);
  Response post_code(const Request& request, const std::string& session_id);
  Response get_settings(const Request& request, const std::string& user_id);
  Response put_settings(const Request& request, const std::string& user_id);
  Response post_user_code(const Request& request, const std::string& user_id);

  Config config_;
  store::Store store_;
  std::unique_ptr<store::FileAuditSink> audit_;
  std::unique_ptr<store::OutboxSink> outbox_;
  gate::Pbkdf2CodeHasher hasher_;
  std::unique_ptr<RecoverySecretAuthenticator> authenticator_;
  ModelRegistry models_;
  std::unique_ptr<PipelineAssessor> assessor_;
  std::unique_ptr<gate::SendGate> gate_;
  std::unique_ptr<store::StoreObserver> observer_;
};

// HTTP front end. Binds in the constructor so PortInUse surfaces early.
class HttpServer {
 public:
  // Throws port_in_use.
  HttpServer(Gateway& gateway, const std::string& host, int port, std::size_t threads);
  ~HttpServer();

  int port() const { return port_; }

  // Blocks until stop(). Idle sessions are swept once a minute meanwhile.
  void run();
  // Stops accepting, lets in-flight requests finish, then returns from run().
  void stop();

 private:
  Gateway& gateway_;
  std::unique_ptr<httplib::Server> server_;
  int port_ = 0;
  std::mutex mu_;
  std::condition_variable cv_;
  bool stopping_ = false;
};

}  // namespace sendgate::gateway
