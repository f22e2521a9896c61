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

#include "sendgate/gateway/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "sendgate/crypto.hpp"
#include "sendgate/error.hpp"
#include "sendgate/text.hpp"

namespace sendgate::gateway {

ModelPtr ModelRegistry::get(const std::string& user_id) const {
  std::lock_guard lock(mu_);
  const auto it = models_.find(user_id);
  return it == models_.end() ? nullptr : it->second;
}

void ModelRegistry::put(const std::string& user_id, ModelPtr model) {
  std::lock_guard lock(mu_);
  models_[user_id] = std::move(model);
}

void ModelRegistry::erase(const std::string& user_id) {
  std::lock_guard lock(mu_);
  models_.erase(user_id);
}

std::size_t ModelRegistry::size() const {
  std::lock_guard lock(mu_);
  return models_.size();
}

PipelineAssessor::PipelineAssessor(stylometry::FeatureExtractor extractor,
                                   identity::HomoglyphTable table,
                                   std::size_t max_distance, const ModelRegistry& models)
    : extractor_(std::move(extractor)),
      table_(std::move(table)),
      max_distance_(max_distance),
      models_(models) {}

identity::LookalikeReport PipelineAssessor::identity_report(
    const gate::UserProfile& profile, const Message& message) const {
  const identity::LookalikePolicy policy{max_distance_, &table_};
  std::set<std::string> known = profile.contacts;
  known.insert(profile.address);

  std::vector<identity::LookalikeReport> reports;
  reports.push_back(identity::analyze_address(message.sender, known, policy));
  for (const auto& r : message.recipients)
    reports.push_back(identity::analyze_address(r, known, policy));
  return authmodel::most_severe(reports);
}

authmodel::Prediction PipelineAssessor::style_prediction(const std::string& user_id,
                                                         const Message& message) const {
  const ModelPtr model = models_.get(user_id);
  if (!model) return authmodel::Prediction{{1.0, 0.0}, authmodel::Label::legitimate};
  return model->predict(message, extractor_);
}

gate::Assessment PipelineAssessor::assess(const gate::UserProfile& profile,
                                          const Message& draft) const {
  return {identity_report(profile, draft), style_prediction(profile.user_id, draft)};
}

RecoverySecretAuthenticator::RecoverySecretAuthenticator(
    std::map<std::string, std::string> secrets)
    : secrets_(std::move(secrets)) {}

gate::AuthEvidence RecoverySecretAuthenticator::mint(const std::string& user_id,
                                                     const std::string& secret,
                                                     std::string nonce) {
  if (nonce.empty()) nonce = crypto::hex_encode(crypto::random_bytes(16));
  const std::string mac = crypto::hmac_sha256_hex(secret, user_id + ":" + nonce);
  return {std::string(kMethod), nonce + "." + mac, Clock::now()};
}

void RecoverySecretAuthenticator::mark_used(const std::string& evidence_id) {
  std::lock_guard lock(mu_);
  used_.insert(evidence_id);
}

bool RecoverySecretAuthenticator::redeem(const std::string& user_id,
                                         const gate::AuthEvidence& evidence) {
  if (evidence.method != kMethod) return false;
  const auto dot = evidence.token.find('.');
  if (dot == std::string::npos || dot == 0 || dot > 128) return false;
  const std::string nonce = evidence.token.substr(0, dot);
  const std::string mac = evidence.token.substr(dot + 1);

  std::lock_guard lock(mu_);
  const auto it = secrets_.find(user_id);
  if (it == secrets_.end() || it->second.empty()) return false;
  const std::string expected = crypto::hmac_sha256_hex(it->second, user_id + ":" + nonce);
  const auto as_bytes = [](const std::string& s) {
    return std::span<const std::uint8_t>(reinterpret_cast<const std::uint8_t*>(s.data()),
                                         s.size());
  };
  if (!crypto::constant_time_equal(as_bytes(expected), as_bytes(mac))) return false;
  return used_.insert(gate::evidence_id(evidence)).second;
}

authmodel::Verdict verify_offline(const gate::UserProfile& profile, const Message& message,
                                  const std::optional<std::string>& code,
                                  const gate::CodeHasher& hasher,
                                  const PipelineAssessor& assessor, double threshold) {
  bool code_ok = false;
  if (code && profile.code && gate::is_valid_code(*code))
    code_ok = hasher.verify(*profile.code, *code);
  const auto a = assessor.assess(profile, message);
  return authmodel::fuse(code_ok, a.id_report, a.prediction, threshold);
}

Corpus ingest_corpus(const fs::path& dir) {
  Corpus corpus;
  const std::pair<const char*, authmodel::Label> classes[] = {
      {"legitimate", authmodel::Label::legitimate},
      {"impersonated", authmodel::Label::impersonated}};
  for (const auto& [sub, label] : classes) {
    std::vector<fs::path> files;
    std::error_code ec;
    for (const auto& entry : fs::directory_iterator(dir / sub, ec)) {
      if (entry.is_regular_file() && entry.path().extension() == ".eml")
        files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end(),
              [](const fs::path& a, const fs::path& b) { return a.filename() < b.filename(); });
    for (const auto& path : files) {
      std::ifstream in(path, std::ios::binary);
      if (!in) {
        corpus.skipped.push_back({path, "unreadable"});
        continue;
      }
      std::stringstream buf;
      buf << in.rdbuf();
      try {
        corpus.messages.push_back({parse_message(buf.str()), label});
        corpus.files.push_back(path);
      } catch (const Error& e) {
        corpus.skipped.push_back({path, fmt::format("{}: {}", to_string(e.code()), e.what())});
      }
    }
  }
  if (corpus.messages.empty())
    throw Error(ErrorCode::empty_corpus,
                fmt::format("no parseable messages under '{}'", dir.string()));
  return corpus;
}

}  // namespace sendgate::gateway
