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

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "sendgate/authmodel/fusion.hpp"
#include "sendgate/authmodel/train.hpp"
#include "sendgate/gate/types.hpp"
#include "sendgate/identity.hpp"
#include "sendgate/stylometry.hpp"

namespace sendgate::gateway {

namespace fs = std::filesystem;

using ModelPtr = std::shared_ptr<const authmodel::TrainedModel>;

// Per-user model snapshots. Readers keep the snapshot they got; put()
// replaces it for later readers.
class ModelRegistry {
 public:
  ModelPtr get(const std::string& user_id) const;
  void put(const std::string& user_id, ModelPtr model);
  void erase(const std::string& user_id);
  std::size_t size() const;

 private:
  mutable std::mutex mu_;
  std::map<std::string, ModelPtr> models_;
};

// Identity and style checks on a draft. Users without a trained model get a
// neutral style score of 1.0 (legitimate).
class PipelineAssessor final : public gate::MessageAssessor {
 public:
  PipelineAssessor(stylometry::FeatureExtractor extractor,
                   identity::HomoglyphTable table, std::size_t max_distance,
                   const ModelRegistry& models);

  gate::Assessment assess(const gate::UserProfile& profile,
                          const Message& draft) const override;

  // The sender is checked against the user's own address and contacts;
  // each recipient against the contacts and the own address. Returns the
  // most severe report.
  identity::LookalikeReport identity_report(const gate::UserProfile& profile,
                                            const Message& message) const;

  authmodel::Prediction style_prediction(const std::string& user_id,
                                         const Message& message) const;

  const stylometry::FeatureExtractor& extractor() const { return extractor_; }

 private:
  stylometry::FeatureExtractor extractor_;
  identity::HomoglyphTable table_;
  std::size_t max_distance_;
  const ModelRegistry& models_;
};

// Evidence tokens of the form "<nonce>.<hex HMAC-SHA256(secret, user:nonce)>"
// under method "recovery-secret". Each token is accepted once.
class RecoverySecretAuthenticator final : public gate::StrongAuthenticator {
 public:
  static constexpr std::string_view kMethod = "recovery-secret";

  explicit RecoverySecretAuthenticator(std::map<std::string, std::string> secrets);

  static gate::AuthEvidence mint(const std::string& user_id, const std::string& secret,
                                 std::string nonce = {});

  // Marks evidence consumed in an earlier run, by gate::evidence_id.
  void mark_used(const std::string& evidence_id);

  bool redeem(const std::string& user_id, const gate::AuthEvidence& evidence) override;

 private:
  std::mutex mu_;
  std::map<std::string, std::string> secrets_;
  std::set<std::string> used_;
};

// The full fusion decision for one message without touching any state:
// code check (read-only), identity check and style check.
authmodel::Verdict verify_offline(const gate::UserProfile& profile, const Message& message,
                                  const std::optional<std::string>& code,
                                  const gate::CodeHasher& hasher,
                                  const PipelineAssessor& assessor,
                                  double threshold = authmodel::kDefaultStylThreshold);

struct SkippedFile {
  fs::path path;
  std::string reason;
};

struct Corpus {
  std::vector<authmodel::LabeledMessage> messages;
  std::vector<fs::path> files;  // parallel to messages
  std::vector<SkippedFile> skipped;
};

// Reads <dir>/legitimate/*.eml and <dir>/impersonated/*.eml, each sorted by
// file name. Unparseable files are skipped and reported. Throws
// Error(empty_corpus) when nothing parses.
Corpus ingest_corpus(const fs::path& dir);

}  // namespace sendgate::gateway
