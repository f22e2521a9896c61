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
#include <functional>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "sendgate/gate/send_gate.hpp"
#include "sendgate/gate/types.hpp"

namespace sendgate::store {

namespace fs = std::filesystem;

inline constexpr int kSchemaVersion = 1;

// Points inside an atomic save where a test hook may run. A hook that throws
// simulates a crash at that point.
enum class SaveStage { temp_written, before_rename, after_rename };

using FaultHook = std::function<void(SaveStage stage, const fs::path& temp)>;

// Writes {version, kind, checksum, record} to `path` through a temp file and
// rename. An existing file is copied to `<path>.bak` first. checksum is the
// CRC-32 (8 lowercase hex digits) of record.dump().
void write_document(const fs::path& path, std::string_view kind,
                    const nlohmann::json& record, const FaultHook& hook = {});

// Throws not_found or version_mismatch. Anything unreadable, of the wrong
// kind or failing its checksum throws corrupt_record.
nlohmann::json read_document(const fs::path& path, std::string_view kind);

// Profile and session file names must match [A-Za-z0-9._-]+ without a
// leading dot. Throws Error(invalid_argument).
void require_safe_name(std::string_view name);

// A store root: profiles/, models/, sessions/, outbox/, audit.log and
// store.lock. A writable handle holds an exclusive flock on store.lock;
// read-only handles take no lock and only ever see renamed files.
class Store {
 public:
  // Creates the layout when writable. Throws store_locked if another
  // writer holds the root, io_failure if it cannot be created or read.
  static Store open(const fs::path& root, bool writable = true);

  Store(Store&& other) noexcept;
  Store& operator=(Store&& other) noexcept;
  Store(const Store&) = delete;
  Store& operator=(const Store&) = delete;
  ~Store();

  const fs::path& root() const { return root_; }
  bool writable() const { return lock_fd_ >= 0; }

  fs::path profile_path(std::string_view user_id) const;
  fs::path session_path(std::string_view session_id) const;
  fs::path model_path(std::string_view user_id) const;
  fs::path audit_path() const { return root_ / "audit.log"; }
  fs::path outbox_dir() const { return root_ / "outbox"; }

  void save_profile(const gate::UserProfile& profile);
  gate::UserProfile load_profile(std::string_view user_id) const;
  std::vector<std::string> profile_ids() const;

  void save_session(const gate::SendSession& session);
  gate::SendSession load_session(std::string_view session_id) const;
  void remove_session(std::string_view session_id);
  std::vector<std::string> session_ids() const;

  void save_model(std::string_view user_id, const nlohmann::json& model_doc);
  nlohmann::json load_model(std::string_view user_id) const;
  bool has_model(std::string_view user_id) const;

  // Every stored profile and session.
  gate::GateState load_state() const;

  // Test seam for crash simulation.
  void set_fault_hook(FaultHook hook) { hook_ = std::move(hook); }

 private:
  Store(fs::path root, int lock_fd) : root_(std::move(root)), lock_fd_(lock_fd) {}
  void require_writable() const;

  fs::path root_;
  int lock_fd_ = -1;
  FaultHook hook_;
};

// Appends NDJSON audit records, fsyncing each line before returning.
class FileAuditSink final : public gate::AuditSink {
 public:
  explicit FileAuditSink(const fs::path& path);
  ~FileAuditSink() override;
  FileAuditSink(const FileAuditSink&) = delete;
  FileAuditSink& operator=(const FileAuditSink&) = delete;

  void append(const gate::AuditEvent& event) override;
  // Later appends throw io_failure.
  void close();

 private:
  std::mutex mu_;
  int fd_ = -1;
};

// Reads an audit log. A torn final line without a newline is ignored; any
// other unparseable line throws corrupt_record. A missing file is empty.
std::vector<gate::AuditEvent> read_audit(const fs::path& path);

// Writes each accepted message to `<dir>/<compact ts>-<session_id>.eml`.
class OutboxSink final : public gate::DeliverySink {
 public:
  explicit OutboxSink(fs::path dir,
                      std::function<TimePoint()> clock = [] { return Clock::now(); });
  void deliver(const gate::SendSession& session, const Message& message) override;

 private:
  fs::path dir_;
  std::function<TimePoint()> clock_;
};

// Mirrors gate state changes into a store.
class StoreObserver final : public gate::GateObserver {
 public:
  explicit StoreObserver(Store& store) : store_(store) {}
  void profile_changed(const gate::UserProfile& profile) override;
  void session_changed(const gate::SendSession& session) override;
  void session_removed(const std::string& session_id) override;

 private:
  Store& store_;
};

}  // namespace sendgate::store
