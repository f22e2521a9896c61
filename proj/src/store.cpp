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

#include "sendgate/store.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <atomic>
#include <cerrno>
#include <cstring>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "sendgate/crypto.hpp"
#include "sendgate/error.hpp"
#include "sendgate/text.hpp"

namespace sendgate::store {
namespace {

using nlohmann::json;

constexpr std::string_view kTempMarker = ".tmp.";

[[noreturn]] void io_error(const std::string& what, const fs::path& path) {
  throw Error(ErrorCode::io_failure,
              fmt::format("{} '{}': {}", what, path.string(), std::strerror(errno)));
}

void write_all(int fd, std::string_view data, const fs::path& path) {
  while (!data.empty()) {
    const ssize_t n = ::write(fd, data.data(), data.size());
    if (n < 0) {
      if (errno == EINTR) continue;
      io_error("write failed", path);
    }
    data.remove_prefix(static_cast<std::size_t>(n));
  }
}

void fsync_dir(const fs::path& dir) {
  const int fd = ::open(dir.c_str(), O_RDONLY | O_DIRECTORY);
  if (fd < 0) return;
  ::fsync(fd);
  ::close(fd);
}

fs::path temp_path_for(const fs::path& path) {
  static std::atomic<unsigned long> counter{0};
  return fs::path(fmt::format("{}{}{}.{}", path.string(), kTempMarker, ::getpid(),
                              counter.fetch_add(1)));
}

std::string checksum_of(const json& record) {
  return fmt::format("{:08x}", crypto::crc32(record.dump()));
}

std::vector<std::string> json_stems(const fs::path& dir) {
  std::vector<std::string> out;
  std::error_code ec;
  for (const auto& entry : fs::directory_iterator(dir, ec)) {
    const auto& p = entry.path();
    if (entry.is_regular_file() && p.extension() == ".json" &&
        p.filename().string().find(kTempMarker) == std::string::npos)
      out.push_back(p.stem().string());
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

void require_safe_name(std::string_view name) {
  bool ok = !name.empty() && name.size() <= 128 && name.front() != '.';
  for (char c : name) {
    if (!(text::is_ascii_alnum(c) || c == '.' || c == '_' || c == '-')) ok = false;
  }
  if (!ok)
    throw Error(ErrorCode::invalid_argument, fmt::format("unsafe record name '{}'", name));
}

void write_document(const fs::path& path, std::string_view kind, const json& record,
                    const FaultHook& hook) {
  const json doc = {{"version", kSchemaVersion},
                    {"kind", kind},
                    {"checksum", checksum_of(record)},
                    {"record", record}};
  const std::string bytes = doc.dump(2) + "\n";
  const fs::path temp = temp_path_for(path);

  const int fd = ::open(temp.c_str(), O_WRONLY | O_CREAT | O_TRUNC | O_CLOEXEC, 0644);
  if (fd < 0) io_error("cannot create", temp);
  try {
    write_all(fd, bytes, temp);
    if (::fsync(fd) != 0) io_error("fsync failed", temp);
  } catch (...) {
    ::close(fd);
    std::error_code ec;
    fs::remove(temp, ec);
    throw;
  }
  ::close(fd);

  if (hook) hook(SaveStage::temp_written, temp);
  std::error_code ec;
  if (fs::exists(path, ec)) {
    fs::path bak = path;
    bak += ".bak";
    fs::copy_file(path, bak, fs::copy_options::overwrite_existing, ec);
    if (ec) {
      fs::remove(temp, ec);
      throw Error(ErrorCode::io_failure,
                  fmt::format("cannot back up '{}': {}", path.string(), ec.message()));
    }
  }
  if (hook) hook(SaveStage::before_rename, temp);
  if (::rename(temp.c_str(), path.c_str()) != 0) {
    const int saved = errno;
    fs::remove(temp, ec);
    errno = saved;
    io_error("cannot rename into", path);
  }
  fsync_dir(path.parent_path());
  if (hook) hook(SaveStage::after_rename, path);
}

json read_document(const fs::path& path, std::string_view kind) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    if (!fs::exists(path))
      throw Error(ErrorCode::not_found, fmt::format("no record at '{}'", path.string()));
    io_error("cannot read", path);
  }
  std::stringstream buf;
  buf << in.rdbuf();

  json doc;
  try {
    doc = json::parse(buf.str());
  } catch (const json::exception& e) {
    throw Error(ErrorCode::corrupt_record,
                fmt::format("'{}' is not valid JSON: {}", path.string(), e.what()));
  }
  if (!doc.is_object() || !doc.contains("version") || !doc["version"].is_number_integer())
    throw Error(ErrorCode::corrupt_record,
                fmt::format("'{}' has no schema version", path.string()));
  if (doc["version"].get<int>() != kSchemaVersion)
    throw Error(ErrorCode::version_mismatch,
                fmt::format("'{}' has schema version {}, expected {}", path.string(),
                            doc["version"].dump(), kSchemaVersion));
  if (!doc.contains("kind") || doc["kind"] != kind || !doc.contains("record") ||
      !doc.contains("checksum") || !doc["checksum"].is_string())
    throw Error(ErrorCode::corrupt_record,
                fmt::format("'{}' is not a {} document", path.string(), kind));
  if (doc["checksum"].get<std::string>() != checksum_of(doc["record"]))
    throw Error(ErrorCode::corrupt_record,
                fmt::format("checksum mismatch in '{}'", path.string()));
  return std::move(doc["record"]);
}

Store Store::open(const fs::path& root, bool writable) {
  if (!writable) {
    if (!fs::is_directory(root))
      throw Error(ErrorCode::io_failure,
                  fmt::format("store root '{}' does not exist", root.string()));
    return Store(root, -1);
  }
  std::error_code ec;
  for (const char* sub : {"profiles", "models", "sessions", "outbox"}) {
    fs::create_directories(root / sub, ec);
    if (ec)
      throw Error(ErrorCode::io_failure, fmt::format("cannot create '{}': {}",
                                                     (root / sub).string(), ec.message()));
  }
  const fs::path lock_path = root / "store.lock";
  const int fd = ::open(lock_path.c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0644);
  if (fd < 0) io_error("cannot open", lock_path);
  if (::flock(fd, LOCK_EX | LOCK_NB) != 0) {
    ::close(fd);
    throw Error(ErrorCode::store_locked,
                fmt::format("store '{}' is locked by another writer", root.string()));
  }
  // Leftovers from an interrupted save are never valid records.
  for (const char* sub : {"profiles", "models", "sessions", "outbox"}) {
    for (const auto& entry : fs::directory_iterator(root / sub, ec)) {
      if (entry.path().filename().string().find(kTempMarker) != std::string::npos)
        fs::remove(entry.path(), ec);
    }
  }
  return Store(root, fd);
}

Store::Store(Store&& other) noexcept
    : root_(std::move(other.root_)), lock_fd_(other.lock_fd_), hook_(std::move(other.hook_)) {
  other.lock_fd_ = -1;
}

Store& Store::operator=(Store&& other) noexcept {
  if (this != &other) {
    if (lock_fd_ >= 0) ::close(lock_fd_);
    root_ = std::move(other.root_);
    lock_fd_ = other.lock_fd_;
    hook_ = std::move(other.hook_);
    other.lock_fd_ = -1;
  }
  return *this;
}

Store::~Store() {
  if (lock_fd_ >= 0) ::close(lock_fd_);
}

void Store::require_writable() const {
  if (!writable())
    throw Error(ErrorCode::io_failure,
                fmt::format("store '{}' is open read-only", root_.string()));
}

fs::path Store::profile_path(std::string_view user_id) const {
  require_safe_name(user_id);
  return root_ / "profiles" / fmt::format("{}.json", user_id);
}

fs::path Store::session_path(std::string_view session_id) const {
  require_safe_name(session_id);
  return root_ / "sessions" / fmt::format("{}.json", session_id);
}

fs::path Store::model_path(std::string_view user_id) const {
  require_safe_name(user_id);
  return root_ / "models" / fmt::format("{}.json", user_id);
}

void Store::save_profile(const gate::UserProfile& profile) {
  require_writable();
  write_document(profile_path(profile.user_id), "profile", gate::profile_to_json(profile),
                 hook_);
}

gate::UserProfile Store::load_profile(std::string_view user_id) const {
  const json record = read_document(profile_path(user_id), "profile");
  try {
    return gate::profile_from_json(record);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::corrupt_record,
                fmt::format("profile '{}' is malformed: {}", user_id, e.what()));
  }
}

std::vector<std::string> Store::profile_ids() const { return json_stems(root_ / "profiles"); }

void Store::save_session(const gate::SendSession& session) {
  require_writable();
  write_document(session_path(session.session_id), "session",
                 gate::session_to_json(session), hook_);
}

gate::SendSession Store::load_session(std::string_view session_id) const {
  const json record = read_document(session_path(session_id), "session");
  try {
    return gate::session_from_json(record);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::corrupt_record,
                fmt::format("session '{}' is malformed: {}", session_id, e.what()));
  }
}

void Store::remove_session(std::string_view session_id) {
  require_writable();
  const fs::path p = session_path(session_id);
  std::error_code ec;
  fs::remove(p, ec);
  fs::path bak = p;
  bak += ".bak";
  fs::remove(bak, ec);
}

std::vector<std::string> Store::session_ids() const { return json_stems(root_ / "sessions"); }

void Store::save_model(std::string_view user_id, const json& model_doc) {
  require_writable();
  write_document(model_path(user_id), "model", model_doc, hook_);
}

json Store::load_model(std::string_view user_id) const {
  return read_document(model_path(user_id), "model");
}

bool Store::has_model(std::string_view user_id) const {
  return fs::exists(model_path(user_id));
}

gate::GateState Store::load_state() const {
  gate::GateState state;
  for (const auto& id : profile_ids()) state.profiles.emplace(id, load_profile(id));
  for (const auto& id : session_ids()) state.sessions.emplace(id, load_session(id));
  return state;
}

FileAuditSink::FileAuditSink(const fs::path& path) {
  fd_ = ::open(path.c_str(), O_WRONLY | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
  if (fd_ < 0) io_error("cannot open audit log", path);
  // Drop a torn tail left by a crash mid-append; it was never acknowledged.
  std::ifstream in(path, std::ios::binary);
  const std::string content((std::istreambuf_iterator<char>(in)),
                            std::istreambuf_iterator<char>());
  if (!content.empty() && content.back() != '\n') {
    const auto nl = content.rfind('\n');
    const off_t keep = nl == std::string::npos ? 0 : static_cast<off_t>(nl + 1);
    if (::ftruncate(fd_, keep) != 0) io_error("cannot truncate torn tail of", path);
  }
}

FileAuditSink::~FileAuditSink() { close(); }

void FileAuditSink::close() {
  std::lock_guard lock(mu_);
  if (fd_ >= 0) ::close(fd_);
  fd_ = -1;
}

void FileAuditSink::append(const gate::AuditEvent& event) {
  const std::string line = gate::audit_to_json(event).dump() + "\n";
  std::lock_guard lock(mu_);
  if (fd_ < 0) throw Error(ErrorCode::io_failure, "audit log is closed");
  write_all(fd_, line, "audit.log");
  if (::fsync(fd_) != 0) io_error("fsync failed on", "audit.log");
}

std::vector<gate::AuditEvent> read_audit(const fs::path& path) {
  std::vector<gate::AuditEvent> out;
  std::ifstream in(path, std::ios::binary);
  if (!in) return out;
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string content = buf.str();

  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < content.size()) {
    const std::size_t nl = content.find('\n', pos);
    if (nl == std::string::npos) break;  // torn tail
    ++line_no;
    const std::string_view line(content.data() + pos, nl - pos);
    pos = nl + 1;
    if (text::trim(line).empty()) continue;
    try {
      out.push_back(gate::audit_from_json(json::parse(line)));
    } catch (const json::exception& e) {
      throw Error(ErrorCode::corrupt_record,
                  fmt::format("audit line {} is malformed: {}", line_no, e.what()));
    }
  }
  return out;
}

OutboxSink::OutboxSink(fs::path dir, std::function<TimePoint()> clock)
    : dir_(std::move(dir)), clock_(std::move(clock)) {}

void OutboxSink::deliver(const gate::SendSession& session, const Message& message) {
  require_safe_name(session.session_id);
  const fs::path path =
      dir_ / fmt::format("{}-{}.eml", format_compact(clock_()), session.session_id);
  const fs::path temp = temp_path_for(path);
  const int fd = ::open(temp.c_str(), O_WRONLY | O_CREAT | O_TRUNC | O_CLOEXEC, 0644);
  if (fd < 0) io_error("cannot create", temp);
  try {
    write_all(fd, serialize_message(message), temp);
    if (::fsync(fd) != 0) io_error("fsync failed", temp);
  } catch (...) {
    ::close(fd);
    std::error_code ec;
    fs::remove(temp, ec);
    throw;
  }
  ::close(fd);
  if (::rename(temp.c_str(), path.c_str()) != 0) io_error("cannot rename into", path);
  fsync_dir(dir_);
}

void StoreObserver::profile_changed(const gate::UserProfile& profile) {
  store_.save_profile(profile);
}

void StoreObserver::session_changed(const gate::SendSession& session) {
  store_.save_session(session);
}

void StoreObserver::session_removed(const std::string& session_id) {
  store_.remove_session(session_id);
}

}  // namespace sendgate::store
