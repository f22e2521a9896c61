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

#include <string_view>

// Audit event names. The log is the source of truth for gate state.
namespace sendgate::gate::events {

inline constexpr std::string_view kProfileCreated = "profile_created";
inline constexpr std::string_view kProfileUpdated = "profile_updated";
inline constexpr std::string_view kCodeRegistered = "code_registered";
inline constexpr std::string_view kAuthRejected = "auth_rejected";
inline constexpr std::string_view kSessionCreated = "session_created";
inline constexpr std::string_view kDraftUpdated = "draft_updated";
inline constexpr std::string_view kSendRequested = "send_requested";
inline constexpr std::string_view kCodeVerified = "code_verified";
inline constexpr std::string_view kCodeFailed = "code_failed";
inline constexpr std::string_view kProfileLocked = "profile_locked";
inline constexpr std::string_view kMessageSent = "message_sent";
inline constexpr std::string_view kMessageBlocked = "message_blocked";
inline constexpr std::string_view kSettingsUpdated = "settings_updated";
inline constexpr std::string_view kForwardingChanged = "forwarding_changed";
inline constexpr std::string_view kSessionExpired = "session_expired";

}  // namespace sendgate::gate::events
