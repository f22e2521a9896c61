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

#include <cstdint>
#include <string>
#include <string_view>

#include "sendgate/crypto.hpp"

namespace sendgate::gate {

inline constexpr std::uint32_t kMinHashIterations = 100'000;
inline constexpr std::size_t kSaltBytes = 16;
inline constexpr std::size_t kDigestBytes = 32;
inline constexpr std::string_view kPbkdf2Algorithm = "pbkdf2-hmac-sha256";

// Salted iterated digest of a send code. The plaintext is never kept.
struct CodeRecord {
  std::string algorithm;
  crypto::Bytes salt;
  crypto::Bytes digest;
  std::uint32_t iterations = 0;

  bool operator==(const CodeRecord&) const = default;
};

// Exactly four ASCII digits.
bool is_valid_code(std::string_view code);

class CodeHasher {
 public:
  virtual ~CodeHasher() = default;
  virtual CodeRecord hash(std::string_view code) const = 0;
  // Must compare full digests without data-dependent early exit.
  virtual bool verify(const CodeRecord& record, std::string_view code) const = 0;
};

class Pbkdf2CodeHasher final : public CodeHasher {
 public:
  // Throws Error(invalid_argument) below kMinHashIterations.
  explicit Pbkdf2CodeHasher(std::uint32_t iterations = kMinHashIterations);

  CodeRecord hash(std::string_view code) const override;
  bool verify(const CodeRecord& record, std::string_view code) const override;

 private:
  std::uint32_t iterations_;
};

}  // namespace sendgate::gate
