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

#include "sendgate/crypto.hpp"

#include <openssl/crypto.h>
#include <openssl/evp.h>
#include <openssl/hmac.h>
#include <openssl/rand.h>
#include <zlib.h>

#include "sendgate/error.hpp"

namespace sendgate::crypto {
namespace {

constexpr std::string_view kModhex = "cbdefghijklnrtuv";

}  // namespace

Bytes random_bytes(std::size_t n) {
  Bytes out(n);
  if (n > 0 && RAND_bytes(out.data(), static_cast<int>(n)) != 1)
    throw Error(ErrorCode::io_failure, "system random source failed");
  return out;
}

std::string hmac_sha256_hex(std::string_view key, std::string_view data) {
  unsigned char out[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (HMAC(EVP_sha256(), key.data(), static_cast<int>(key.size()),
           reinterpret_cast<const unsigned char*>(data.data()), data.size(), out,
           &len) == nullptr)
    throw Error(ErrorCode::io_failure, "HMAC-SHA256 failed");
  return hex_encode(std::span<const std::uint8_t>(out, len));
}

std::string sha256_hex(std::string_view data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) !=
      1)
    throw Error(ErrorCode::io_failure, "sha256 failed");
  return hex_encode(std::span<const std::uint8_t>(md, len));
}

Bytes pbkdf2_sha256(std::string_view secret, std::span<const std::uint8_t> salt,
                    std::uint32_t iterations, std::size_t length) {
  Bytes out(length);
  if (PKCS5_PBKDF2_HMAC(secret.data(), static_cast<int>(secret.size()),
                        salt.data(), static_cast<int>(salt.size()),
                        static_cast<int>(iterations), EVP_sha256(),
                        static_cast<int>(length), out.data()) != 1)
    throw Error(ErrorCode::io_failure, "pbkdf2 failed");
  return out;
}

bool constant_time_equal(std::span<const std::uint8_t> a,
                         std::span<const std::uint8_t> b) {
  if (a.size() != b.size()) return false;
  return CRYPTO_memcmp(a.data(), b.data(), a.size()) == 0;
}

std::uint32_t crc32(std::string_view data) {
  uLong crc = ::crc32(0L, Z_NULL, 0);
  crc = ::crc32(crc, reinterpret_cast<const Bytef*>(data.data()),
                static_cast<uInt>(data.size()));
  return static_cast<std::uint32_t>(crc);
}

std::string hex_encode(std::span<const std::uint8_t> bytes) {
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (auto b : bytes) {
    out.push_back(kHex[b >> 4]);
    out.push_back(kHex[b & 0x0f]);
  }
  return out;
}

std::string modhex_encode(std::span<const std::uint8_t> bytes) {
  std::string out;
  out.reserve(bytes.size() * 2);
  for (auto b : bytes) {
    out.push_back(kModhex[b >> 4]);
    out.push_back(kModhex[b & 0x0f]);
  }
  return out;
}

Bytes modhex_decode(std::string_view text) {
  if (text.size() % 2 != 0)
    throw Error(ErrorCode::corrupt_record, "odd-length modhex string");
  Bytes out;
  out.reserve(text.size() / 2);
  auto nibble = [](char c) {
    const auto pos = kModhex.find(c);
    if (pos == std::string_view::npos)
      throw Error(ErrorCode::corrupt_record, "invalid modhex character");
    return static_cast<std::uint8_t>(pos);
  };
  for (std::size_t i = 0; i < text.size(); i += 2)
    out.push_back(static_cast<std::uint8_t>(nibble(text[i]) << 4 |
                                            nibble(text[i + 1])));
  return out;
}

}  // namespace sendgate::crypto
