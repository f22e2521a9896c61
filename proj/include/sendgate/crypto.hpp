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
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sendgate::crypto {

using Bytes = std::vector<std::uint8_t>;

Bytes random_bytes(std::size_t n);

std::string sha256_hex(std::string_view data);

std::string hmac_sha256_hex(std::string_view key, std::string_view data);

Bytes pbkdf2_sha256(std::string_view secret, std::span<const std::uint8_t> salt,
                    std::uint32_t iterations, std::size_t length);

// Compares the full length of both buffers; never exits early on content.
bool constant_time_equal(std::span<const std::uint8_t> a,
                         std::span<const std::uint8_t> b);

std::uint32_t crc32(std::string_view data);

std::string hex_encode(std::span<const std::uint8_t> bytes);

// Yubico "modhex": hex with the digit-free alphabet cbdefghijklnrtuv, so an
// encoded digest can never contain a run of decimal digits.
std::string modhex_encode(std::span<const std::uint8_t> bytes);
Bytes modhex_decode(std::string_view text);

}  // namespace sendgate::crypto
