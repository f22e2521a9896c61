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

#include <cstddef>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace sendgate::identity {

enum class Technique { dot_insertion, homoglyph_substitution, edit_distance, domain_swap };

std::string_view to_string(Technique t);

struct Evidence {
  Technique technique;
  std::string detail;

  bool operator==(const Evidence&) const = default;
};

enum class AddressVerdict { exact_known, lookalike_of, unknown };

std::string_view to_string(AddressVerdict v);

struct LookalikeReport {
  std::string address;
  AddressVerdict verdict = AddressVerdict::unknown;
  std::optional<std::string> lookalike_of;  // set iff verdict == lookalike_of
  std::vector<Evidence> evidence;
  // Minimum skeleton edit distance to any contact; empty when there are no
  // contacts to compare against.
  std::optional<std::size_t> distance;

  bool operator==(const LookalikeReport&) const = default;
};

// Confusable sequences mapped to their canonical form. Multi-character keys
// ("rn" -> "m") are matched before single characters, left to right.
class HomoglyphTable {
 public:
  HomoglyphTable(int version, std::vector<std::pair<std::string, std::string>> entries);

  static const HomoglyphTable& standard();

  // JSON document {"version": n, "map": {"0": "o", ...}}.
  static HomoglyphTable load(const std::filesystem::path& path);
  static HomoglyphTable parse(std::string_view json);

  std::string apply(std::string_view s) const;
  int version() const { return version_; }
  const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

 private:
  int version_;
  std::vector<std::pair<std::string, std::string>> entries_;  // longest key first
};

// Lowercase, strip dots from the local part, then fold homoglyphs.
// Throws Error(malformed_address).
std::string skeleton(std::string_view address,
                     const HomoglyphTable& table = HomoglyphTable::standard());

std::size_t levenshtein(std::string_view a, std::string_view b);

struct LookalikePolicy {
  std::size_t max_distance = 1;
  const HomoglyphTable* table = &HomoglyphTable::standard();
};

// exact_known on a case-insensitive match; otherwise the contact with the
// smallest skeleton distance (ties: lexicographically smallest contact) is a
// lookalike when the distance is within policy or the skeletons coincide.
LookalikeReport analyze_address(std::string_view address,
                                const std::set<std::string>& contacts,
                                const LookalikePolicy& policy = {});

// Reads one address per line, '#' comments and blanks skipped.
std::set<std::string> load_contacts(const std::filesystem::path& path);

}  // namespace sendgate::identity
