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

#include "sendgate/identity.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "sendgate/error.hpp"
#include "sendgate/message.hpp"
#include "sendgate/text.hpp"

namespace sendgate::identity {
namespace {

struct Parts {
  std::string local;
  std::string domain;
};

Parts split_lower(std::string_view address) {
  if (!is_valid_address(address))
    throw Error(ErrorCode::malformed_address,
                fmt::format("malformed address '{}'", address));
  const auto at = address.find('@');
  return {text::to_lower(address.substr(0, at)),
          text::to_lower(address.substr(at + 1))};
}

std::string strip_dots(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c != '.') out.push_back(c);
  }
  return out;
}

}  // namespace

std::string_view to_string(Technique t) {
  switch (t) {
    case Technique::dot_insertion: return "dot_insertion";
    case Technique::homoglyph_substitution: return "homoglyph_substitution";
    case Technique::edit_distance: return "edit_distance";
    case Technique::domain_swap: return "domain_swap";
  }
  return "unknown";
}

std::string_view to_string(AddressVerdict v) {
  switch (v) {
    case AddressVerdict::exact_known: return "exact_known";
    case AddressVerdict::lookalike_of: return "lookalike_of";
    case AddressVerdict::unknown: return "unknown";
  }
  return "unknown";
}

HomoglyphTable::HomoglyphTable(
    int version, std::vector<std::pair<std::string, std::string>> entries)
    : version_(version), entries_(std::move(entries)) {
  for (const auto& [from, to] : entries_) {
    if (from.empty())
      throw Error(ErrorCode::invalid_argument, "empty homoglyph key");
  }
  std::stable_sort(entries_.begin(), entries_.end(),
                   [](const auto& a, const auto& b) {
                     if (a.first.size() != b.first.size())
                       return a.first.size() > b.first.size();
                     return a.first < b.first;
                   });
}

const HomoglyphTable& HomoglyphTable::standard() {
  static const HomoglyphTable kTable(
      1, {{"0", "o"}, {"1", "l"}, {"3", "e"}, {"5", "s"}, {"rn", "m"}, {"vv", "w"}});
  return kTable;
}

HomoglyphTable HomoglyphTable::parse(std::string_view json) {
  try {
    const auto doc = nlohmann::json::parse(json);
    std::vector<std::pair<std::string, std::string>> entries;
    for (const auto& [k, v] : doc.at("map").items())
      entries.emplace_back(text::to_lower(k), text::to_lower(v.get<std::string>()));
    return HomoglyphTable(doc.at("version").get<int>(), std::move(entries));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::invalid_argument,
                fmt::format("bad homoglyph table: {}", e.what()));
  }
}

HomoglyphTable HomoglyphTable::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in)
    throw Error(ErrorCode::io_failure,
                fmt::format("cannot read homoglyph table {}", path.string()));
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

std::string HomoglyphTable::apply(std::string_view s) const {
  std::string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    bool matched = false;
    for (const auto& [from, to] : entries_) {
      if (s.substr(i).starts_with(from)) {
        out += to;
        i += from.size();
        matched = true;
        break;
      }
    }
    if (!matched) out.push_back(s[i++]);
  }
  return out;
}

std::string skeleton(std::string_view address, const HomoglyphTable& table) {
  const Parts p = split_lower(address);
  return table.apply(strip_dots(p.local) + "@" + p.domain);
}

std::size_t levenshtein(std::string_view a, std::string_view b) {
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1,
                         diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[b.size()];
}

LookalikeReport analyze_address(std::string_view address,
                                const std::set<std::string>& contacts,
                                const LookalikePolicy& policy) {
  const HomoglyphTable& table = *policy.table;
  const Parts parts = split_lower(address);
  const std::string lowered = parts.local + "@" + parts.domain;
  const std::string skel = skeleton(address, table);

  LookalikeReport report;
  report.address = std::string(address);

  // Sorted iteration gives the lexicographic tie-break for free.
  const std::string* best = nullptr;
  std::size_t best_distance = 0;
  for (const auto& contact : contacts) {
    const Parts cp = split_lower(contact);
    if (cp.local + "@" + cp.domain == lowered) {
      report.verdict = AddressVerdict::exact_known;
      report.distance = 0;
      return report;
    }
    const std::size_t d = levenshtein(skel, skeleton(contact, table));
    if (best == nullptr || d < best_distance) {
      best = &contact;
      best_distance = d;
    }
  }
  if (best == nullptr) return report;

  report.distance = best_distance;
  if (best_distance != 0 && best_distance > policy.max_distance) return report;

  const Parts cp = split_lower(*best);
  const std::string local_a = strip_dots(parts.local);
  const std::string local_c = strip_dots(cp.local);
  if (local_a == local_c && parts.local != cp.local) {
    report.evidence.push_back(
        {Technique::dot_insertion,
         fmt::format("local part '{}' equals '{}' once dots are removed",
                     parts.local, cp.local)});
  }
  const std::string plain_a = local_a + "@" + parts.domain;
  const std::string plain_c = local_c + "@" + cp.domain;
  if (levenshtein(plain_a, plain_c) > best_distance) {
    report.evidence.push_back(
        {Technique::homoglyph_substitution,
         fmt::format("'{}' folds to '{}' under the confusable table", plain_a,
                     table.apply(plain_a))});
  }
  const std::string skel_local_a = table.apply(local_a);
  const std::string skel_local_c = table.apply(local_c);
  if (skel_local_a == skel_local_c &&
      table.apply(parts.domain) != table.apply(cp.domain)) {
    report.evidence.push_back(
        {Technique::domain_swap,
         fmt::format("same mailbox '{}' under domain '{}' instead of '{}'",
                     skel_local_a, parts.domain, cp.domain)});
  }
  if (best_distance > 0) {
    report.evidence.push_back(
        {Technique::edit_distance,
         fmt::format("skeleton edit distance {} to '{}'", best_distance, *best)});
  }
  report.verdict = AddressVerdict::lookalike_of;
  report.lookalike_of = *best;
  return report;
}

std::set<std::string> load_contacts(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in)
    throw Error(ErrorCode::io_failure,
                fmt::format("cannot read contacts file {}", path.string()));
  std::set<std::string> contacts;
  std::string line;
  while (std::getline(in, line)) {
    const auto t = text::trim(line);
    if (t.empty() || t.front() == '#') continue;
    if (!is_valid_address(t))
      throw Error(ErrorCode::malformed_address,
                  fmt::format("malformed contact '{}'", t));
    contacts.emplace(t);
  }
  return contacts;
}

}  // namespace sendgate::identity
