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

#include "sendgate/codec.hpp"

#include "sendgate/error.hpp"

namespace sendgate::codec {
namespace {

identity::Technique technique_from(std::string_view s) {
  using identity::Technique;
  for (auto t : {Technique::dot_insertion, Technique::homoglyph_substitution,
                 Technique::edit_distance, Technique::domain_swap}) {
    if (identity::to_string(t) == s) return t;
  }
  throw Error(ErrorCode::invalid_argument, "unknown lookalike technique");
}

identity::AddressVerdict address_verdict_from(std::string_view s) {
  using identity::AddressVerdict;
  for (auto v : {AddressVerdict::exact_known, AddressVerdict::lookalike_of,
                 AddressVerdict::unknown}) {
    if (identity::to_string(v) == s) return v;
  }
  throw Error(ErrorCode::invalid_argument, "unknown address verdict");
}

}  // namespace

json message_to_json(const Message& m) {
  return {{"from", m.sender},
          {"to", m.recipients},
          {"subject", m.subject},
          {"date", m.date ? json(*m.date) : json(nullptr)},
          {"body", m.body},
          {"raw_size", m.raw_size}};
}

Message message_from_json(const json& j) {
  Message m;
  m.sender = j.at("from").get<std::string>();
  m.recipients = j.at("to").get<std::vector<std::string>>();
  m.subject = j.at("subject").get<std::string>();
  if (j.contains("date") && !j.at("date").is_null())
    m.date = j.at("date").get<std::string>();
  m.body = j.at("body").get<std::string>();
  m.raw_size = j.at("raw_size").get<std::size_t>();
  return m;
}

json report_to_json(const identity::LookalikeReport& r) {
  json evidence = json::array();
  for (const auto& e : r.evidence)
    evidence.push_back({{"technique", identity::to_string(e.technique)},
                        {"detail", e.detail}});
  return {{"address", r.address},
          {"verdict", identity::to_string(r.verdict)},
          {"lookalike_of", r.lookalike_of ? json(*r.lookalike_of) : json(nullptr)},
          {"evidence", std::move(evidence)},
          {"distance", r.distance ? json(*r.distance) : json(nullptr)}};
}

identity::LookalikeReport report_from_json(const json& j) {
  identity::LookalikeReport r;
  r.address = j.at("address").get<std::string>();
  r.verdict = address_verdict_from(j.at("verdict").get<std::string>());
  if (!j.at("lookalike_of").is_null())
    r.lookalike_of = j.at("lookalike_of").get<std::string>();
  for (const auto& e : j.at("evidence"))
    r.evidence.push_back({technique_from(e.at("technique").get<std::string>()),
                          e.at("detail").get<std::string>()});
  if (!j.at("distance").is_null()) r.distance = j.at("distance").get<std::size_t>();
  return r;
}

json verdict_to_json(const authmodel::Verdict& v) {
  return {{"code_ok", v.code_ok},
          {"id_report", report_to_json(v.id_report)},
          {"styl_prob_legitimate", v.styl_prob_legitimate},
          {"decision", authmodel::to_string(v.decision)},
          {"reasons", v.reasons}};
}

authmodel::Verdict verdict_from_json(const json& j) {
  authmodel::Verdict v;
  v.code_ok = j.at("code_ok").get<bool>();
  v.id_report = report_from_json(j.at("id_report"));
  v.styl_prob_legitimate = j.at("styl_prob_legitimate").get<double>();
  const auto d = j.at("decision").get<std::string>();
  v.decision = d == "allow" ? authmodel::Decision::allow : authmodel::Decision::dangerous;
  v.reasons = j.at("reasons").get<std::vector<std::string>>();
  return v;
}

json features_to_json(const stylometry::StylometricVector& v,
                      const std::vector<stylometry::FeatureInfo>& manifest) {
  json features = json::array();
  for (const auto& f : manifest)
    features.push_back({{"index", f.index},
                        {"name", f.name},
                        {"category", stylometry::to_string(f.category)},
                        {"value", v[f.index]}});
  return features;
}

json manifest_to_json(const std::vector<stylometry::FeatureInfo>& manifest) {
  json out = json::array();
  for (const auto& f : manifest)
    out.push_back({{"index", f.index},
                   {"name", f.name},
                   {"category", stylometry::to_string(f.category)}});
  return out;
}

json attributes_to_json(const stylometry::LinguisticAttributes& a) {
  return {{"message_length", a.message_length},
          {"word_count", a.word_count},
          {"sentence_count", a.sentence_count},
          {"avg_word_length", a.avg_word_length},
          {"stopword_count", a.stopword_count},
          {"question_count", a.question_count},
          {"exclamation_count", a.exclamation_count},
          {"capitalized_word_count", a.capitalized_word_count}};
}

}  // namespace sendgate::codec
