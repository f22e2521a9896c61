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

#include "sendgate/authmodel/fusion.hpp"

#include <algorithm>

namespace sendgate::authmodel {

std::string_view to_string(Decision d) {
  return d == Decision::allow ? "allow" : "dangerous";
}

Verdict fuse(bool code_ok, const identity::LookalikeReport& id_report,
             const Prediction& prediction, double threshold) {
  Verdict v;
  v.code_ok = code_ok;
  v.id_report = id_report;
  v.styl_prob_legitimate = prediction.legitimate();
  if (!code_ok) v.reasons.emplace_back(kReasonCode);
  if (id_report.verdict == identity::AddressVerdict::lookalike_of)
    v.reasons.emplace_back(kReasonEmailId);
  if (!(prediction.legitimate() >= threshold))
    v.reasons.emplace_back(kReasonStylometry);
  v.decision = v.reasons.empty() ? Decision::allow : Decision::dangerous;
  return v;
}

identity::LookalikeReport most_severe(
    const std::vector<identity::LookalikeReport>& reports) {
  const auto it = std::find_if(reports.begin(), reports.end(), [](const auto& r) {
    return r.verdict == identity::AddressVerdict::lookalike_of;
  });
  if (it != reports.end()) return *it;
  return reports.empty() ? identity::LookalikeReport{} : reports.front();
}

}  // namespace sendgate::authmodel
