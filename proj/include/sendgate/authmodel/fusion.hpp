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

#include <string>
#include <string_view>
#include <vector>

#include "sendgate/authmodel/lstm.hpp"
#include "sendgate/identity.hpp"

namespace sendgate::authmodel {

enum class Decision { allow, dangerous };

std::string_view to_string(Decision d);

// Reason names reported for failed checks, in this order.
inline constexpr std::string_view kReasonCode = "code";
inline constexpr std::string_view kReasonEmailId = "email_id";
inline constexpr std::string_view kReasonStylometry = "stylometry";

struct Verdict {
  bool code_ok = false;
  identity::LookalikeReport id_report;
  double styl_prob_legitimate = 0;
  Decision decision = Decision::dangerous;
  std::vector<std::string> reasons;

  bool operator==(const Verdict&) const = default;
};

inline constexpr double kDefaultStylThreshold = 0.5;

// allow only when the code matched, the address is not a lookalike and the
// legitimate-author probability reaches `threshold`.
Verdict fuse(bool code_ok, const identity::LookalikeReport& id_report,
             const Prediction& prediction,
             double threshold = kDefaultStylThreshold);

// Picks the report that should drive the verdict out of a sender report and
// recipient reports: the first lookalike, otherwise the first report.
identity::LookalikeReport most_severe(
    const std::vector<identity::LookalikeReport>& reports);

}  // namespace sendgate::authmodel
