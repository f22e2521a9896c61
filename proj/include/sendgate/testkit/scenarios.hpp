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
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace sendgate::testkit {

// Outcome of one scripted attack against an in-memory gate.
struct ScenarioReport {
  std::string name;
  std::string description;
  std::vector<std::string> steps;
  std::size_t code_attempts = 0;       // verifications the gate actually evaluated
  std::size_t sends_without_code = 0;  // sends lacking a logged verification
  std::size_t messages_delivered = 0;
  bool profile_locked = false;
  bool forwarding_changed = false;
  bool passed = false;  // the attack was contained as the protocol requires

  nlohmann::json to_json() const;
};

std::vector<std::string_view> scenario_names();

// Throws Error(invalid_argument) for an unknown name.
ScenarioReport run_scenario(std::string_view name);

}  // namespace sendgate::testkit
