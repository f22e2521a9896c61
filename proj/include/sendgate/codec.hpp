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

#include <nlohmann/json.hpp>

#include "sendgate/authmodel/fusion.hpp"
#include "sendgate/identity.hpp"
#include "sendgate/message.hpp"
#include "sendgate/stylometry.hpp"

// JSON shapes shared by the CLI, the store, the audit log and the HTTP API.
namespace sendgate::codec {

using nlohmann::json;

json message_to_json(const Message& m);
Message message_from_json(const json& j);

json report_to_json(const identity::LookalikeReport& r);
identity::LookalikeReport report_from_json(const json& j);

json verdict_to_json(const authmodel::Verdict& v);
authmodel::Verdict verdict_from_json(const json& j);

json features_to_json(const stylometry::StylometricVector& v,
                      const std::vector<stylometry::FeatureInfo>& manifest);

json manifest_to_json(const std::vector<stylometry::FeatureInfo>& manifest);

json attributes_to_json(const stylometry::LinguisticAttributes& a);

}  // namespace sendgate::codec
