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

#include <string_view>

#include <nlohmann/json.hpp>

#include "sendgate/authmodel/train.hpp"

namespace sendgate::authmodel {

inline constexpr int kModelFormatVersion = 1;

// {version, feature_manifest_hash, vocab, dims, tensors, seed,
//  training_config}. Tensors carry explicit shapes; the stylometric
// standardizer travels as the styl_mean / styl_std tensors.
nlohmann::json model_to_json(const TrainedModel& model);

// Throws Error(version_mismatch) for other format versions and
// Error(manifest_mismatch) when the model was trained against a different
// feature manifest than `expected_manifest_hash`.
TrainedModel model_from_json(const nlohmann::json& doc,
                             std::string_view expected_manifest_hash);

}  // namespace sendgate::authmodel
