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
#include <cstdint>
#include <vector>

#include "sendgate/authmodel/train.hpp"

namespace sendgate::testkit {

// Two writing styles for one mailbox: the owner's formal, structured mail
// and short, urgent messages typical of a takeover. Labels alternate and
// the order is shuffled from `seed`.
std::vector<authmodel::LabeledMessage> generate_corpus(std::size_t count,
                                                       std::uint64_t seed);

// One message in the owner's style.
Message legitimate_message(std::uint64_t seed);
// One message in the takeover style.
Message impersonated_message(std::uint64_t seed);

}  // namespace sendgate::testkit
