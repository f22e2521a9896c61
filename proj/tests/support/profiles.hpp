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

#include <random>

#include "sendgate/gate/types.hpp"

namespace testing {

// A profile with random contacts, settings and, usually, a code record
// filled with random bytes. User ids cycle through user0..user6.
sendgate::gate::UserProfile random_profile(std::mt19937_64& rng, int i);

}  // namespace testing
